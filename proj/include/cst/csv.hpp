#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cst/dataset.hpp"

namespace cst {

/// Comma-separated text with a header row, UTF-8, '.' as decimal point.
/// Quoted fields ("a,b" and "" escapes) are accepted. A column whose cells are
/// not all numeric is read as categorical: each distinct label gets a code
/// 0, 1, 2, ... in order of first appearance.
[[nodiscard]] Dataset read_csv(std::istream& in, const std::string& source = "<stream>");
[[nodiscard]] Dataset read_csv(const std::filesystem::path& path);

/// Writes numbers in shortest round-trip form, so read_csv(write_csv(d)) == d.
void write_csv(std::ostream& out, const Dataset& data);
void write_csv(const std::filesystem::path& path, const Dataset& data);

/// Splits one CSV record. Exposed for the schema and latents readers.
[[nodiscard]] std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace cst
