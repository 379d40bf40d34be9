#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace cst::cli {

/// Hex SHA-256 of a file's bytes.
[[nodiscard]] std::string sha256_file(const std::filesystem::path& path);
[[nodiscard]] std::string sha256_bytes(std::string_view bytes);

struct FileDigest {
  std::string role;
  std::string path;
  std::string sha256;
};

/// Sidecar written next to every output: what ran, with which settings, on
/// which exact inputs. Its "config" object is accepted back by --config.
struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  nlohmann::json config = nlohmann::json::object();
  std::vector<FileDigest> inputs;
  std::vector<FileDigest> outputs;

  void add_input(std::string role, const std::filesystem::path& path);
  void add_output(std::string role, const std::filesystem::path& path);
  [[nodiscard]] nlohmann::json to_json() const;
  void write(const std::filesystem::path& path) const;
};

[[nodiscard]] std::string toolkit_version();

}  // namespace cst::cli
