#include "cst/csv.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <unordered_map>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace cst {
namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  const char* begin = s.data();
  if (*begin == '+') ++begin;
  double v = 0;
  auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(trim(std::move(cur)));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (quoted) throw Error("unterminated quoted field");
  fields.push_back(trim(std::move(cur)));
  return fields;
}

Dataset read_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split_csv_line(line);
      break;
    }
  }
  if (header.empty()) throw Error(fmt::format("{}: missing header row", source));
  // Strip a UTF-8 byte-order mark.
  if (header[0].rfind("\xEF\xBB\xBF", 0) == 0) header[0].erase(0, 3);
  for (auto& h : header) {
    if (h.empty()) throw Error(fmt::format("{}:{}: empty column name", source, line_no));
  }

  std::vector<std::vector<std::string>> cells(header.size());
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    try {
      fields = split_csv_line(line);
    } catch (const Error& e) {
      throw Error(fmt::format("{}:{}: {}", source, line_no, e.what()));
    }
    if (fields.size() != header.size()) {
      throw Error(fmt::format("{}:{}: expected {} fields, found {}", source, line_no,
                              header.size(), fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (fields[c].empty()) {
        throw Error(fmt::format("{}:{}: empty value in column '{}'", source, line_no, header[c]));
      }
      cells[c].push_back(std::move(fields[c]));
    }
  }

  Dataset out;
  for (std::size_t c = 0; c < header.size(); ++c) {
    std::vector<double> values;
    values.reserve(cells[c].size());
    bool numeric = true;
    for (const auto& s : cells[c]) {
      auto v = parse_number(s);
      if (!v) {
        numeric = false;
        break;
      }
      values.push_back(*v);
    }
    std::vector<std::string> levels;
    if (!numeric) {
      values.clear();
      std::unordered_map<std::string, double> codes;
      for (const auto& s : cells[c]) {
        auto [it, inserted] = codes.try_emplace(s, static_cast<double>(levels.size()));
        if (inserted) levels.push_back(s);
        values.push_back(it->second);
      }
    }
    if (out.has(header[c])) {
      throw Error(fmt::format("{}: duplicate column '{}'", source, header[c]));
    }
    out.set_column(header[c], std::move(values), std::move(levels));
  }
  return out;
}

Dataset read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
  return read_csv(in, path.string());
}

void write_csv(std::ostream& out, const Dataset& data) {
  const auto n_cols = data.num_columns();
  for (std::size_t c = 0; c < n_cols; ++c) {
    if (c) out << ',';
    out << data.column_info(c).name;
  }
  out << '\n';
  fmt::memory_buffer buf;
  for (std::size_t r = 0; r < data.size(); ++r) {
    buf.clear();
    for (std::size_t c = 0; c < n_cols; ++c) {
      if (c) buf.push_back(',');
      const auto& col = data.column_info(c);
      const double v = col.values[r];
      if (!col.levels.empty()) {
        fmt::format_to(std::back_inserter(buf), "{}", col.levels.at(static_cast<std::size_t>(v)));
      } else {
        fmt::format_to(std::back_inserter(buf), "{}", v);
      }
    }
    buf.push_back('\n');
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
}

void write_csv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  write_csv(out, data);
}

}  // namespace cst
