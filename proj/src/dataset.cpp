#include "cst/dataset.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace cst {

std::optional<std::size_t> Dataset::find(std::string_view name) const noexcept {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t Dataset::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw Error(fmt::format("missing column '{}'", name));
}

std::vector<std::string> Dataset::names() const {
  std::vector<std::string> out;
  out.reserve(columns_.size());
  for (const auto& c : columns_) out.push_back(c.name);
  return out;
}

void Dataset::set_column(std::string name, std::vector<double> values,
                         std::vector<std::string> levels) {
  if (columns_.empty()) {
    rows_ = values.size();
  } else if (values.size() != rows_) {
    throw Error(fmt::format("column '{}' has {} rows, expected {}", name, values.size(), rows_));
  }
  if (auto i = find(name)) {
    columns_[*i].values = std::move(values);
    columns_[*i].levels = std::move(levels);
    return;
  }
  columns_.push_back(Column{std::move(name), std::move(values), std::move(levels)});
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows) const {
  Dataset out;
  for (const auto& c : columns_) {
    std::vector<double> v;
    v.reserve(rows.size());
    for (auto r : rows) v.push_back(c.values.at(r));
    out.set_column(c.name, std::move(v), c.levels);
  }
  if (columns_.empty()) out.rows_ = 0;
  return out;
}

bool operator==(const Dataset& a, const Dataset& b) {
  if (a.rows_ != b.rows_ || a.columns_.size() != b.columns_.size()) return false;
  for (std::size_t i = 0; i < a.columns_.size(); ++i) {
    const auto& x = a.columns_[i];
    const auto& y = b.columns_[i];
    if (x.name != y.name || x.values != y.values) return false;
  }
  return true;
}

}  // namespace cst
