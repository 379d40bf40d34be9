#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cst {

/// Base of every error the toolkit raises for bad input or violated
/// preconditions. Messages are meant for end users.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Column-major table of numeric attributes. Categorical values are stored as
/// numeric codes; `levels` keeps the original labels when a column was read
/// from text.
class Dataset {
 public:
  struct Column {
    std::string name;
    std::vector<double> values;
    std::vector<std::string> levels;
  };

  Dataset() = default;

  [[nodiscard]] std::size_t size() const noexcept { return rows_; }
  [[nodiscard]] std::size_t num_columns() const noexcept { return columns_.size(); }
  [[nodiscard]] bool empty() const noexcept { return rows_ == 0; }

  [[nodiscard]] std::optional<std::size_t> find(std::string_view name) const noexcept;
  [[nodiscard]] std::size_t index_of(std::string_view name) const;
  [[nodiscard]] bool has(std::string_view name) const noexcept { return find(name).has_value(); }

  [[nodiscard]] std::span<const double> column(std::size_t i) const { return columns_.at(i).values; }
  [[nodiscard]] std::span<const double> column(std::string_view name) const {
    return columns_[index_of(name)].values;
  }
  [[nodiscard]] const Column& column_info(std::size_t i) const { return columns_.at(i); }
  [[nodiscard]] std::vector<std::string> names() const;

  [[nodiscard]] double at(std::size_t row, std::string_view name) const {
    return column(name)[row];
  }

  /// Adds a column or replaces one with the same name. The first column fixes
  /// the row count; later columns must match it.
  void set_column(std::string name, std::vector<double> values,
                  std::vector<std::string> levels = {});

  /// Rows whose index appears in `rows`, in that order.
  [[nodiscard]] Dataset select_rows(std::span<const std::size_t> rows) const;

  friend bool operator==(const Dataset& a, const Dataset& b);

 private:
  std::vector<Column> columns_;
  std::size_t rows_ = 0;
};

}  // namespace cst
