#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cst/dataset.hpp"

namespace cst {

enum class AttributeKind { continuous, ordinal, interval, categorical };
enum class AttributeRole { relevant, protected_attribute, decision, ignored };

struct AttributeSpec {
  std::string name;
  AttributeKind kind = AttributeKind::continuous;
  AttributeRole role = AttributeRole::relevant;
};

/// One conjunct of the protected-group definition: `attribute == value`.
struct ProtectedValue {
  std::string attribute;
  double value = 1.0;
};

/// Column kinds and roles of an audited dataset. Only `relevant` attributes
/// enter distances; the decision column is binary with `positive` marking
/// the favourable outcome.
struct AttributeSchema {
  std::vector<AttributeSpec> attributes;
  std::string decision = "Y";
  double positive = 1.0;
  std::vector<ProtectedValue> protected_values;

  [[nodiscard]] std::vector<AttributeSpec> relevant() const;
  [[nodiscard]] const AttributeSpec& attribute(std::string_view name) const;
  /// Throws unless the schema is internally consistent and every named
  /// column exists in `data`.
  void check_against(const Dataset& data) const;
};

struct Range {
  double min = 0.0;
  double max = 0.0;
  [[nodiscard]] bool degenerate() const noexcept { return !(max > min); }
  [[nodiscard]] double width() const noexcept { return max - min; }
};

struct AttributeRange {
  std::string name;
  Range range;
};

/// (min, max) of every non-categorical attribute over all records of `data`.
[[nodiscard]] std::vector<AttributeRange> attribute_ranges(const Dataset& data,
                                                           const AttributeSchema& schema);

enum class Normalization { min_max, none };

struct DistanceSpec {
  Normalization normalization = Normalization::min_max;
};

/// Categorical: 0 when equal, 1 otherwise. Otherwise |v - w| / (max - min),
/// or |v - w| when `range` is null (normalization off). Throws for a
/// degenerate range with v != w.
[[nodiscard]] double per_attribute_distance(AttributeKind kind, double v, double w,
                                            const Range* range);

/// Everything the distance kernels need, resolved once per audit: relevant
/// columns in schema order, their divisors, and which are categorical.
/// Degenerate attributes are left out of the kernel (they add 0) but still
/// count in the |X| denominator.
class DistanceContext {
 public:
  DistanceContext(const Dataset& factual, const AttributeSchema& schema, DistanceSpec spec = {});

  [[nodiscard]] std::span<const std::string> columns() const noexcept { return columns_; }
  [[nodiscard]] std::span<const double> divisors() const noexcept { return divisors_; }
  [[nodiscard]] std::span<const std::uint8_t> categorical() const noexcept { return categorical_; }
  [[nodiscard]] double attribute_count() const noexcept { return attribute_count_; }
  [[nodiscard]] std::span<const std::string> warnings() const noexcept { return warnings_; }

  /// Kernel-ordered values of record `row` of `data` (factual or counterfactual).
  [[nodiscard]] std::vector<double> center_of(const Dataset& data, std::size_t row) const;

  /// Reference evaluation of the mean per-attribute distance between two
  /// kernel-ordered tuples.
  [[nodiscard]] double distance(std::span<const double> x, std::span<const double> y) const;

 private:
  std::vector<std::string> columns_;
  std::vector<double> divisors_;
  std::vector<std::uint8_t> categorical_;
  double attribute_count_ = 0.0;
  std::vector<std::string> warnings_;
};

/// Mean per-attribute distance over the relevant attributes of two records
/// given in schema order (values for every schema attribute).
[[nodiscard]] double tuple_distance(std::span<const double> x, std::span<const double> y,
                                    const AttributeSchema& schema,
                                    std::span<const AttributeRange> ranges,
                                    DistanceSpec spec = {});

[[nodiscard]] std::string to_string(AttributeKind kind);
[[nodiscard]] AttributeKind parse_attribute_kind(std::string_view text);
[[nodiscard]] std::string to_string(AttributeRole role);
[[nodiscard]] AttributeRole parse_attribute_role(std::string_view text);

}  // namespace cst
