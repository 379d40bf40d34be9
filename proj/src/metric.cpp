#include "cst/metric.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

namespace cst {

namespace {

const Range* find_range(std::span<const AttributeRange> ranges, std::string_view name) {
  for (const auto& r : ranges) {
    if (r.name == name) return &r.range;
  }
  return nullptr;
}

}  // namespace

std::vector<AttributeSpec> AttributeSchema::relevant() const {
  std::vector<AttributeSpec> out;
  for (const auto& a : attributes) {
    if (a.role == AttributeRole::relevant) out.push_back(a);
  }
  return out;
}

const AttributeSpec& AttributeSchema::attribute(std::string_view name) const {
  for (const auto& a : attributes) {
    if (a.name == name) return a;
  }
  throw Error(fmt::format("schema has no attribute '{}'", name));
}

void AttributeSchema::check_against(const Dataset& data) const {
  std::set<std::string> seen;
  for (const auto& a : attributes) {
    if (!seen.insert(a.name).second) throw Error(fmt::format("schema lists '{}' twice", a.name));
    if (!data.has(a.name)) throw Error(fmt::format("dataset lacks schema column '{}'", a.name));
  }
  if (relevant().empty()) throw Error("schema declares no relevant attributes");
  if (!data.has(decision)) throw Error(fmt::format("dataset lacks decision column '{}'", decision));
  if (protected_values.empty()) throw Error("schema declares no protected attribute value");
  for (const auto& p : protected_values) {
    if (!data.has(p.attribute))
      throw Error(fmt::format("dataset lacks protected column '{}'", p.attribute));
  }
  const auto y = data.column(decision);
  for (std::size_t r = 0; r < y.size(); ++r) {
    if (!std::isfinite(y[r])) throw Error(fmt::format("row {}: non-finite decision", r));
  }
}

std::vector<AttributeRange> attribute_ranges(const Dataset& data, const AttributeSchema& schema) {
  if (data.empty()) throw Error("cannot compute ranges of an empty dataset");
  std::vector<AttributeRange> out;
  for (const auto& a : schema.attributes) {
    if (a.kind == AttributeKind::categorical) continue;
    const auto col = data.column(a.name);
    const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
    out.push_back({a.name, Range{*lo, *hi}});
  }
  return out;
}

double per_attribute_distance(AttributeKind kind, double v, double w, const Range* range) {
  if (kind == AttributeKind::categorical) return v != w ? 1.0 : 0.0;
  const double diff = std::fabs(v - w);
  if (!range) return diff;
  if (range->degenerate()) {
    if (v == w) return 0.0;
    throw Error(fmt::format("degenerate range [{}, {}] with distinct values {} and {}", range->min,
                            range->max, v, w));
  }
  return diff / range->width();
}

DistanceContext::DistanceContext(const Dataset& factual, const AttributeSchema& schema,
                                 DistanceSpec spec) {
  const auto relevant = schema.relevant();
  if (relevant.empty()) throw Error("schema declares no relevant attributes");
  const auto ranges = attribute_ranges(factual, schema);
  attribute_count_ = static_cast<double>(relevant.size());
  for (const auto& a : relevant) {
    const bool cat = a.kind == AttributeKind::categorical;
    double divisor = 1.0;
    if (!cat && spec.normalization == Normalization::min_max) {
      const auto* r = find_range(ranges, a.name);
      if (r->degenerate()) {
        warnings_.push_back(
            fmt::format("attribute '{}' is constant ({}); it contributes no distance", a.name,
                        r->min));
        continue;
      }
      divisor = r->width();
    }
    columns_.push_back(a.name);
    divisors_.push_back(divisor);
    categorical_.push_back(cat ? 1 : 0);
  }
}

std::vector<double> DistanceContext::center_of(const Dataset& data, std::size_t row) const {
  std::vector<double> out;
  out.reserve(columns_.size());
  for (const auto& c : columns_) out.push_back(data.column(c)[row]);
  return out;
}

double DistanceContext::distance(std::span<const double> x, std::span<const double> y) const {
  double sum = 0.0;
  for (std::size_t a = 0; a < columns_.size(); ++a) {
    sum += categorical_[a] ? (x[a] != y[a] ? 1.0 : 0.0) : std::fabs(x[a] - y[a]) / divisors_[a];
  }
  return sum / attribute_count_;
}

double tuple_distance(std::span<const double> x, std::span<const double> y,
                      const AttributeSchema& schema, std::span<const AttributeRange> ranges,
                      DistanceSpec spec) {
  if (x.size() != schema.attributes.size() || y.size() != schema.attributes.size())
    throw Error("tuple arity does not match the schema");
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < schema.attributes.size(); ++i) {
    const auto& a = schema.attributes[i];
    if (a.role != AttributeRole::relevant) continue;
    ++count;
    if (a.kind == AttributeKind::categorical) {
      sum += per_attribute_distance(a.kind, x[i], y[i], nullptr);
      continue;
    }
    const Range* r = nullptr;
    if (spec.normalization == Normalization::min_max) {
      r = find_range(ranges, a.name);
      if (!r) throw Error(fmt::format("no range for attribute '{}'", a.name));
      if (r->degenerate()) continue;
    }
    sum += per_attribute_distance(a.kind, x[i], y[i], r);
  }
  if (count == 0) throw Error("schema declares no relevant attributes");
  return sum / static_cast<double>(count);
}

std::string to_string(AttributeKind kind) {
  switch (kind) {
    case AttributeKind::continuous: return "continuous";
    case AttributeKind::ordinal: return "ordinal";
    case AttributeKind::interval: return "interval";
    case AttributeKind::categorical: return "categorical";
  }
  return "?";
}

AttributeKind parse_attribute_kind(std::string_view text) {
  if (text == "continuous") return AttributeKind::continuous;
  if (text == "ordinal") return AttributeKind::ordinal;
  if (text == "interval") return AttributeKind::interval;
  if (text == "categorical") return AttributeKind::categorical;
  throw Error(fmt::format("unknown attribute kind '{}'", text));
}

std::string to_string(AttributeRole role) {
  switch (role) {
    case AttributeRole::relevant: return "relevant";
    case AttributeRole::protected_attribute: return "protected";
    case AttributeRole::decision: return "decision";
    case AttributeRole::ignored: return "ignored";
  }
  return "?";
}

AttributeRole parse_attribute_role(std::string_view text) {
  if (text == "relevant") return AttributeRole::relevant;
  if (text == "protected") return AttributeRole::protected_attribute;
  if (text == "decision") return AttributeRole::decision;
  if (text == "ignored") return AttributeRole::ignored;
  throw Error(fmt::format("unknown attribute role '{}'", text));
}

}  // namespace cst
