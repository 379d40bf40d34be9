#pragma once

// Shared fixtures and independent reference implementations for the tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cst/dataset.hpp"
#include "cst/metric.hpp"

namespace testing {

struct Gen {
  explicit Gen(std::uint64_t seed) : eng(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(eng); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(eng); }

  std::mt19937_64 eng;
};

inline cst::Dataset make_dataset(std::vector<std::pair<std::string, std::vector<double>>> cols) {
  cst::Dataset d;
  for (auto& [name, values] : cols) d.set_column(name, std::move(values));
  return d;
}

/// (min, max) per non-categorical relevant attribute, scanned from `data`.
inline std::vector<std::pair<double, double>> reference_ranges(const cst::Dataset& data,
                                                               const cst::AttributeSchema& schema) {
  std::vector<std::pair<double, double>> out;
  for (const auto& attr : schema.attributes) {
    if (attr.role != cst::AttributeRole::relevant) continue;
    const auto col = data.column(attr.name);
    double lo = col[0];
    double hi = col[0];
    for (double v : col) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    out.emplace_back(lo, hi);
  }
  return out;
}

/// Mean per-attribute distance written out directly from the definition:
/// mismatch for categorical attributes, range-scaled absolute difference
/// otherwise, constant attributes contributing nothing. `ranges` comes from
/// reference_ranges.
inline double reference_distance(const std::vector<std::pair<double, double>>& ranges,
                                 const cst::AttributeSchema& schema, const cst::Dataset& a,
                                 std::size_t ra, const cst::Dataset& b, std::size_t rb) {
  double total = 0.0;
  double count = 0.0;
  std::size_t i = 0;
  for (const auto& attr : schema.attributes) {
    if (attr.role != cst::AttributeRole::relevant) continue;
    const auto [lo, hi] = ranges[i++];
    count += 1.0;
    const double x = a.at(ra, attr.name);
    const double y = b.at(rb, attr.name);
    if (attr.kind == cst::AttributeKind::categorical) {
      total += x == y ? 0.0 : 1.0;
    } else if (hi > lo) {
      total += std::fabs(x - y) / (hi - lo);
    }
  }
  return total / count;
}

inline double reference_distance(const cst::Dataset& ranges_from, const cst::AttributeSchema& schema,
                                 const cst::Dataset& a, std::size_t ra, const cst::Dataset& b,
                                 std::size_t rb) {
  return reference_distance(reference_ranges(ranges_from, schema), schema, a, ra, b, rb);
}

/// Full sort of every candidate by (distance, index), then the first k.
inline std::vector<std::pair<std::size_t, double>> reference_top_k(
    const cst::Dataset& data, const cst::AttributeSchema& schema, const cst::Dataset& center_data,
    std::size_t center_row, const std::vector<std::size_t>& space, std::size_t k,
    long exclude = -1) {
  const auto ranges = reference_ranges(data, schema);
  std::vector<std::pair<std::size_t, double>> all;
  for (auto r : space) {
    if (static_cast<long>(r) == exclude) continue;
    all.emplace_back(r, reference_distance(ranges, schema, center_data, center_row, data, r));
  }
  std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) {
    return x.second < y.second || (x.second == y.second && x.first < y.first);
  });
  if (all.size() > k) all.resize(k);
  return all;
}

/// Schema with `relevant` continuous attributes X0..Xn-1, a categorical
/// protected attribute A (protected value 1) and decision Y.
inline cst::AttributeSchema simple_schema(std::size_t relevant, std::size_t categorical = 0) {
  cst::AttributeSchema s;
  for (std::size_t i = 0; i < relevant; ++i) {
    s.attributes.push_back({"X" + std::to_string(i),
                            i < categorical ? cst::AttributeKind::categorical
                                            : cst::AttributeKind::continuous,
                            cst::AttributeRole::relevant});
  }
  s.attributes.push_back({"A", cst::AttributeKind::categorical, cst::AttributeRole::protected_attribute});
  s.attributes.push_back({"Y", cst::AttributeKind::categorical, cst::AttributeRole::decision});
  s.decision = "Y";
  s.positive = 1.0;
  s.protected_values = {{"A", 1.0}};
  return s;
}

/// n records for simple_schema: the first `categorical` X columns draw from
/// {0, 1, 2}, the rest uniformly from [0, 100); A ~ coin, Y ~ coin.
inline cst::Dataset random_records(Gen& g, std::size_t n, std::size_t relevant,
                                   std::size_t categorical = 0) {
  cst::Dataset d;
  for (std::size_t i = 0; i < relevant; ++i) {
    std::vector<double> v(n);
    for (auto& x : v) x = i < categorical ? g.integer(0, 2) : g.uniform(0.0, 100.0);
    d.set_column("X" + std::to_string(i), std::move(v));
  }
  std::vector<double> a(n);
  std::vector<double> y(n);
  for (std::size_t r = 0; r < n; ++r) {
    a[r] = g.coin(0.45) ? 1.0 : 0.0;
    y[r] = g.coin() ? 1.0 : 0.0;
  }
  // Both search spaces must be non-empty.
  a[0] = 1.0;
  a[n - 1] = 0.0;
  d.set_column("A", std::move(a));
  d.set_column("Y", std::move(y));
  return d;
}

}  // namespace testing
