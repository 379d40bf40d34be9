#include "cst/classifier.hpp"

#include <fmt/format.h>

namespace cst {

std::vector<double> Classifier::apply(const Dataset& data) const {
  if (!decide) throw Error("classifier has no decision function");
  std::vector<std::span<const double>> cols;
  cols.reserve(inputs.size());
  for (const auto& name : inputs) cols.push_back(data.column(name));
  std::vector<double> row(inputs.size());
  std::vector<double> out(data.size());
  for (std::size_t r = 0; r < data.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) row[c] = cols[c][r];
    out[r] = decide(row) ? 1.0 : 0.0;
  }
  return out;
}

Classifier linear_threshold_classifier(std::vector<std::pair<std::string, double>> weights,
                                       double threshold, std::string output) {
  if (weights.empty()) throw Error("classifier needs at least one weighted input");
  Classifier c;
  std::vector<double> w;
  for (auto& [name, weight] : weights) {
    c.inputs.push_back(name);
    w.push_back(weight);
  }
  c.output = std::move(output);
  c.decide = [w = std::move(w), threshold](std::span<const double> x) {
    double score = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) score += w[i] * x[i];
    return score > threshold ? 1 : 0;
  };
  return c;
}

}  // namespace cst
