#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cst/dataset.hpp"

namespace cst {

/// A binary decision maker b(). It reads `inputs` from a record, in order, and
/// writes its decision (1 = positive outcome) to the `output` column.
struct Classifier {
  std::vector<std::string> inputs;
  std::string output = "Y";
  std::function<int(std::span<const double>)> decide;

  /// Decisions for every record of `data`.
  [[nodiscard]] std::vector<double> apply(const Dataset& data) const;
};

/// 1{ sum_i weight_i * x_i > threshold } with a strict inequality.
[[nodiscard]] Classifier linear_threshold_classifier(
    std::vector<std::pair<std::string, double>> weights, double threshold,
    std::string output = "Y");

}  // namespace cst
