#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cst/dataset.hpp"
#include "cst/metric.hpp"
#include "cst/neighborhood.hpp"
#include "cst/scm.hpp"

namespace cst {

enum class Method { cst, st, cf };

/// How the Wald half-width combines the two group variances.
/// as_written: z * sqrt((p_c(1-p_c) - p_t(1-p_t)) / k), negative radicand
/// clamped to 0. standard_sum: z * sqrt(p_c(1-p_c)/k + p_t(1-p_t)/k).
enum class VarianceMode { as_written, standard_sum };

struct AuditConfig {
  std::size_t k = 15;
  double alpha = 0.05;
  double tau = 0.0;
  bool include_centers = false;
  scm::Intervention intervention;
  VarianceMode variance_mode = VarianceMode::as_written;
  std::optional<double> max_distance;
  std::size_t jobs = 1;

  /// Throws on k < 1, alpha outside (0, 1) or tau < 0.
  void validate() const;
};

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  bool clamped = false;
};

struct Decision {
  bool discriminated = false;
  bool significant = false;
};

namespace flags {
inline constexpr std::uint32_t short_control = 1u << 0;
inline constexpr std::uint32_t short_test = 1u << 1;
inline constexpr std::uint32_t clamped = 1u << 2;
inline constexpr std::uint32_t failed = 1u << 3;
}  // namespace flags

struct ComplainantResult {
  std::size_t index = 0;
  double p_c = 0.0;
  double p_t = 0.0;
  double delta_p = 0.0;
  std::optional<Interval> ci;
  bool discriminated = false;
  bool significant = false;
  std::size_t control_size = 0;
  std::size_t test_size = 0;
  std::uint32_t flags = 0;
  std::string error;
};

struct ReportSummary {
  Method method = Method::cst;
  std::size_t k = 0;
  bool include_centers = false;
  std::size_t discriminated = 0;
  std::size_t significant = 0;
  std::size_t protected_count = 0;
  double percent = 0.0;
};

/// One row per record of the control search space, in ascending record order.
struct DiscriminationReport {
  std::vector<ComplainantResult> rows;
  ReportSummary summary;
  std::vector<std::string> warnings;

  /// Record indices flagged as discriminated.
  [[nodiscard]] std::vector<std::size_t> discriminated_indices() const;
};

/// z such that P(Z > z) = alpha / 2 for standard normal Z.
[[nodiscard]] double z_quantile(double alpha);

/// Share of negative outcomes (decision != positive) in `group`. With
/// `include_center` the center's decision adds to the count and 1 to the
/// denominator.
[[nodiscard]] double negative_rate(const NeighborSet& group, std::span<const double> decisions,
                                   double positive, bool include_center,
                                   std::optional<double> center_decision = std::nullopt);

/// Interval [dp - w, dp + w] around dp = p_c - p_t; `k` is the group size
/// used for both proportions.
[[nodiscard]] Interval wald_ci(double p_c, double p_t, double k, double alpha,
                               VarianceMode mode = VarianceMode::as_written);
/// Same with distinct group sizes (short groups).
[[nodiscard]] Interval wald_ci(double p_c, double p_t, double n_c, double n_t, double alpha,
                               VarianceMode mode);

/// discriminated iff delta_p > tau; significant iff also ci.lower > tau.
[[nodiscard]] Decision decide(double delta_p, const Interval& ci, double tau);

/// Control/test groups for every complainant, aligned with spaces.control.
struct Neighborhoods {
  SearchSpaces spaces;
  std::vector<Groups> groups;
  std::size_t k = 0;
  std::vector<std::string> warnings;
};

/// Builds groups of size `k` with the control centers taken from `factual`
/// and the test centers from `test_centers` (the counterfactual dataset for
/// CST, the factual one for ST). Runs complainants on `jobs` threads; the
/// result does not depend on the thread count.
[[nodiscard]] Neighborhoods find_neighborhoods(const Dataset& factual, const Dataset& test_centers,
                                               const AttributeSchema& schema, std::size_t k,
                                               std::optional<double> max_distance,
                                               std::size_t jobs, DistanceSpec spec = {});

/// Scores precomputed neighbourhoods with the first config.k members of each
/// group (neighbourhoods may have been built for a larger k). For ST the
/// centers are always excluded; `counterfactual` supplies the test-center
/// decision when CST includes centers.
[[nodiscard]] DiscriminationReport score_neighborhoods(Method method, const Dataset& factual,
                                                       const Dataset* counterfactual,
                                                       const Neighborhoods& hoods,
                                                       const AttributeSchema& schema,
                                                       const AuditConfig& config);

[[nodiscard]] DiscriminationReport run_cst(const Dataset& factual, const Dataset& counterfactual,
                                           const AttributeSchema& schema,
                                           const AuditConfig& config, DistanceSpec spec = {});
[[nodiscard]] DiscriminationReport run_st(const Dataset& factual, const AttributeSchema& schema,
                                          const AuditConfig& config, DistanceSpec spec = {});
/// Counterfactual fairness: a complainant is flagged iff the factual decision
/// is negative and the counterfactual one positive. p_c and p_t hold the two
/// negative-outcome indicators; there is no interval.
[[nodiscard]] DiscriminationReport run_cf(const Dataset& factual, const Dataset& counterfactual,
                                          const AttributeSchema& schema);

// Report serialisation: CSV with columns
//   complainant_id,p_c,p_t,delta_p,ci_low,ci_high,discriminated,significant,flags
// then '#'-prefixed summary lines. Empty ci fields mean no interval.
void write_report(std::ostream& out, const DiscriminationReport& report);
void write_report(const std::string& path, const DiscriminationReport& report);
[[nodiscard]] std::string flags_to_string(std::uint32_t f);
[[nodiscard]] std::string to_string(Method m);
[[nodiscard]] Method parse_method(std::string_view text);
[[nodiscard]] std::string to_string(VarianceMode m);
[[nodiscard]] VarianceMode parse_variance_mode(std::string_view text);
/// "288 (16.8%)", four significant digits.
[[nodiscard]] std::string summary_cell(const ReportSummary& s);

}  // namespace cst
