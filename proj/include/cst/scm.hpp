#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cst/classifier.hpp"
#include "cst/dataset.hpp"

/// Structural causal models with additive noise: representation, validation,
/// sampling, and counterfactual generation by abduction, action and
/// prediction.
namespace cst::scm {

enum class NodeKind { protected_attribute, covariate };
enum class Link { identity, exp };

struct Normal {
  double mean = 0.0;
  double sd = 1.0;
  friend bool operator==(const Normal&, const Normal&) = default;
};
struct Poisson {
  double lambda = 1.0;
  friend bool operator==(const Poisson&, const Poisson&) = default;
};
struct ChiSquared {
  double df = 1.0;
  friend bool operator==(const ChiSquared&, const ChiSquared&) = default;
};
struct Bernoulli {
  double p = 0.5;
  friend bool operator==(const Bernoulli&, const Bernoulli&) = default;
};
struct PointMass {
  friend bool operator==(const PointMass&, const PointMass&) = default;
};

/// A noise (or random factor) distribution multiplied by `scale`, so
/// `{Poisson{10}, 10000}` is 10000 * Poi(10).
struct NoiseSpec {
  std::variant<Normal, Poisson, ChiSquared, Bernoulli, PointMass> dist = PointMass{};
  double scale = 1.0;

  [[nodiscard]] double expected() const;
  /// Empty when the parameters are admissible, else a description.
  [[nodiscard]] std::optional<std::string> check() const;
  [[nodiscard]] bool is_point_mass() const { return std::holds_alternative<PointMass>(dist); }

  friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

/// One summand `coefficient * factor * parent` of a linear predictor. Without
/// a factor the term is the ordinary `coefficient * parent`; with one, each
/// record draws its own factor (the random penalties of the loan model).
struct Term {
  std::string parent;
  double coefficient = 0.0;
  std::optional<NoiseSpec> factor;

  friend bool operator==(const Term&, const Term&) = default;
};

/// Structural value = link(intercept + sum(terms) + noise). For the exp link
/// the noise enters inside the exponential.
struct Assignment {
  double intercept = 0.0;
  std::vector<Term> terms;
  Link link = Link::identity;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct NodeSpec {
  std::string name;
  NodeKind kind = NodeKind::covariate;
  std::vector<std::string> parents;
  Assignment assignment;
  NoiseSpec noise;
  /// Coefficients are placeholders to be estimated by fit_linear_anm.
  bool estimate = false;
  /// Set by intervene(); the node holds a constant and ignores latents.
  bool intervened = false;

  friend bool operator==(const NodeSpec&, const NodeSpec&) = default;
};

class Scm {
 public:
  Scm() = default;
  explicit Scm(std::vector<NodeSpec> nodes) : nodes_(std::move(nodes)) {}

  [[nodiscard]] std::span<const NodeSpec> nodes() const noexcept { return nodes_; }
  [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }
  [[nodiscard]] std::optional<std::size_t> find(std::string_view name) const noexcept;
  [[nodiscard]] const NodeSpec& node(std::string_view name) const;
  [[nodiscard]] NodeSpec& node(std::string_view name);
  [[nodiscard]] const NodeSpec& node(std::size_t i) const { return nodes_.at(i); }
  [[nodiscard]] NodeSpec& node(std::size_t i) { return nodes_.at(i); }
  void add(NodeSpec spec) { nodes_.push_back(std::move(spec)); }

  /// True iff some directed path leads from `from` to `to` (from != to).
  [[nodiscard]] bool has_path(std::string_view from, std::string_view to) const;

  friend bool operator==(const Scm&, const Scm&) = default;

 private:
  std::vector<NodeSpec> nodes_;
};

struct Violation {
  std::string node;
  std::string message;
};

/// Checks every structural invariant. Violations are returned, not thrown.
[[nodiscard]] std::vector<Violation> validate_scm(const Scm& scm);

/// Throws Error listing all violations when the model is invalid.
void require_valid(const Scm& scm);

/// Node indices ordered so that parents precede children; among nodes that
/// are ready at the same time, declaration order wins.
[[nodiscard]] std::vector<std::size_t> topological_order(const Scm& scm);

/// Realised exogenous values for one node: the additive noise per record and,
/// for each term, the per-record factor draws (empty for plain terms).
struct NodeLatents {
  std::string name;
  std::vector<double> noise;
  std::vector<std::vector<double>> factors;

  friend bool operator==(const NodeLatents&, const NodeLatents&) = default;
};

/// Latent values for every (record, node), aligned with the model's node
/// declaration order.
struct Latents {
  std::size_t records = 0;
  std::vector<NodeLatents> nodes;

  [[nodiscard]] const NodeLatents& node(std::string_view name) const;
  friend bool operator==(const Latents&, const Latents&) = default;
};

struct Sample {
  Dataset data;
  Latents latents;
};

/// Draws `n` records. Each node owns independent mt19937_64 streams (one for
/// the noise, one per random-factor term) seeded from (seed, node, slot), so
/// the result is a pure function of (scm, n, seed).
[[nodiscard]] Sample sample_dataset(const Scm& scm, std::size_t n, std::uint64_t seed);

enum class AbductionMode { oracle, residual };

/// oracle returns `stored` verbatim after shape checks; residual inverts each
/// structural equation at the observed values, U = g(X) - predictor(parents),
/// with random factors replaced by their means.
[[nodiscard]] Latents abduct(const Scm& scm, const Dataset& data, AbductionMode mode,
                             const Latents* stored = nullptr);

struct Intervention {
  std::vector<std::pair<std::string, double>> assignments;

  [[nodiscard]] bool empty() const noexcept { return assignments.empty(); }
  [[nodiscard]] std::vector<std::string> targets() const;
};

/// Parses "A=0" or "R=0,G=0".
[[nodiscard]] Intervention parse_intervention(std::string_view text);
[[nodiscard]] std::string to_string(const Intervention& iv);

/// do(): targeted protected roots become constants with point-mass noise.
/// The input model is left untouched.
[[nodiscard]] Scm intervene(const Scm& scm, const Intervention& intervention);

/// Forward evaluation with the given latents in place of fresh noise. When
/// `factual` is supplied, a node none of whose parents moved keeps its factual
/// value bit-for-bit (it is the same world for that node).
[[nodiscard]] Dataset predict(const Scm& scm, const Latents& latents,
                              const Dataset* factual = nullptr);

/// Record-aligned counterfactual of `data` under `intervention`, with the
/// classifier re-applied to the counterfactual covariates. Columns that are
/// not model nodes are carried over unchanged.
struct CounterfactualDataset {
  Dataset data;
  Intervention intervention;
};

[[nodiscard]] CounterfactualDataset generate_counterfactual_dataset(
    const Scm& scm, const Dataset& data, const Intervention& intervention,
    const Classifier& classifier, AbductionMode mode, const Latents* stored = nullptr);

/// Per-node OLS outcome of fit_linear_anm.
struct NodeFit {
  std::string name;
  std::vector<std::string> regressors;  // "(intercept)" then parents
  std::vector<double> coefficients;
  std::vector<double> standard_errors;
  double residual_sd = 0.0;
  std::vector<double> residuals;
};

struct FitResult {
  Scm scm;
  std::vector<NodeFit> fits;
};

/// Ordinary least squares of g(X_j) on [1, parents] for every node flagged
/// `estimate`; g is log for exp-link nodes. Fitted nodes get one plain term
/// per parent and normal(0, residual sd) noise.
[[nodiscard]] FitResult fit_linear_anm(const Scm& skeleton, const Dataset& data);

}  // namespace cst::scm
