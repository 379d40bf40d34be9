#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cst/dataset.hpp"
#include "cst/detection.hpp"
#include "cst/schema_io.hpp"
#include "cst/scm.hpp"

namespace cst::cli {

/// Everything that shapes an audit besides the input files. Defaults are
/// k = 15, alpha = 0.05, tau = 0, centers excluded, as-written variance.
struct AuditSettings {
  Method method = Method::cst;
  AuditConfig config;
  /// Unset: oracle when latents are supplied, residual otherwise.
  std::optional<scm::AbductionMode> abduction;
  /// Replaces the schema's protected values when non-empty.
  std::vector<ProtectedValue> protected_values;
  std::vector<std::size_t> ks = {15, 30, 50, 100};

  [[nodiscard]] nlohmann::json to_json() const;
  /// Overwrites the fields present in `doc` (an object, or a run manifest
  /// whose "config" member is one).
  void merge(const nlohmann::json& doc);
};

struct AuditInputs {
  Dataset data;
  SchemaConfig schema;
  std::optional<scm::Scm> scm;
  std::optional<scm::Latents> latents;
};

/// The model ready for counterfactuals: nodes marked for estimation are
/// fitted on `data`, other models pass through.
[[nodiscard]] scm::Scm ready_scm(const scm::Scm& model, const Dataset& data);

/// The schema with the settings' protected values applied.
[[nodiscard]] AttributeSchema effective_schema(const AuditInputs& in, const AuditSettings& s);

[[nodiscard]] scm::CounterfactualDataset make_counterfactual(const AuditInputs& in,
                                                             const AuditSettings& s);

[[nodiscard]] DiscriminationReport run_audit(const AuditInputs& in, const AuditSettings& s);

/// The four detection variants over a grid of k.
struct Comparison {
  std::vector<std::size_t> ks;
  std::vector<DiscriminationReport> cst_without;
  std::vector<DiscriminationReport> st;
  std::vector<DiscriminationReport> cst;
  DiscriminationReport cf;
  // Per k: |ST ∩ CST(w/o)|, |ST ∩ CST| and |CF ∩ CST|.
  std::vector<std::size_t> st_in_cst_without;
  std::vector<std::size_t> st_in_cst;
  std::vector<std::size_t> cf_in_cst;
};

[[nodiscard]] Comparison run_comparison(const AuditInputs& in, const AuditSettings& s);
[[nodiscard]] std::string format_comparison(const Comparison& c);

/// Size of the intersection of two ascending index lists.
[[nodiscard]] std::size_t overlap(const std::vector<std::size_t>& a,
                                  const std::vector<std::size_t>& b);

/// Entry point of the `cst` tool; returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cst::cli
