#include "cst/detection.hpp"

#include <cmath>
#include <limits>

#include <boost/math/distributions/normal.hpp>
#include <fmt/format.h>

#include "cst/parallel.hpp"

namespace cst {

void AuditConfig::validate() const {
  if (k < 1) throw Error("k must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(fmt::format("alpha must lie in (0, 1), got {}", alpha));
  if (!(tau >= 0.0)) throw Error(fmt::format("tau must be non-negative, got {}", tau));
  if (max_distance && !(*max_distance >= 0.0))
    throw Error(fmt::format("max distance must be non-negative, got {}", *max_distance));
}

std::vector<std::size_t> DiscriminationReport::discriminated_indices() const {
  std::vector<std::size_t> out;
  for (const auto& r : rows) {
    if (r.discriminated) out.push_back(r.index);
  }
  return out;
}

double z_quantile(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(fmt::format("alpha must lie in (0, 1), got {}", alpha));
  const boost::math::normal_distribution<double> std_normal;
  return boost::math::quantile(boost::math::complement(std_normal, alpha / 2.0));
}

double negative_rate(const NeighborSet& group, std::span<const double> decisions, double positive,
                     bool include_center, std::optional<double> center_decision) {
  if (include_center && !center_decision) throw Error("center decision required when including centers");
  if (group.members.empty() && !include_center) throw Error("empty group");
  std::size_t negatives = 0;
  for (const auto& m : group.members) {
    if (decisions[m.index] != positive) ++negatives;
  }
  std::size_t n = group.members.size();
  if (include_center) {
    ++n;
    if (*center_decision != positive) ++negatives;
  }
  return static_cast<double>(negatives) / static_cast<double>(n);
}

Interval wald_ci(double p_c, double p_t, double k, double alpha, VarianceMode mode) {
  return wald_ci(p_c, p_t, k, k, alpha, mode);
}

Interval wald_ci(double p_c, double p_t, double n_c, double n_t, double alpha, VarianceMode mode) {
  if (!(n_c >= 1.0 && n_t >= 1.0)) throw Error("group sizes must be at least 1");
  const double z = z_quantile(alpha);
  const double vc = p_c * (1.0 - p_c);
  const double vt = p_t * (1.0 - p_t);
  double radicand = 0.0;
  if (mode == VarianceMode::as_written) {
    radicand = n_c == n_t ? (vc - vt) / n_c : vc / n_c - vt / n_t;
  } else {
    radicand = vc / n_c + vt / n_t;
  }
  // p(1 - p) and (1 - p)p can differ in the last bit, so equal variances may
  // leave a tiny negative radicand that is rounding, not a real deficit.
  const double scale = vc / n_c + vt / n_t;
  if (radicand < 0.0 && radicand >= -8.0 * std::numeric_limits<double>::epsilon() * scale)
    radicand = 0.0;
  Interval ci;
  if (radicand < 0.0) {
    radicand = 0.0;
    ci.clamped = true;
  }
  const double w = z * std::sqrt(radicand);
  const double dp = p_c - p_t;
  ci.lower = dp - w;
  ci.upper = dp + w;
  return ci;
}

Decision decide(double delta_p, const Interval& ci, double tau) {
  Decision d;
  d.discriminated = delta_p > tau;
  d.significant = d.discriminated && ci.lower > tau;
  return d;
}

Neighborhoods find_neighborhoods(const Dataset& factual, const Dataset& test_centers,
                                 const AttributeSchema& schema, std::size_t k,
                                 std::optional<double> max_distance, std::size_t jobs,
                                 DistanceSpec spec) {
  if (k == 0) throw Error("k must be at least 1");
  schema.check_against(factual);
  if (test_centers.size() != factual.size())
    throw Error(fmt::format("counterfactual dataset has {} records, factual has {}",
                            test_centers.size(), factual.size()));
  Neighborhoods out;
  out.k = k;
  out.spaces = partition_search_spaces(factual, schema.protected_values);
  const DistanceContext ctx(factual, schema, spec);
  for (const auto& w : ctx.warnings()) out.warnings.push_back(w);
  const SpaceIndex control(factual, out.spaces.control, ctx);
  const SpaceIndex test(factual, out.spaces.test, ctx);
  // The control group leaves out the complainant itself.
  if (control.size() - 1 < k)
    out.warnings.push_back(fmt::format("control space has {} candidates, fewer than k = {}",
                                       control.size() - 1, k));
  if (test.size() < k)
    out.warnings.push_back(
        fmt::format("test space has {} records, fewer than k = {}", test.size(), k));

  out.groups.resize(out.spaces.control.size());
  parallel_for(out.groups.size(), jobs, [&](std::size_t i) {
    out.groups[i] =
        build_groups(out.spaces.control[i], factual, test_centers, control, test, k, max_distance);
  });
  return out;
}

namespace {

ReportSummary summarize(Method method, std::size_t k, bool include_centers,
                        const std::vector<ComplainantResult>& rows) {
  ReportSummary s;
  s.method = method;
  s.k = k;
  s.include_centers = include_centers;
  s.protected_count = rows.size();
  for (const auto& r : rows) {
    if (r.discriminated) ++s.discriminated;
    if (r.significant) ++s.significant;
  }
  s.percent = rows.empty() ? 0.0
                           : 100.0 * static_cast<double>(s.discriminated) /
                                 static_cast<double>(rows.size());
  return s;
}

void mark_failed(ComplainantResult& r, const std::exception& e) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  r.p_c = r.p_t = r.delta_p = nan;
  r.ci.reset();
  r.discriminated = r.significant = false;
  r.flags |= flags::failed;
  r.error = e.what();
}

}  // namespace

DiscriminationReport score_neighborhoods(Method method, const Dataset& factual,
                                         const Dataset* counterfactual, const Neighborhoods& hoods,
                                         const AttributeSchema& schema, const AuditConfig& config) {
  if (method == Method::cf) throw Error("counterfactual fairness has no neighbourhoods to score");
  config.validate();
  if (config.k > hoods.k)
    throw Error(fmt::format("neighbourhoods were built for k = {}, cannot score k = {}", hoods.k,
                            config.k));
  const bool centers = method == Method::cst && config.include_centers;
  if (centers && !counterfactual) throw Error("including centers needs the counterfactual dataset");

  const auto y = factual.column(schema.decision);
  std::span<const double> y_cf;
  if (centers) y_cf = counterfactual->column(schema.decision);

  DiscriminationReport report;
  report.warnings = hoods.warnings;
  report.rows.resize(hoods.spaces.control.size());
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    auto& r = report.rows[i];
    const std::size_t c = hoods.spaces.control[i];
    r.index = c;
    try {
      const auto ctr = hoods.groups[i].control.prefix(config.k);
      const auto tst = hoods.groups[i].test.prefix(config.k);
      if (ctr.short_set) r.flags |= flags::short_control;
      if (tst.short_set) r.flags |= flags::short_test;
      r.control_size = ctr.size() + (centers ? 1 : 0);
      r.test_size = tst.size() + (centers ? 1 : 0);
      r.p_c = negative_rate(ctr, y, schema.positive, centers,
                            centers ? std::optional<double>(y[c]) : std::nullopt);
      r.p_t = negative_rate(tst, y, schema.positive, centers,
                            centers ? std::optional<double>(y_cf[c]) : std::nullopt);
      r.delta_p = r.p_c - r.p_t;
      r.ci = wald_ci(r.p_c, r.p_t, static_cast<double>(r.control_size),
                     static_cast<double>(r.test_size), config.alpha, config.variance_mode);
      if (r.ci->clamped) r.flags |= flags::clamped;
      const auto d = decide(r.delta_p, *r.ci, config.tau);
      r.discriminated = d.discriminated;
      r.significant = d.significant;
    } catch (const Error& e) {
      mark_failed(r, e);
    }
  }
  report.summary = summarize(method, config.k, centers, report.rows);
  std::size_t failed = 0;
  std::size_t shorts = 0;
  std::size_t clamped = 0;
  for (const auto& r : report.rows) {
    failed += (r.flags & flags::failed) != 0;
    shorts += (r.flags & (flags::short_control | flags::short_test)) != 0;
    clamped += (r.flags & flags::clamped) != 0;
  }
  if (failed) report.warnings.push_back(fmt::format("{} complainants could not be scored", failed));
  if (shorts) report.warnings.push_back(fmt::format("{} complainants have short groups", shorts));
  if (clamped)
    report.warnings.push_back(fmt::format("{} intervals had a negative radicand (clamped)", clamped));
  return report;
}

DiscriminationReport run_cst(const Dataset& factual, const Dataset& counterfactual,
                             const AttributeSchema& schema, const AuditConfig& config,
                             DistanceSpec spec) {
  config.validate();
  const auto hoods = find_neighborhoods(factual, counterfactual, schema, config.k,
                                        config.max_distance, config.jobs, spec);
  return score_neighborhoods(Method::cst, factual, &counterfactual, hoods, schema, config);
}

DiscriminationReport run_st(const Dataset& factual, const AttributeSchema& schema,
                            const AuditConfig& config, DistanceSpec spec) {
  config.validate();
  const auto hoods =
      find_neighborhoods(factual, factual, schema, config.k, config.max_distance, config.jobs, spec);
  return score_neighborhoods(Method::st, factual, nullptr, hoods, schema, config);
}

DiscriminationReport run_cf(const Dataset& factual, const Dataset& counterfactual,
                            const AttributeSchema& schema) {
  schema.check_against(factual);
  if (counterfactual.size() != factual.size())
    throw Error(fmt::format("counterfactual dataset has {} records, factual has {}",
                            counterfactual.size(), factual.size()));
  const auto spaces = partition_search_spaces(factual, schema.protected_values);
  const auto y = factual.column(schema.decision);
  const auto y_cf = counterfactual.column(schema.decision);
  DiscriminationReport report;
  for (auto c : spaces.control) {
    ComplainantResult r;
    r.index = c;
    r.p_c = y[c] != schema.positive ? 1.0 : 0.0;
    r.p_t = y_cf[c] != schema.positive ? 1.0 : 0.0;
    r.delta_p = r.p_c - r.p_t;
    r.discriminated = y[c] != schema.positive && y_cf[c] == schema.positive;
    r.control_size = r.test_size = 1;
    report.rows.push_back(std::move(r));
  }
  report.summary = summarize(Method::cf, 0, false, report.rows);
  return report;
}

std::string to_string(Method m) {
  switch (m) {
    case Method::cst: return "cst";
    case Method::st: return "st";
    case Method::cf: return "cf";
  }
  return "?";
}

Method parse_method(std::string_view text) {
  if (text == "cst") return Method::cst;
  if (text == "st") return Method::st;
  if (text == "cf") return Method::cf;
  throw Error(fmt::format("unknown method '{}' (expected cst, st or cf)", text));
}

std::string to_string(VarianceMode m) {
  return m == VarianceMode::as_written ? "as-written" : "standard-sum";
}

VarianceMode parse_variance_mode(std::string_view text) {
  if (text == "as-written") return VarianceMode::as_written;
  if (text == "standard-sum") return VarianceMode::standard_sum;
  throw Error(fmt::format("unknown variance mode '{}' (expected as-written or standard-sum)", text));
}

}  // namespace cst
