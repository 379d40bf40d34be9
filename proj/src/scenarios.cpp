#include "cst/scenarios.hpp"

#include <fmt/format.h>

namespace cst::scenarios {

using scm::Assignment;
using scm::NodeKind;
using scm::NodeSpec;
using scm::NoiseSpec;
using scm::Term;

namespace {

NodeSpec protected_root(std::string name, double p) {
  NodeSpec n;
  n.name = std::move(name);
  n.kind = NodeKind::protected_attribute;
  n.noise = NoiseSpec{scm::Bernoulli{p}, 1.0};
  return n;
}

AttributeSpec attr(std::string name, AttributeKind kind, AttributeRole role) {
  return {std::move(name), kind, role};
}

}  // namespace

scm::Scm loan_scm() {
  scm::Scm m;
  m.add(protected_root("A", 0.45));

  NodeSpec x1;
  x1.name = "X1";
  x1.parents = {"A"};
  x1.assignment.terms = {Term{"A", -1500.0, NoiseSpec{scm::Poisson{10.0}, 1.0}}};
  x1.noise = NoiseSpec{scm::Poisson{10.0}, 10000.0};
  m.add(std::move(x1));

  NodeSpec x2;
  x2.name = "X2";
  x2.parents = {"A", "X1"};
  x2.assignment.terms = {Term{"A", -300.0, NoiseSpec{scm::ChiSquared{4.0}, 1.0}},
                         Term{"X1", 0.3, std::nullopt}};
  x2.noise = NoiseSpec{scm::Normal{0.0, 1.0}, 2500.0};
  m.add(std::move(x2));
  return m;
}

int loan_decision(double x1, double x2) { return x1 + 5.0 * x2 > loan_threshold ? 1 : 0; }

Classifier loan_classifier() {
  return linear_threshold_classifier({{"X1", 1.0}, {"X2", 5.0}}, loan_threshold, "Y");
}

SchemaConfig loan_schema() {
  SchemaConfig c;
  c.schema.attributes = {
      attr("A", AttributeKind::categorical, AttributeRole::protected_attribute),
      attr("X1", AttributeKind::continuous, AttributeRole::relevant),
      attr("X2", AttributeKind::continuous, AttributeRole::relevant),
      attr("Y", AttributeKind::categorical, AttributeRole::decision),
  };
  c.schema.decision = "Y";
  c.schema.positive = 1.0;
  c.schema.protected_values = {{"A", 1.0}};
  c.classifier = ClassifierSpec{{{"X1", 1.0}, {"X2", 5.0}}, loan_threshold};
  return c;
}

LoanData generate_loan(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error("n must be at least 1");
  LoanData out;
  out.scm = loan_scm();
  auto sample = scm::sample_dataset(out.scm, n, seed);
  out.data = std::move(sample.data);
  out.latents = std::move(sample.latents);
  out.data.set_column("Y", loan_classifier().apply(out.data));
  return out;
}

int law_decision(double ugpa, double lsat) { return 0.6 * ugpa + 0.4 * lsat > law_psi ? 1 : 0; }

Classifier law_classifier() {
  return linear_threshold_classifier({{"UGPA", 0.6}, {"LSAT", 0.4}}, law_psi, "Y");
}

scm::Scm law_skeleton() {
  scm::Scm m;
  m.add(protected_root("R", 0.5));
  m.add(protected_root("G", 0.5));
  for (const auto* name : {"UGPA", "LSAT"}) {
    NodeSpec n;
    n.name = name;
    n.parents = {"R", "G"};
    n.assignment.terms = {Term{"R", 0.0, std::nullopt}, Term{"G", 0.0, std::nullopt}};
    n.assignment.link = std::string_view(name) == "LSAT" ? scm::Link::exp : scm::Link::identity;
    n.noise = NoiseSpec{scm::Normal{0.0, 1.0}, 1.0};
    n.estimate = true;
    m.add(std::move(n));
  }
  return m;
}

SchemaConfig law_schema(const std::string& protected_column) {
  if (protected_column != "R" && protected_column != "G")
    throw Error(fmt::format("law-school protected attribute must be R or G, got '{}'",
                            protected_column));
  SchemaConfig c;
  c.schema.attributes = {
      attr("UGPA", AttributeKind::continuous, AttributeRole::relevant),
      attr("LSAT", AttributeKind::continuous, AttributeRole::relevant),
      attr("R", AttributeKind::categorical, AttributeRole::protected_attribute),
      attr("G", AttributeKind::categorical, AttributeRole::protected_attribute),
      attr("Y", AttributeKind::categorical, AttributeRole::decision),
  };
  c.schema.decision = "Y";
  c.schema.positive = 1.0;
  c.schema.protected_values = {{protected_column, 1.0}};
  c.classifier = ClassifierSpec{{{"UGPA", 0.6}, {"LSAT", 0.4}}, law_psi};
  c.mappings = {
      ValueMapping{"race", "R", {{"White", 0.0}, {"white", 0.0}, {"0", 0.0}}, 1.0},
      ValueMapping{"gender",
                   "G",
                   {{"Female", 1.0},
                    {"female", 1.0},
                    {"F", 1.0},
                    {"1", 1.0},
                    {"Male", 0.0},
                    {"male", 0.0},
                    {"M", 0.0},
                    {"0", 0.0},
                    {"2", 0.0}},
                   std::nullopt},
  };
  return c;
}

LawSchool build_law_school(const Dataset& raw, const SchemaConfig& config) {
  Dataset staged = raw;
  if (!find_column_nocase(staged, "gender")) {
    if (const auto sex = find_column_nocase(staged, "sex")) {
      const auto& col = staged.column_info(*sex);
      staged.set_column("gender", col.values, col.levels);
    }
  }
  for (const auto* required : {"UGPA", "LSAT", "race", "gender"}) {
    if (!find_column_nocase(staged, required))
      throw Error(fmt::format("law-school data lacks column '{}'", required));
  }
  const Dataset mapped = apply_ingestion(staged, config);

  const auto ugpa = mapped.column_info(*find_column_nocase(mapped, "UGPA")).values;
  const auto lsat = mapped.column_info(*find_column_nocase(mapped, "LSAT")).values;
  const auto r = mapped.column("R");
  const auto g = mapped.column("G");

  LawSchool out;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < mapped.size(); ++i) {
    if (!(lsat[i] > 0.0)) {
      ++out.dropped_lsat;
    } else if (!(ugpa[i] >= 0.0 && ugpa[i] <= 4.0)) {
      ++out.dropped_ugpa;
    } else {
      keep.push_back(i);
    }
  }
  if (keep.empty()) throw Error("no usable law-school records");
  for (std::size_t i : keep) {
    if ((r[i] != 0.0 && r[i] != 1.0) || (g[i] != 0.0 && g[i] != 1.0))
      throw Error(fmt::format("row {}: R and G must be 0 or 1 after mapping", i));
  }

  auto pick = [&](std::span<const double> col) {
    std::vector<double> v;
    v.reserve(keep.size());
    for (std::size_t i : keep) v.push_back(col[i]);
    return v;
  };
  out.data.set_column("UGPA", pick(ugpa));
  out.data.set_column("LSAT", pick(lsat));
  out.data.set_column("R", pick(r));
  out.data.set_column("G", pick(g));
  out.fit = scm::fit_linear_anm(law_skeleton(), out.data);
  const auto classifier = config.classifier ? config.make_classifier() : law_classifier();
  out.data.set_column(classifier.output, classifier.apply(out.data));
  return out;
}

scm::Scm law_truth_scm(const LawTruth& t) {
  scm::Scm m;
  m.add(protected_root("R", t.p_nonwhite));
  m.add(protected_root("G", t.p_female));

  NodeSpec u;
  u.name = "UGPA";
  u.parents = {"R", "G"};
  u.assignment = Assignment{t.b_u, {Term{"R", t.beta1, std::nullopt}, Term{"G", t.lambda1, std::nullopt}},
                            scm::Link::identity};
  u.noise = NoiseSpec{scm::Normal{0.0, t.sd_u}, 1.0};
  m.add(std::move(u));

  NodeSpec l;
  l.name = "LSAT";
  l.parents = {"R", "G"};
  l.assignment = Assignment{t.b_l, {Term{"R", t.beta2, std::nullopt}, Term{"G", t.lambda2, std::nullopt}},
                            scm::Link::exp};
  l.noise = NoiseSpec{scm::Normal{0.0, t.sd_l}, 1.0};
  m.add(std::move(l));
  return m;
}

Dataset generate_law_school_synthetic(std::size_t n, std::uint64_t seed, const LawTruth& truth) {
  if (n == 0) throw Error("n must be at least 1");
  const auto sample = scm::sample_dataset(law_truth_scm(truth), n, seed);
  const auto& d = sample.data;
  Dataset raw;
  raw.set_column("race", {d.column("R").begin(), d.column("R").end()}, {"White", "Non-white"});
  raw.set_column("gender", {d.column("G").begin(), d.column("G").end()}, {"Male", "Female"});
  raw.set_column("UGPA", {d.column("UGPA").begin(), d.column("UGPA").end()});
  raw.set_column("LSAT", {d.column("LSAT").begin(), d.column("LSAT").end()});
  return raw;
}

}  // namespace cst::scenarios
