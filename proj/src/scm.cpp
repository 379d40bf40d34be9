#include "cst/scm.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <set>
#include <unordered_map>

#include <fmt/format.h>

namespace cst::scm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool is_root(const NodeSpec& n) { return n.parents.empty(); }

std::mt19937_64 make_stream(std::uint64_t seed, std::size_t node, std::size_t slot) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(node), static_cast<std::uint32_t>(slot)};
  return std::mt19937_64(seq);
}

/// Fills `out` with n draws of `spec`, scale applied.
void draw(const NoiseSpec& spec, std::mt19937_64& gen, std::vector<double>& out, std::size_t n) {
  out.resize(n);
  std::visit(overloaded{
                 [&](const Normal& d) {
                   std::normal_distribution<double> dist(d.mean, d.sd);
                   for (auto& v : out) v = spec.scale * dist(gen);
                 },
                 [&](const Poisson& d) {
                   std::poisson_distribution<long long> dist(d.lambda);
                   for (auto& v : out) v = spec.scale * static_cast<double>(dist(gen));
                 },
                 [&](const ChiSquared& d) {
                   std::chi_squared_distribution<double> dist(d.df);
                   for (auto& v : out) v = spec.scale * dist(gen);
                 },
                 [&](const Bernoulli& d) {
                   std::bernoulli_distribution dist(d.p);
                   for (auto& v : out) v = spec.scale * (dist(gen) ? 1.0 : 0.0);
                 },
                 [&](const PointMass&) { std::fill(out.begin(), out.end(), 0.0); },
             },
             spec.dist);
}

/// Linear predictor for one record. Shared by sampling and prediction so the
/// forward pass is bit-identical whichever route computes it.
/// Plain terms pass a factor of 1, which leaves the coefficient unchanged.
double linear_predictor(const Assignment& a, std::span<const double> parent_values,
                        std::span<const double> factor_values) {
  double eta = a.intercept;
  for (std::size_t t = 0; t < a.terms.size(); ++t) {
    eta += (a.terms[t].coefficient * factor_values[t]) * parent_values[t];
  }
  return eta;
}

double apply_link(Link link, double eta_plus_noise) {
  return link == Link::exp ? std::exp(eta_plus_noise) : eta_plus_noise;
}

/// Column views of each term's parent, resolved by name in `data`.
std::vector<std::span<const double>> term_columns(const NodeSpec& node, const Dataset& data) {
  std::vector<std::span<const double>> cols;
  for (const auto& t : node.assignment.terms) cols.push_back(data.column(t.parent));
  return cols;
}

}  // namespace

// ---------------------------------------------------------------------------
// NoiseSpec

double NoiseSpec::expected() const {
  const double m = std::visit(overloaded{
                                  [](const Normal& d) { return d.mean; },
                                  [](const Poisson& d) { return d.lambda; },
                                  [](const ChiSquared& d) { return d.df; },
                                  [](const Bernoulli& d) { return d.p; },
                                  [](const PointMass&) { return 0.0; },
                              },
                              dist);
  return scale * m;
}

std::optional<std::string> NoiseSpec::check() const {
  if (!std::isfinite(scale)) return "scale must be finite";
  return std::visit(overloaded{
                        [](const Normal& d) -> std::optional<std::string> {
                          if (!std::isfinite(d.mean) || !(d.sd >= 0) || !std::isfinite(d.sd))
                            return fmt::format("normal needs finite mean and sd >= 0 (sd={})", d.sd);
                          return std::nullopt;
                        },
                        [](const Poisson& d) -> std::optional<std::string> {
                          if (!(d.lambda > 0) || !std::isfinite(d.lambda))
                            return fmt::format("poisson needs lambda > 0 (lambda={})", d.lambda);
                          return std::nullopt;
                        },
                        [](const ChiSquared& d) -> std::optional<std::string> {
                          if (!(d.df > 0) || !std::isfinite(d.df))
                            return fmt::format("chi-squared needs df > 0 (df={})", d.df);
                          return std::nullopt;
                        },
                        [](const Bernoulli& d) -> std::optional<std::string> {
                          if (!(d.p >= 0 && d.p <= 1))
                            return fmt::format("bernoulli needs 0 <= p <= 1 (p={})", d.p);
                          return std::nullopt;
                        },
                        [](const PointMass&) -> std::optional<std::string> { return std::nullopt; },
                    },
                    dist);
}

// ---------------------------------------------------------------------------
// Scm

std::optional<std::size_t> Scm::find(std::string_view name) const noexcept {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].name == name) return i;
  }
  return std::nullopt;
}

const NodeSpec& Scm::node(std::string_view name) const {
  if (auto i = find(name)) return nodes_[*i];
  throw Error(fmt::format("unknown node '{}'", name));
}

NodeSpec& Scm::node(std::string_view name) {
  if (auto i = find(name)) return nodes_[*i];
  throw Error(fmt::format("unknown node '{}'", name));
}

bool Scm::has_path(std::string_view from, std::string_view to) const {
  // Walk parent links backwards from `to`.
  std::vector<std::string_view> stack{to};
  std::set<std::string_view> seen;
  while (!stack.empty()) {
    auto cur = stack.back();
    stack.pop_back();
    auto idx = find(cur);
    if (!idx) continue;
    for (const auto& p : nodes_[*idx].parents) {
      if (p == from) return true;
      if (seen.insert(p).second) stack.push_back(p);
    }
  }
  return false;
}

const NodeLatents& Latents::node(std::string_view name) const {
  for (const auto& n : nodes) {
    if (n.name == name) return n;
  }
  throw Error(fmt::format("missing latent entry for node '{}'", name));
}

// ---------------------------------------------------------------------------
// Validation and ordering

std::vector<Violation> validate_scm(const Scm& scm) {
  std::vector<Violation> out;
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < scm.size(); ++i) {
    const auto& n = scm.node(i);
    if (n.name.empty()) out.push_back({fmt::format("#{}", i), "node has an empty name"});
    if (!index.emplace(n.name, i).second) out.push_back({n.name, "duplicate node name"});
  }

  for (const auto& n : scm.nodes()) {
    std::set<std::string> seen_parents;
    for (const auto& p : n.parents) {
      if (!index.contains(p)) out.push_back({n.name, fmt::format("unknown parent '{}'", p)});
      if (p == n.name) out.push_back({n.name, "node lists itself as a parent"});
      if (!seen_parents.insert(p).second)
        out.push_back({n.name, fmt::format("parent '{}' listed twice", p)});
    }
    if (n.kind == NodeKind::protected_attribute && !n.parents.empty()) {
      out.push_back({n.name, "protected node not a root"});
    }
    for (const auto& t : n.assignment.terms) {
      if (!seen_parents.contains(t.parent))
        out.push_back({n.name, fmt::format("term refers to '{}', which is not a parent", t.parent)});
      if (!std::isfinite(t.coefficient))
        out.push_back({n.name, fmt::format("non-finite coefficient for '{}'", t.parent)});
      if (t.factor) {
        if (auto msg = t.factor->check())
          out.push_back({n.name, fmt::format("factor on '{}': {}", t.parent, *msg)});
      }
    }
    if (!std::isfinite(n.assignment.intercept)) out.push_back({n.name, "non-finite intercept"});
    if (auto msg = n.noise.check()) out.push_back({n.name, "noise: " + *msg});
  }

  // Cycle detection with colours; report each cycle by its member nodes.
  enum class Colour { white, grey, black };
  std::vector<Colour> colour(scm.size(), Colour::white);
  std::vector<std::size_t> path;
  std::set<std::set<std::string>> reported;
  auto visit = [&](auto&& self, std::size_t u) -> void {
    colour[u] = Colour::grey;
    path.push_back(u);
    for (const auto& p : scm.node(u).parents) {
      auto it = index.find(p);
      if (it == index.end()) continue;
      const auto v = it->second;
      if (colour[v] == Colour::grey) {
        std::set<std::string> members;
        auto pos = std::find(path.begin(), path.end(), v);
        for (; pos != path.end(); ++pos) members.insert(scm.node(*pos).name);
        if (reported.insert(members).second) {
          std::string names;
          for (const auto& m : members) names += (names.empty() ? "" : ",") + m;
          out.push_back({scm.node(v).name, fmt::format("cycle {{{}}}", names)});
        }
      } else if (colour[v] == Colour::white) {
        self(self, v);
      }
    }
    path.pop_back();
    colour[u] = Colour::black;
  };
  for (std::size_t i = 0; i < scm.size(); ++i) {
    if (colour[i] == Colour::white) visit(visit, i);
  }
  return out;
}

void require_valid(const Scm& scm) {
  auto violations = validate_scm(scm);
  if (violations.empty()) return;
  std::string msg = "invalid SCM:";
  for (const auto& v : violations) msg += fmt::format(" [{}: {}]", v.node, v.message);
  throw Error(msg);
}

std::vector<std::size_t> topological_order(const Scm& scm) {
  const auto n = scm.size();
  std::vector<std::size_t> indegree(n, 0);
  std::vector<std::vector<std::size_t>> children(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& p : scm.node(i).parents) {
      auto pi = scm.find(p);
      if (!pi) throw Error(fmt::format("node '{}' has unknown parent '{}'", scm.node(i).name, p));
      children[*pi].push_back(i);
      ++indegree[i];
    }
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push(i);
  }
  std::vector<std::size_t> order;
  order.reserve(n);
  while (!ready.empty()) {
    const auto u = ready.top();
    ready.pop();
    order.push_back(u);
    for (auto c : children[u]) {
      if (--indegree[c] == 0) ready.push(c);
    }
  }
  if (order.size() != n) throw Error("cycle detected in SCM");
  return order;
}

// ---------------------------------------------------------------------------
// Sampling

Sample sample_dataset(const Scm& scm, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error("sample size must be at least 1");
  require_valid(scm);
  for (const auto& node : scm.nodes()) {
    if (node.estimate) throw Error(fmt::format("node '{}' has unfitted coefficients", node.name));
  }
  const auto order = topological_order(scm);

  Sample out;
  out.latents.records = n;
  out.latents.nodes.resize(scm.size());
  for (std::size_t i = 0; i < scm.size(); ++i) {
    const auto& node = scm.node(i);
    auto& lat = out.latents.nodes[i];
    lat.name = node.name;
    auto gen = make_stream(seed, i, 0);
    draw(node.noise, gen, lat.noise, n);
    lat.factors.resize(node.assignment.terms.size());
    for (std::size_t t = 0; t < node.assignment.terms.size(); ++t) {
      if (const auto& f = node.assignment.terms[t].factor) {
        auto fgen = make_stream(seed, i, t + 1);
        draw(*f, fgen, lat.factors[t], n);
      }
    }
  }
  // Columns are written in declaration order once all are computed.
  out.data = predict(scm, out.latents);
  return out;
}

// ---------------------------------------------------------------------------
// Abduction

Latents abduct(const Scm& scm, const Dataset& data, AbductionMode mode, const Latents* stored) {
  for (const auto& node : scm.nodes()) {
    if (!data.has(node.name)) throw Error(fmt::format("missing column '{}'", node.name));
  }
  if (mode == AbductionMode::oracle) {
    if (!stored) throw Error("oracle abduction requires stored latents");
    if (stored->records != data.size())
      throw Error(fmt::format("latents cover {} records, dataset has {}", stored->records,
                              data.size()));
    for (const auto& node : scm.nodes()) {
      const auto& lat = stored->node(node.name);
      if (lat.noise.size() != data.size() || lat.factors.size() != node.assignment.terms.size())
        throw Error(fmt::format("latents for node '{}' do not match the model", node.name));
      for (std::size_t t = 0; t < lat.factors.size(); ++t) {
        const bool want = node.assignment.terms[t].factor.has_value();
        if (want != !lat.factors[t].empty())
          throw Error(fmt::format("latents for node '{}' lack factor draws", node.name));
      }
    }
    return *stored;
  }

  const auto n = data.size();
  Latents out;
  out.records = n;
  for (const auto& node : scm.nodes()) {
    if (node.estimate) throw Error(fmt::format("node '{}' has unfitted coefficients", node.name));
    NodeLatents lat;
    lat.name = node.name;
    const auto& a = node.assignment;
    std::vector<double> factor_row(a.terms.size(), 1.0);
    lat.factors.resize(a.terms.size());
    for (std::size_t t = 0; t < a.terms.size(); ++t) {
      if (const auto& f = a.terms[t].factor) {
        factor_row[t] = f->expected();
        lat.factors[t].assign(n, factor_row[t]);
      }
    }

    const auto own = data.column(node.name);
    const auto cols = term_columns(node, data);
    std::vector<double> parent_row(a.terms.size());
    lat.noise.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t t = 0; t < cols.size(); ++t) parent_row[t] = cols[t][r];
      const double eta = linear_predictor(a, parent_row, factor_row);
      double g = own[r];
      if (a.link == Link::exp) {
        if (!(own[r] > 0))
          throw Error(fmt::format("node '{}' row {}: exp-link value {} is not positive", node.name,
                                  r, own[r]));
        g = std::log(own[r]);
      }
      lat.noise[r] = g - eta;
    }
    out.nodes.push_back(std::move(lat));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Action

std::vector<std::string> Intervention::targets() const {
  std::vector<std::string> out;
  for (const auto& [name, value] : assignments) out.push_back(name);
  return out;
}

Intervention parse_intervention(std::string_view text) {
  Intervention iv;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    auto item = text.substr(pos, end - pos);
    auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0 || eq + 1 == item.size())
      throw Error(fmt::format("bad intervention '{}': expected NAME=VALUE", item));
    std::string name(item.substr(0, eq));
    std::string value(item.substr(eq + 1));
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || value.empty())
      throw Error(fmt::format("bad intervention value '{}' for '{}'", value, name));
    for (const auto& [existing, _] : iv.assignments) {
      if (existing == name) throw Error(fmt::format("intervention names '{}' twice", name));
    }
    iv.assignments.emplace_back(std::move(name), v);
    pos = end + 1;
  }
  if (iv.empty()) throw Error("empty intervention");
  return iv;
}

std::string to_string(const Intervention& iv) {
  std::string out;
  for (const auto& [name, value] : iv.assignments) {
    if (!out.empty()) out += ',';
    out += fmt::format("{}={}", name, value);
  }
  return out;
}

Scm intervene(const Scm& scm, const Intervention& intervention) {
  if (intervention.empty()) throw Error("intervention must name at least one node");
  Scm out = scm;
  for (const auto& [name, value] : intervention.assignments) {
    auto& node = out.node(name);
    if (node.kind != NodeKind::protected_attribute || !is_root(node))
      throw Error(fmt::format("intervention target '{}' is not a protected root node", name));
    node.assignment = Assignment{value, {}, Link::identity};
    node.noise = NoiseSpec{};
    node.intervened = true;
    node.estimate = false;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Prediction

Dataset predict(const Scm& scm, const Latents& latents, const Dataset* factual) {
  const auto n = latents.records;
  const auto order = topological_order(scm);
  std::vector<std::vector<double>> values(scm.size());
  // changed[i][r]: node i differs from the factual record r.
  std::vector<std::vector<char>> changed(scm.size());

  for (auto i : order) {
    const auto& node = scm.node(i);
    if (node.estimate) throw Error(fmt::format("node '{}' has unfitted coefficients", node.name));
    auto& out = values[i];
    out.resize(n);
    std::span<const double> fact;
    if (factual) {
      fact = factual->column(node.name);
      if (fact.size() != n) throw Error("factual dataset and latents differ in length");
      changed[i].assign(n, 0);
    }

    if (node.intervened) {
      std::fill(out.begin(), out.end(), node.assignment.intercept);
      if (factual) {
        for (std::size_t r = 0; r < n; ++r) changed[i][r] = out[r] != fact[r];
      }
      continue;
    }

    const auto& lat = latents.node(node.name);
    const auto& a = node.assignment;
    if (lat.noise.size() != n || lat.factors.size() != a.terms.size())
      throw Error(fmt::format("latents for node '{}' do not match the model", node.name));
    std::vector<std::size_t> parent_idx;
    std::vector<char> has_factor;
    for (std::size_t t = 0; t < a.terms.size(); ++t) {
      auto pi = scm.find(a.terms[t].parent);
      if (!pi) throw Error(fmt::format("unknown parent '{}'", a.terms[t].parent));
      parent_idx.push_back(*pi);
      has_factor.push_back(a.terms[t].factor.has_value());
      if (has_factor[t] && lat.factors[t].size() != n)
        throw Error(fmt::format("missing factor draws for node '{}'", node.name));
    }
    std::vector<std::size_t> all_parents;
    for (const auto& p : node.parents) all_parents.push_back(*scm.find(p));

    std::vector<double> parent_row(a.terms.size());
    std::vector<double> factor_row(a.terms.size(), 1.0);
    for (std::size_t r = 0; r < n; ++r) {
      if (factual) {
        bool moved = false;
        for (auto p : all_parents) moved = moved || changed[p][r];
        if (!moved) {
          out[r] = fact[r];
          continue;
        }
        changed[i][r] = 1;
      }
      for (std::size_t t = 0; t < parent_idx.size(); ++t) {
        parent_row[t] = values[parent_idx[t]][r];
        if (has_factor[t]) factor_row[t] = lat.factors[t][r];
      }
      out[r] = apply_link(a.link, linear_predictor(a, parent_row, factor_row) + lat.noise[r]);
      if (factual) changed[i][r] = out[r] != fact[r];
    }
  }

  Dataset data;
  for (std::size_t i = 0; i < scm.size(); ++i) data.set_column(scm.node(i).name, std::move(values[i]));
  return data;
}

CounterfactualDataset generate_counterfactual_dataset(const Scm& scm, const Dataset& data,
                                                      const Intervention& intervention,
                                                      const Classifier& classifier,
                                                      AbductionMode mode, const Latents* stored) {
  require_valid(scm);
  const auto latents = abduct(scm, data, mode, stored);
  const auto intervened = intervene(scm, intervention);
  auto predicted = predict(intervened, latents, &data);

  CounterfactualDataset out;
  out.intervention = intervention;
  for (std::size_t c = 0; c < data.num_columns(); ++c) {
    const auto& info = data.column_info(c);
    if (info.name == classifier.output) continue;
    if (predicted.has(info.name)) {
      auto col = predicted.column(info.name);
      out.data.set_column(info.name, std::vector<double>(col.begin(), col.end()), info.levels);
    } else {
      out.data.set_column(info.name, info.values, info.levels);
    }
  }
  out.data.set_column(classifier.output, classifier.apply(out.data));
  return out;
}

}  // namespace cst::scm
