#include "cst/scm_io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "cst/csv.hpp"

namespace cst::scm {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

json noise_to_json(const NoiseSpec& n) {
  json j = std::visit(overloaded{
                          [](const Normal& d) {
                            return json{{"family", "normal"}, {"mean", d.mean}, {"sd", d.sd}};
                          },
                          [](const Poisson& d) {
                            return json{{"family", "poisson"}, {"lambda", d.lambda}};
                          },
                          [](const ChiSquared& d) {
                            return json{{"family", "chi-squared"}, {"df", d.df}};
                          },
                          [](const Bernoulli& d) {
                            return json{{"family", "bernoulli"}, {"p", d.p}};
                          },
                          [](const PointMass&) { return json{{"family", "point-mass"}}; },
                      },
                      n.dist);
  if (n.scale != 1.0) j["scale"] = n.scale;
  return j;
}

NoiseSpec noise_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw Error(where + ": noise must be an object");
  const auto family = j.at("family").get<std::string>();
  NoiseSpec n;
  n.scale = j.value("scale", 1.0);
  if (family == "normal") {
    n.dist = Normal{j.value("mean", 0.0), j.value("sd", 1.0)};
  } else if (family == "poisson") {
    n.dist = Poisson{j.at("lambda").get<double>()};
  } else if (family == "chi-squared") {
    n.dist = ChiSquared{j.at("df").get<double>()};
  } else if (family == "bernoulli") {
    n.dist = Bernoulli{j.at("p").get<double>()};
  } else if (family == "point-mass") {
    n.dist = PointMass{};
  } else {
    throw Error(fmt::format("{}: unknown noise family '{}'", where, family));
  }
  return n;
}

std::string factor_column(const NodeSpec& node, std::size_t t) {
  const auto& parent = node.assignment.terms[t].parent;
  for (std::size_t o = 0; o < node.assignment.terms.size(); ++o) {
    if (o != t && node.assignment.terms[o].factor && node.assignment.terms[o].parent == parent)
      return fmt::format("factor:{}:{}#{}", node.name, parent, t);
  }
  return fmt::format("factor:{}:{}", node.name, parent);
}

}  // namespace

json to_json(const Scm& scm) {
  json nodes = json::array();
  for (const auto& n : scm.nodes()) {
    json terms = json::array();
    for (const auto& t : n.assignment.terms) {
      json jt{{"parent", t.parent}, {"coefficient", t.coefficient}};
      if (t.factor) jt["factor"] = noise_to_json(*t.factor);
      terms.push_back(std::move(jt));
    }
    json assignment{{"intercept", n.assignment.intercept},
                    {"link", n.assignment.link == Link::exp ? "exp" : "identity"},
                    {"terms", std::move(terms)}};
    if (n.estimate) assignment["estimate"] = true;
    nodes.push_back(json{{"name", n.name},
                         {"kind", n.kind == NodeKind::protected_attribute ? "protected" : "covariate"},
                         {"parents", n.parents},
                         {"assignment", std::move(assignment)},
                         {"noise", noise_to_json(n.noise)}});
  }
  return json{{"nodes", std::move(nodes)}};
}

Scm scm_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array())
    throw Error("SCM spec must be an object with a 'nodes' array");
  Scm scm;
  std::size_t idx = 0;
  for (const auto& jn : doc["nodes"]) {
    const auto where = fmt::format("node #{}", idx++);
    try {
      NodeSpec n;
      n.name = jn.at("name").get<std::string>();
      const auto kind = jn.value("kind", std::string("covariate"));
      if (kind == "protected") {
        n.kind = NodeKind::protected_attribute;
      } else if (kind == "covariate") {
        n.kind = NodeKind::covariate;
      } else {
        throw Error(fmt::format("unknown kind '{}'", kind));
      }
      n.parents = jn.value("parents", std::vector<std::string>{});
      if (jn.contains("assignment")) {
        const auto& ja = jn["assignment"];
        n.assignment.intercept = ja.value("intercept", 0.0);
        const auto link = ja.value("link", std::string("identity"));
        if (link == "exp") {
          n.assignment.link = Link::exp;
        } else if (link != "identity") {
          throw Error(fmt::format("unknown link '{}'", link));
        }
        n.estimate = ja.value("estimate", false);
        if (ja.contains("terms")) {
          for (const auto& jt : ja["terms"]) {
            Term t;
            t.parent = jt.at("parent").get<std::string>();
            t.coefficient = jt.value("coefficient", 0.0);
            if (jt.contains("factor")) t.factor = noise_from_json(jt["factor"], n.name);
            n.assignment.terms.push_back(std::move(t));
          }
        }
      }
      if (jn.contains("noise")) n.noise = noise_from_json(jn["noise"], n.name);
      scm.add(std::move(n));
    } catch (const json::exception& e) {
      throw Error(fmt::format("{}: {}", where, e.what()));
    } catch (const Error& e) {
      throw Error(fmt::format("{}: {}", where, e.what()));
    }
  }
  return scm;
}

Scm parse_scm(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(fmt::format("{}: {}", source, e.what()));
  }
  try {
    return scm_from_json(doc);
  } catch (const Error& e) {
    throw Error(fmt::format("{}: {}", source, e.what()));
  }
}

Scm read_scm(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scm(ss.str(), path.string());
}

void write_scm(const std::filesystem::path& path, const Scm& scm) {
  std::ofstream out(path);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  out << to_json(scm).dump(2) << '\n';
}

void write_latents(std::ostream& out, const Scm& scm, const Latents& latents) {
  Dataset table;
  for (const auto& node : scm.nodes()) {
    const auto& lat = latents.node(node.name);
    table.set_column("noise:" + node.name, lat.noise);
    for (std::size_t t = 0; t < node.assignment.terms.size(); ++t) {
      if (node.assignment.terms[t].factor) table.set_column(factor_column(node, t), lat.factors.at(t));
    }
  }
  write_csv(out, table);
}

void write_latents(const std::filesystem::path& path, const Scm& scm, const Latents& latents) {
  std::ofstream out(path);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  write_latents(out, scm, latents);
}

Latents read_latents(std::istream& in, const Scm& scm, const std::string& source) {
  const auto table = read_csv(in, source);
  Latents out;
  out.records = table.size();
  for (const auto& node : scm.nodes()) {
    NodeLatents lat;
    lat.name = node.name;
    const auto noise_col = "noise:" + node.name;
    if (!table.has(noise_col))
      throw Error(fmt::format("{}: missing latent column '{}'", source, noise_col));
    auto v = table.column(noise_col);
    lat.noise.assign(v.begin(), v.end());
    lat.factors.resize(node.assignment.terms.size());
    for (std::size_t t = 0; t < node.assignment.terms.size(); ++t) {
      if (!node.assignment.terms[t].factor) continue;
      const auto col = factor_column(node, t);
      if (!table.has(col)) throw Error(fmt::format("{}: missing latent column '{}'", source, col));
      auto f = table.column(col);
      lat.factors[t].assign(f.begin(), f.end());
    }
    out.nodes.push_back(std::move(lat));
  }
  return out;
}

Latents read_latents(const std::filesystem::path& path, const Scm& scm) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
  return read_latents(in, scm, path.string());
}

}  // namespace cst::scm
