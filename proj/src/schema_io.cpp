#include "cst/schema_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace cst {

using nlohmann::json;

Classifier ClassifierSpec::build(const std::string& output) const {
  if (weights.empty()) throw Error("classifier has no weights");
  return linear_threshold_classifier(weights, threshold, output);
}

Classifier SchemaConfig::make_classifier() const {
  if (!classifier) throw Error("schema config declares no classifier");
  return classifier->build(schema.decision);
}

json to_json(const SchemaConfig& config) {
  json doc;
  json attrs = json::array();
  for (const auto& a : config.schema.attributes) {
    attrs.push_back({{"name", a.name}, {"kind", to_string(a.kind)}, {"role", to_string(a.role)}});
  }
  doc["attributes"] = attrs;
  doc["decision"] = {{"column", config.schema.decision}, {"positive", config.schema.positive}};
  json prot = json::array();
  for (const auto& p : config.schema.protected_values) {
    prot.push_back({{"column", p.attribute}, {"value", p.value}});
  }
  doc["protected"] = prot;
  if (config.classifier) {
    json w = json::array();
    for (const auto& [name, weight] : config.classifier->weights) w.push_back({name, weight});
    doc["classifier"] = {{"weights", w}, {"threshold", config.classifier->threshold}};
  }
  if (!config.mappings.empty()) {
    json maps = json::array();
    for (const auto& m : config.mappings) {
      json jm = {{"source", m.source}, {"target", m.target}, {"values", m.values}};
      if (m.otherwise) jm["otherwise"] = *m.otherwise;
      maps.push_back(jm);
    }
    doc["mappings"] = maps;
  }
  if (!config.scaling.empty()) {
    json sc = json::array();
    for (const auto& s : config.scaling) {
      sc.push_back({{"column", s.column}, {"factor", s.factor}, {"offset", s.offset}});
    }
    doc["scaling"] = sc;
  }
  return doc;
}

SchemaConfig schema_from_json(const json& doc) {
  if (!doc.is_object()) throw Error("schema config must be a JSON object");
  SchemaConfig out;
  try {
    for (const auto& ja : doc.at("attributes")) {
      AttributeSpec a;
      a.name = ja.at("name").get<std::string>();
      a.kind = parse_attribute_kind(ja.value("kind", std::string("continuous")));
      a.role = parse_attribute_role(ja.value("role", std::string("relevant")));
      out.schema.attributes.push_back(std::move(a));
    }
    if (doc.contains("decision")) {
      const auto& d = doc["decision"];
      out.schema.decision = d.value("column", out.schema.decision);
      out.schema.positive = d.value("positive", out.schema.positive);
    }
    for (const auto& jp : doc.at("protected")) {
      out.schema.protected_values.push_back(
          {jp.at("column").get<std::string>(), jp.at("value").get<double>()});
    }
    if (doc.contains("classifier")) {
      ClassifierSpec spec;
      for (const auto& w : doc["classifier"].at("weights")) {
        if (!w.is_array() || w.size() != 2) throw Error("classifier weights are [column, weight] pairs");
        spec.weights.emplace_back(w[0].get<std::string>(), w[1].get<double>());
      }
      spec.threshold = doc["classifier"].at("threshold").get<double>();
      out.classifier = std::move(spec);
    }
    if (doc.contains("mappings")) {
      for (const auto& jm : doc["mappings"]) {
        ValueMapping m;
        m.source = jm.at("source").get<std::string>();
        m.target = jm.value("target", m.source);
        m.values = jm.at("values").get<std::map<std::string, double>>();
        if (jm.contains("otherwise")) m.otherwise = jm["otherwise"].get<double>();
        out.mappings.push_back(std::move(m));
      }
    }
    if (doc.contains("scaling")) {
      for (const auto& js : doc["scaling"]) {
        out.scaling.push_back({js.at("column").get<std::string>(), js.value("factor", 1.0),
                               js.value("offset", 0.0)});
      }
    }
  } catch (const json::exception& e) {
    throw Error(e.what());
  }
  return out;
}

SchemaConfig parse_schema(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(fmt::format("{}: {}", source, e.what()));
  }
  try {
    return schema_from_json(doc);
  } catch (const Error& e) {
    throw Error(fmt::format("{}: {}", source, e.what()));
  }
}

SchemaConfig read_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_schema(ss.str(), path.string());
}

void write_schema(const std::filesystem::path& path, const SchemaConfig& config) {
  std::ofstream out(path);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  out << to_json(config).dump(2) << '\n';
}

std::optional<std::size_t> find_column_nocase(const Dataset& data, std::string_view name) {
  auto lower = [](std::string_view s) {
    std::string out(s);
    for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return out;
  };
  const auto want = lower(name);
  const auto names = data.names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (lower(names[i]) == want) return i;
  }
  return std::nullopt;
}

Dataset apply_ingestion(const Dataset& raw, const SchemaConfig& config) {
  Dataset out = raw;
  for (const auto& m : config.mappings) {
    const auto idx = find_column_nocase(raw, m.source);
    if (!idx) throw Error(fmt::format("missing column '{}'", m.source));
    const auto& col = raw.column_info(*idx);
    std::vector<double> coded(col.values.size());
    for (std::size_t r = 0; r < coded.size(); ++r) {
      const double v = col.values[r];
      const std::string key = col.levels.empty() ? fmt::format("{}", v)
                                                 : col.levels.at(static_cast<std::size_t>(v));
      const auto hit = m.values.find(key);
      if (hit != m.values.end()) {
        coded[r] = hit->second;
      } else if (m.otherwise) {
        coded[r] = *m.otherwise;
      } else {
        throw Error(fmt::format("column '{}' row {}: value '{}' has no mapping", m.source, r, key));
      }
    }
    out.set_column(m.target, std::move(coded));
  }
  for (const auto& s : config.scaling) {
    const auto idx = find_column_nocase(out, s.column);
    if (!idx) throw Error(fmt::format("missing column '{}'", s.column));
    const auto& col = out.column_info(*idx);
    std::vector<double> scaled(col.values.size());
    for (std::size_t r = 0; r < scaled.size(); ++r) scaled[r] = s.factor * col.values[r] + s.offset;
    out.set_column(col.name, std::move(scaled));
  }
  return out;
}

}  // namespace cst
