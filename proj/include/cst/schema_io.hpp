#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cst/classifier.hpp"
#include "cst/dataset.hpp"
#include "cst/metric.hpp"

namespace cst {

// Schema config files are JSON documents:
//
//   {"attributes": [{"name": "X1", "kind": "continuous", "role": "relevant"},
//                   {"name": "A", "kind": "categorical", "role": "protected"}],
//    "decision": {"column": "Y", "positive": 1},
//    "protected": [{"column": "A", "value": 1}],
//    "classifier": {"weights": [["X1", 1], ["X2", 5]], "threshold": 225000},
//    "mappings": [{"source": "race", "target": "R",
//                  "values": {"White": 0}, "otherwise": 1}],
//    "scaling": [{"column": "LSAT", "factor": 1, "offset": 0}]}
//
// "classifier", "mappings" and "scaling" are optional. Mappings turn a raw
// column into a coded one (labels, or numbers written as text, are matched
// exactly); scaling rewrites a column as factor * x + offset. Both run at
// ingestion, mappings first.

struct ClassifierSpec {
  std::vector<std::pair<std::string, double>> weights;
  double threshold = 0.0;

  [[nodiscard]] Classifier build(const std::string& output) const;
};

struct ValueMapping {
  std::string source;
  std::string target;
  std::map<std::string, double> values;
  std::optional<double> otherwise;
};

struct Scaling {
  std::string column;
  double factor = 1.0;
  double offset = 0.0;
};

struct SchemaConfig {
  AttributeSchema schema;
  std::optional<ClassifierSpec> classifier;
  std::vector<ValueMapping> mappings;
  std::vector<Scaling> scaling;

  /// The configured classifier writing to the decision column; throws when
  /// the config has none.
  [[nodiscard]] Classifier make_classifier() const;
};

[[nodiscard]] nlohmann::json to_json(const SchemaConfig& config);
[[nodiscard]] SchemaConfig schema_from_json(const nlohmann::json& doc);
[[nodiscard]] SchemaConfig parse_schema(const std::string& text,
                                        const std::string& source = "<string>");
[[nodiscard]] SchemaConfig read_schema(const std::filesystem::path& path);
void write_schema(const std::filesystem::path& path, const SchemaConfig& config);

/// Applies the config's mappings then its scaling to a copy of `raw`.
/// Source column lookup ignores case. Throws on unmapped values without an
/// `otherwise`.
[[nodiscard]] Dataset apply_ingestion(const Dataset& raw, const SchemaConfig& config);

/// Index of the column named `name` ignoring ASCII case, if any.
[[nodiscard]] std::optional<std::size_t> find_column_nocase(const Dataset& data,
                                                            std::string_view name);

}  // namespace cst
