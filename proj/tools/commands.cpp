#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "CLI11.hpp"

#include "cst/csv.hpp"
#include "cst/scenarios.hpp"
#include "cst/scm_io.hpp"
#include "manifest.hpp"

namespace cst::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string to_string(scm::AbductionMode m) {
  return m == scm::AbductionMode::oracle ? "oracle" : "residual";
}

scm::AbductionMode parse_abduction(std::string_view text) {
  if (text == "oracle") return scm::AbductionMode::oracle;
  if (text == "residual") return scm::AbductionMode::residual;
  throw Error(fmt::format("unknown abduction mode '{}' (expected oracle or residual)", text));
}

std::vector<ProtectedValue> parse_protected(std::string_view text) {
  std::vector<ProtectedValue> out;
  for (const auto& [name, value] : scm::parse_intervention(text).assignments)
    out.push_back({name, value});
  return out;
}

std::string protected_to_string(const std::vector<ProtectedValue>& pv) {
  std::string out;
  for (const auto& p : pv) {
    if (!out.empty()) out += ',';
    out += fmt::format("{}={}", p.attribute, p.value);
  }
  return out;
}

bool needs_model(Method m) { return m == Method::cst || m == Method::cf; }

}  // namespace

json AuditSettings::to_json() const {
  json j = {{"method", cst::to_string(method)},
            {"k", config.k},
            {"alpha", config.alpha},
            {"tau", config.tau},
            {"include_centers", config.include_centers},
            {"variance_mode", cst::to_string(config.variance_mode)},
            {"intervention", scm::to_string(config.intervention)},
            {"jobs", config.jobs},
            {"ks", ks}};
  j["abduction"] = abduction ? json(to_string(*abduction)) : json(nullptr);
  j["max_distance"] = config.max_distance ? json(*config.max_distance) : json(nullptr);
  j["protected"] = protected_values.empty() ? json(nullptr) : json(protected_to_string(protected_values));
  return j;
}

void AuditSettings::merge(const json& doc) {
  if (!doc.is_object()) throw Error("config must be a JSON object");
  const json& c = doc.contains("config") && doc["config"].is_object() ? doc["config"] : doc;
  try {
    if (c.contains("method")) method = parse_method(c["method"].get<std::string>());
    if (c.contains("k")) config.k = c["k"].get<std::size_t>();
    if (c.contains("alpha")) config.alpha = c["alpha"].get<double>();
    if (c.contains("tau")) config.tau = c["tau"].get<double>();
    if (c.contains("include_centers")) config.include_centers = c["include_centers"].get<bool>();
    if (c.contains("variance_mode"))
      config.variance_mode = parse_variance_mode(c["variance_mode"].get<std::string>());
    if (c.contains("intervention")) {
      const auto text = c["intervention"].get<std::string>();
      config.intervention = text.empty() ? scm::Intervention{} : scm::parse_intervention(text);
    }
    if (c.contains("jobs")) config.jobs = c["jobs"].get<std::size_t>();
    if (c.contains("ks")) ks = c["ks"].get<std::vector<std::size_t>>();
    if (c.contains("abduction") && !c["abduction"].is_null())
      abduction = parse_abduction(c["abduction"].get<std::string>());
    if (c.contains("max_distance") && !c["max_distance"].is_null())
      config.max_distance = c["max_distance"].get<double>();
    if (c.contains("protected") && !c["protected"].is_null())
      protected_values = parse_protected(c["protected"].get<std::string>());
  } catch (const json::exception& e) {
    throw Error(fmt::format("config: {}", e.what()));
  }
}

scm::Scm ready_scm(const scm::Scm& model, const Dataset& data) {
  const auto nodes = model.nodes();
  const bool skeleton =
      std::any_of(nodes.begin(), nodes.end(), [](const auto& n) { return n.estimate; });
  scm::Scm out = skeleton ? scm::fit_linear_anm(model, data).scm : model;
  scm::require_valid(out);
  return out;
}

AttributeSchema effective_schema(const AuditInputs& in, const AuditSettings& s) {
  AttributeSchema schema = in.schema.schema;
  if (!s.protected_values.empty()) schema.protected_values = s.protected_values;
  return schema;
}

scm::CounterfactualDataset make_counterfactual(const AuditInputs& in, const AuditSettings& s) {
  if (!in.scm) throw Error("SCM required for counterfactual methods");
  if (s.config.intervention.empty())
    throw Error("intervention required for counterfactual methods (e.g. --intervention A=0)");
  const auto mode = s.abduction.value_or(in.latents ? scm::AbductionMode::oracle
                                                    : scm::AbductionMode::residual);
  if (mode == scm::AbductionMode::oracle && !in.latents)
    throw Error("oracle abduction needs stored latents (--latents)");
  const auto model = ready_scm(*in.scm, in.data);
  return scm::generate_counterfactual_dataset(model, in.data, s.config.intervention,
                                              in.schema.make_classifier(), mode,
                                              in.latents ? &*in.latents : nullptr);
}

DiscriminationReport run_audit(const AuditInputs& in, const AuditSettings& s) {
  s.config.validate();
  const auto schema = effective_schema(in, s);
  if (s.method == Method::st) return run_st(in.data, schema, s.config);
  const auto cf = make_counterfactual(in, s);
  if (s.method == Method::cf) return run_cf(in.data, cf.data, schema);
  return run_cst(in.data, cf.data, schema, s.config);
}

std::size_t overlap(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::vector<std::size_t> both;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
  return both.size();
}

Comparison run_comparison(const AuditInputs& in, const AuditSettings& s) {
  if (s.ks.empty()) throw Error("k list is empty");
  s.config.validate();
  const auto schema = effective_schema(in, s);
  const auto cf = make_counterfactual(in, s);
  const auto k_max = *std::max_element(s.ks.begin(), s.ks.end());
  const auto cst_hoods = find_neighborhoods(in.data, cf.data, schema, k_max,
                                            s.config.max_distance, s.config.jobs);
  const auto st_hoods = find_neighborhoods(in.data, in.data, schema, k_max,
                                           s.config.max_distance, s.config.jobs);
  Comparison out;
  out.ks = s.ks;
  out.cf = run_cf(in.data, cf.data, schema);
  const auto cf_set = out.cf.discriminated_indices();
  for (auto k : s.ks) {
    AuditConfig c = s.config;
    c.k = k;
    c.include_centers = false;
    out.cst_without.push_back(score_neighborhoods(Method::cst, in.data, &cf.data, cst_hoods, schema, c));
    out.st.push_back(score_neighborhoods(Method::st, in.data, nullptr, st_hoods, schema, c));
    c.include_centers = true;
    out.cst.push_back(score_neighborhoods(Method::cst, in.data, &cf.data, cst_hoods, schema, c));
    const auto st_set = out.st.back().discriminated_indices();
    const auto cst_set = out.cst.back().discriminated_indices();
    out.st_in_cst_without.push_back(overlap(st_set, out.cst_without.back().discriminated_indices()));
    out.st_in_cst.push_back(overlap(st_set, cst_set));
    out.cf_in_cst.push_back(overlap(cf_set, cst_set));
  }
  return out;
}

std::string format_comparison(const Comparison& c) {
  std::string out = fmt::format("{:<14}", "Method");
  for (auto k : c.ks) out += fmt::format("{:>16}", fmt::format("k={}", k));
  out += '\n';
  auto row = [&](const std::string& label, auto cell) {
    out += fmt::format("{:<14}", label);
    for (std::size_t i = 0; i < c.ks.size(); ++i) out += fmt::format("{:>16}", cell(i));
    out += '\n';
  };
  row("CST (w/o)", [&](std::size_t i) { return summary_cell(c.cst_without[i].summary); });
  row("ST", [&](std::size_t i) { return summary_cell(c.st[i].summary); });
  row("CST", [&](std::size_t i) { return summary_cell(c.cst[i].summary); });
  row("CF", [&](std::size_t) { return summary_cell(c.cf.summary); });
  row("|ST∩CST w/o|", [&](std::size_t i) {
    return fmt::format("{}/{}", c.st_in_cst_without[i], c.st[i].summary.discriminated);
  });
  row("|ST∩CST|", [&](std::size_t i) {
    return fmt::format("{}/{}", c.st_in_cst[i], c.st[i].summary.discriminated);
  });
  row("|CF∩CST|", [&](std::size_t i) {
    return fmt::format("{}/{}", c.cf_in_cst[i], c.cf.summary.discriminated);
  });
  return out;
}

namespace {

std::string pct(double share) { return fmt::format("{:.4g}%", 100.0 * share); }

/// Share of records with decision != positive among those where `col` == v.
double rate_where(const Dataset& d, std::string_view col, double v, bool negative) {
  const auto g = d.column(col);
  const auto y = d.column("Y");
  std::size_t n = 0;
  std::size_t hits = 0;
  for (std::size_t r = 0; r < d.size(); ++r) {
    if (g[r] != v) continue;
    ++n;
    hits += ((y[r] == 1.0) != negative) ? 1 : 0;
  }
  return n ? static_cast<double>(hits) / static_cast<double>(n) : 0.0;
}

double share_of(const Dataset& d, std::string_view col, double v) {
  const auto g = d.column(col);
  return static_cast<double>(std::count(g.begin(), g.end(), v)) / static_cast<double>(d.size());
}

void print_law_summary(std::ostream& out, const scenarios::LawSchool& law) {
  const auto& d = law.data;
  fmt::print(out, "records: {} (dropped {} with LSAT <= 0, {} with UGPA outside [0, 4])\n",
             d.size(), law.dropped_lsat, law.dropped_ugpa);
  fmt::print(out, "female: {}  non-white: {}\n", pct(share_of(d, "G", 1.0)),
             pct(share_of(d, "R", 1.0)));
  fmt::print(out, "success rate: female {} vs male {}; non-white {} vs white {}\n",
             pct(rate_where(d, "G", 1.0, false)), pct(rate_where(d, "G", 0.0, false)),
             pct(rate_where(d, "R", 1.0, false)), pct(rate_where(d, "R", 0.0, false)));
  for (const auto& f : law.fit.fits) {
    std::string terms;
    for (std::size_t i = 0; i < f.regressors.size(); ++i)
      terms += fmt::format(" {}={:.4g}({:.2g})", f.regressors[i], f.coefficients[i],
                           f.standard_errors[i]);
    fmt::print(out, "fit {}:{} sd={:.4g}\n", f.name, terms, f.residual_sd);
  }
}

struct Paths {
  fs::path data, latents, scm, schema, manifest, raw;
};

Paths output_paths(const fs::path& dir, const std::string& prefix) {
  fs::create_directories(dir);
  return {dir / (prefix + ".csv"),         dir / (prefix + ".latents.csv"),
          dir / (prefix + ".scm.json"),    dir / (prefix + ".schema.json"),
          dir / (prefix + ".manifest.json"), dir / (prefix + ".raw.csv")};
}

void write_law_outputs(std::ostream& out, const scenarios::LawSchool& law,
                       const SchemaConfig& schema, const Paths& p, RunManifest& manifest) {
  write_csv(p.data, law.data);
  scm::write_scm(p.scm, law.fit.scm);
  write_schema(p.schema, schema);
  manifest.add_output("data", p.data);
  manifest.add_output("scm", p.scm);
  manifest.add_output("schema", p.schema);
  manifest.write(p.manifest);
  print_law_summary(out, law);
  fmt::print(out, "wrote {}, {}, {}\n", p.data.string(), p.scm.string(), p.schema.string());
}

struct GenerateArgs {
  std::string scenario;
  std::size_t n = 5000;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  std::string prefix;
  std::string protected_column = "R";
};

void cmd_generate(const GenerateArgs& a, const std::vector<std::string>& argv, std::ostream& out) {
  const auto prefix = a.prefix.empty() ? a.scenario : a.prefix;
  RunManifest manifest;
  manifest.command = "generate";
  manifest.argv = argv;
  manifest.config = {{"scenario", a.scenario}, {"n", a.n}, {"seed", a.seed}};

  if (a.scenario == "loan") {
    const auto p = output_paths(a.out_dir, prefix);
    const auto loan = scenarios::generate_loan(a.n, a.seed);
    write_csv(p.data, loan.data);
    scm::write_latents(p.latents, loan.scm, loan.latents);
    scm::write_scm(p.scm, loan.scm);
    write_schema(p.schema, scenarios::loan_schema());
    for (auto [role, path] : {std::pair{"data", p.data}, {"latents", p.latents}, {"scm", p.scm},
                              {"schema", p.schema}})
      manifest.add_output(role, path);
    manifest.write(p.manifest);

    const auto cf = scm::generate_counterfactual_dataset(
        loan.scm, loan.data, scm::parse_intervention("A=0"), scenarios::loan_classifier(),
        scm::AbductionMode::oracle, &loan.latents);
    const auto a_col = loan.data.column("A");
    const auto females = static_cast<std::size_t>(std::count(a_col.begin(), a_col.end(), 1.0));
    fmt::print(out, "records: {}  female (A=1): {}  male: {}\n", loan.data.size(), females,
               loan.data.size() - females);
    fmt::print(out, "loan rejection rate: female {}, male {}; female under do(A=0): {}\n",
               pct(rate_where(loan.data, "A", 1.0, true)), pct(rate_where(loan.data, "A", 0.0, true)),
               pct([&] {
                 const auto y = cf.data.column("Y");
                 std::size_t n = 0;
                 for (std::size_t r = 0; r < a_col.size(); ++r) n += a_col[r] == 1.0 && y[r] != 1.0;
                 return females ? static_cast<double>(n) / static_cast<double>(females) : 0.0;
               }()));
    fmt::print(out, "wrote {}, {}, {}, {}\n", p.data.string(), p.latents.string(), p.scm.string(),
               p.schema.string());
  } else if (a.scenario == "law-school-synthetic") {
    const auto p = output_paths(a.out_dir, prefix);
    const auto raw = scenarios::generate_law_school_synthetic(a.n, a.seed);
    write_csv(p.raw, raw);
    manifest.add_output("raw", p.raw);
    const auto schema = scenarios::law_schema(a.protected_column);
    const auto law = scenarios::build_law_school(raw, schema);
    write_law_outputs(out, law, schema, p, manifest);
  } else {
    throw Error(fmt::format("unknown scenario '{}' (expected loan or law-school-synthetic)",
                            a.scenario));
  }
}

struct IngestArgs {
  std::string input;
  std::string schema;
  std::string protected_column = "R";
  std::string out_dir = ".";
  std::string prefix = "law";
};

void cmd_ingest(const IngestArgs& a, const std::vector<std::string>& argv, std::ostream& out) {
  RunManifest manifest;
  manifest.command = "ingest-law-school";
  manifest.argv = argv;
  manifest.config = {{"protected", a.protected_column}};
  const auto schema = a.schema.empty() ? scenarios::law_schema(a.protected_column)
                                       : read_schema(a.schema);
  manifest.add_input("raw", a.input);
  if (!a.schema.empty()) manifest.add_input("schema", a.schema);
  const auto law = scenarios::build_law_school(read_csv(fs::path(a.input)), schema);
  write_law_outputs(out, law, schema, output_paths(a.out_dir, a.prefix), manifest);
}

struct AuditArgs {
  std::string data, scm, schema, latents, config, out;
  std::string method, intervention, variance_mode, abduction, protected_values;
  std::size_t k = 0, jobs = 0;
  double alpha = 0, tau = 0, max_distance = 0;
  bool include_centers = false;
  std::vector<std::size_t> ks;
};

/// Options shared by audit and compare; null when a command lacks one.
struct SharedOptions {
  CLI::Option* method = nullptr;
  CLI::Option* k = nullptr;
  CLI::Option* alpha = nullptr;
  CLI::Option* tau = nullptr;
  CLI::Option* centers = nullptr;
  CLI::Option* intervention = nullptr;
  CLI::Option* variance = nullptr;
  CLI::Option* abduction = nullptr;
  CLI::Option* jobs = nullptr;
  CLI::Option* max_distance = nullptr;
  CLI::Option* protected_values = nullptr;
  CLI::Option* ks = nullptr;
};

SharedOptions add_shared(CLI::App* cmd, AuditArgs& a, bool compare) {
  SharedOptions o;
  cmd->add_option("--data", a.data, "Factual dataset CSV")->required()->check(CLI::ExistingFile);
  cmd->add_option("--schema", a.schema, "Schema config JSON")->required()->check(CLI::ExistingFile);
  cmd->add_option("--scm", a.scm, "SCM spec JSON")->check(CLI::ExistingFile);
  cmd->add_option("--latents", a.latents, "Stored latents CSV for oracle abduction")
      ->check(CLI::ExistingFile);
  cmd->add_option("--config", a.config, "Settings JSON (flags take precedence)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", a.out, "Output CSV path");
  if (compare) {
    o.ks = cmd->add_option("--ks", a.ks, "Group sizes, comma separated")->delimiter(',');
  } else {
    o.method = cmd->add_option("--method", a.method, "cst, st or cf");
    o.k = cmd->add_option("--k", a.k, "Group size")->check(CLI::PositiveNumber);
    o.centers = cmd->add_flag("--include-centers,!--exclude-centers", a.include_centers,
                              "Count the search centers in both groups");
  }
  o.alpha = cmd->add_option("--alpha", a.alpha, "Significance level");
  o.tau = cmd->add_option("--tau", a.tau, "Minimum deviation");
  o.intervention = cmd->add_option("--intervention", a.intervention, "e.g. A=0 or R=0,G=0");
  o.variance = cmd->add_option("--variance-mode", a.variance_mode, "as-written or standard-sum");
  o.abduction = cmd->add_option("--abduction", a.abduction, "oracle or residual");
  o.jobs = cmd->add_option("--jobs", a.jobs, "Worker threads (0 = all cores)");
  o.max_distance = cmd->add_option("--max-distance", a.max_distance, "Neighbour distance cap");
  o.protected_values =
      cmd->add_option("--protected", a.protected_values, "Protected values, e.g. R=1");
  return o;
}

AuditSettings resolve_settings(const AuditArgs& a, const SharedOptions& o) {
  AuditSettings s;
  if (!a.config.empty()) {
    std::ifstream in(a.config);
    std::stringstream ss;
    ss << in.rdbuf();
    json doc;
    try {
      doc = json::parse(ss.str());
    } catch (const json::parse_error& e) {
      throw Error(fmt::format("{}: {}", a.config, e.what()));
    }
    s.merge(doc);
  }
  auto given = [](const CLI::Option* opt) { return opt && opt->count() > 0; };
  if (given(o.method)) s.method = parse_method(a.method);
  if (given(o.k)) s.config.k = a.k;
  if (given(o.centers)) s.config.include_centers = a.include_centers;
  if (given(o.ks)) s.ks = a.ks;
  if (given(o.alpha)) s.config.alpha = a.alpha;
  if (given(o.tau)) s.config.tau = a.tau;
  if (given(o.intervention)) s.config.intervention = scm::parse_intervention(a.intervention);
  if (given(o.variance)) s.config.variance_mode = parse_variance_mode(a.variance_mode);
  if (given(o.abduction)) s.abduction = parse_abduction(a.abduction);
  if (given(o.jobs)) s.config.jobs = a.jobs;
  if (given(o.max_distance)) s.config.max_distance = a.max_distance;
  if (given(o.protected_values)) s.protected_values = parse_protected(a.protected_values);
  return s;
}

AuditInputs load_inputs(const AuditArgs& a, const AuditSettings& s, RunManifest& manifest) {
  AuditInputs in;
  in.data = read_csv(fs::path(a.data));
  manifest.add_input("data", a.data);
  in.schema = read_schema(a.schema);
  manifest.add_input("schema", a.schema);
  if (!a.config.empty()) manifest.add_input("config", a.config);
  if (!a.scm.empty()) {
    in.scm = scm::read_scm(a.scm);
    manifest.add_input("scm", a.scm);
  }
  if (!a.latents.empty()) {
    if (!in.scm) throw Error("--latents needs --scm");
    in.latents = scm::read_latents(fs::path(a.latents), *in.scm);
    manifest.add_input("latents", a.latents);
  }
  if (!in.data.has(in.schema.schema.decision)) {
    if (!in.schema.classifier)
      throw Error(fmt::format("dataset lacks decision column '{}' and the schema has no classifier",
                              in.schema.schema.decision));
    const auto c = in.schema.make_classifier();
    in.data.set_column(c.output, c.apply(in.data));
  }
  if (needs_model(s.method) && !in.scm) throw Error("SCM required for counterfactual methods");
  return in;
}

void print_warnings(std::ostream& err, const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) fmt::print(err, "warning: {}\n", w);
}

void cmd_audit(const AuditArgs& a, const SharedOptions& o, const std::vector<std::string>& argv,
               std::ostream& out, std::ostream& err) {
  auto s = resolve_settings(a, o);
  s.config.validate();
  RunManifest manifest;
  manifest.command = "audit";
  manifest.argv = argv;
  const auto in = load_inputs(a, s, manifest);
  // Record the abduction mode actually used so the manifest replays exactly.
  if (!s.abduction && in.scm)
    s.abduction = in.latents ? scm::AbductionMode::oracle : scm::AbductionMode::residual;
  manifest.config = s.to_json();
  const auto report = run_audit(in, s);

  const fs::path path = a.out.empty() ? fs::path("report.csv") : fs::path(a.out);
  write_report(path.string(), report);
  manifest.add_output("report", path);
  manifest.write(path.string() + ".manifest.json");
  print_warnings(err, report.warnings);

  const auto& sum = report.summary;
  if (sum.method == Method::cf) {
    fmt::print(out, "cf: {}\n", summary_cell(sum));
  } else {
    fmt::print(out, "{} k={}{}: {}  significant: {}\n", to_string(sum.method), sum.k,
               sum.method == Method::cst ? (sum.include_centers ? " with centers" : " without centers")
                                         : "",
               summary_cell(sum), sum.significant);
  }
  fmt::print(out, "wrote {}\n", path.string());
}

void cmd_compare(const AuditArgs& a, const SharedOptions& o, const std::vector<std::string>& argv,
                 std::ostream& out, std::ostream& err) {
  auto s = resolve_settings(a, o);
  s.method = Method::cst;
  s.config.validate();
  RunManifest manifest;
  manifest.command = "compare";
  manifest.argv = argv;
  const auto in = load_inputs(a, s, manifest);
  // Record the abduction mode actually used so the manifest replays exactly.
  if (!s.abduction && in.scm)
    s.abduction = in.latents ? scm::AbductionMode::oracle : scm::AbductionMode::residual;
  manifest.config = s.to_json();
  const auto c = run_comparison(in, s);
  print_warnings(err, c.cst.front().warnings);
  const auto table = format_comparison(c);
  out << table;
  if (!a.out.empty()) {
    std::ofstream f(a.out);
    if (!f) throw Error(fmt::format("cannot write '{}'", a.out));
    f << "method,k,discriminated,significant,protected,percent\n";
    auto emit = [&](const std::string& label, const ReportSummary& sum) {
      fmt::print(f, "{},{},{},{},{},{}\n", label, sum.k, sum.discriminated, sum.significant,
                 sum.protected_count, sum.percent);
    };
    for (std::size_t i = 0; i < c.ks.size(); ++i) {
      emit("cst_without", c.cst_without[i].summary);
      emit("st", c.st[i].summary);
      emit("cst", c.cst[i].summary);
    }
    emit("cf", c.cf.summary);
    f.close();
    manifest.add_output("table", a.out);
    manifest.write(a.out + ".manifest.json");
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Counterfactual situation testing: discrimination audits of binary decisions"};
  app.name("cst");
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a built-in scenario dataset");
  generate->add_option("scenario", gen.scenario, "loan or law-school-synthetic")->required();
  generate->add_option("--n", gen.n, "Number of records")->check(CLI::PositiveNumber);
  generate->add_option("--seed", gen.seed, "Random seed");
  generate->add_option("--out-dir", gen.out_dir, "Output directory");
  generate->add_option("--prefix", gen.prefix, "File name prefix (default: scenario name)");
  generate->add_option("--protected", gen.protected_column, "Law school: R or G");

  IngestArgs ing;
  auto* ingest = app.add_subcommand("ingest-law-school",
                                    "Map, clean and fit the law-school admissions survey");
  ingest->add_option("--input", ing.input, "Survey CSV")->required()->check(CLI::ExistingFile);
  ingest->add_option("--schema", ing.schema, "Schema config with race/gender mappings")
      ->check(CLI::ExistingFile);
  ingest->add_option("--protected", ing.protected_column, "R or G");
  ingest->add_option("--out-dir", ing.out_dir, "Output directory");
  ingest->add_option("--prefix", ing.prefix, "File name prefix");

  AuditArgs audit_args;
  auto* audit = app.add_subcommand("audit", "Run one detection method and write its report");
  const auto audit_opts = add_shared(audit, audit_args, false);

  AuditArgs compare_args;
  auto* compare = app.add_subcommand("compare", "Tabulate CST, ST and CF over several k");
  const auto compare_opts = add_shared(compare, compare_args, true);

  std::vector<const char*> argv;
  argv.push_back("cst");
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*generate) cmd_generate(gen, args, out);
    if (*ingest) cmd_ingest(ing, args, out);
    if (*audit) cmd_audit(audit_args, audit_opts, args, out, err);
    if (*compare) cmd_compare(compare_args, compare_opts, args, out, err);
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}

}  // namespace cst::cli
