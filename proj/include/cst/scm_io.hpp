#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "json.hpp"

#include "cst/scm.hpp"

namespace cst::scm {

// SCM spec files are JSON documents:
//
//   {"nodes": [
//     {"name": "A", "kind": "protected", "parents": [],
//      "assignment": {"intercept": 0, "link": "identity", "terms": []},
//      "noise": {"family": "bernoulli", "p": 0.45}},
//     {"name": "X1", "kind": "covariate", "parents": ["A"],
//      "assignment": {"intercept": 0, "link": "identity",
//                     "terms": [{"parent": "A", "coefficient": -1500,
//                                "factor": {"family": "poisson", "lambda": 10}}]},
//      "noise": {"family": "poisson", "lambda": 10, "scale": 10000}}]}
//
// Noise families: normal(mean, sd), poisson(lambda), chi-squared(df),
// bernoulli(p), point-mass. "scale" defaults to 1. An assignment with
// "estimate": true is a skeleton whose coefficients fit_linear_anm fills in.

[[nodiscard]] nlohmann::json to_json(const Scm& scm);
[[nodiscard]] Scm scm_from_json(const nlohmann::json& doc);

[[nodiscard]] Scm read_scm(const std::filesystem::path& path);
[[nodiscard]] Scm parse_scm(const std::string& text, const std::string& source = "<string>");
void write_scm(const std::filesystem::path& path, const Scm& scm);

// Latents are CSV with one column per node noise ("noise:X1") and one per
// random-factor term ("factor:X1:A"), one row per record.

void write_latents(std::ostream& out, const Scm& scm, const Latents& latents);
void write_latents(const std::filesystem::path& path, const Scm& scm, const Latents& latents);
[[nodiscard]] Latents read_latents(const std::filesystem::path& path, const Scm& scm);
[[nodiscard]] Latents read_latents(std::istream& in, const Scm& scm,
                                   const std::string& source = "<stream>");

}  // namespace cst::scm
