#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "cst/classifier.hpp"
#include "cst/dataset.hpp"
#include "cst/schema_io.hpp"
#include "cst/scm.hpp"

namespace cst::scenarios {

// Loan approval. A = 1 marks women; both the income X1 and the savings X2
// carry a random per-applicant penalty for women:
//   A  ~ Ber(0.45)
//   X1 = -1500 * Poi(10) * A + U1,              U1 ~ 10000 * Poi(10)
//   X2 = -300 * chi2(4) * A + 0.3 * X1 + U2,    U2 ~ 2500 * N(0, 1)
//   Y  = 1{X1 + 5 * X2 > 225000}

inline constexpr double loan_threshold = 225000.0;

[[nodiscard]] scm::Scm loan_scm();
[[nodiscard]] int loan_decision(double x1, double x2);
[[nodiscard]] Classifier loan_classifier();
/// X1, X2 relevant; A protected with A = 1 the protected group.
[[nodiscard]] SchemaConfig loan_schema();

struct LoanData {
  Dataset data;  // A, X1, X2, Y
  scm::Scm scm;
  scm::Latents latents;
};

/// Throws on n == 0.
[[nodiscard]] LoanData generate_loan(std::size_t n, std::uint64_t seed);

// Law-school admission. R = 1 non-white, G = 1 female, both roots:
//   UGPA = b_U + beta1 * R + lambda1 * G + U_U
//   LSAT = exp(b_L + beta2 * R + lambda2 * G + U_L)
//   Y    = 1{0.6 * UGPA + 0.4 * LSAT > psi}

/// Cutoff for a 3.93 UGPA and a 46.1 LSAT, kept unrounded.
inline constexpr double law_psi = 0.6 * 3.93 + 0.4 * 46.1;

[[nodiscard]] int law_decision(double ugpa, double lsat);
[[nodiscard]] Classifier law_classifier();
/// Structure only: the UGPA and LSAT coefficients are to be estimated.
[[nodiscard]] scm::Scm law_skeleton();
/// Schema auditing `protected_column` (R or G) with value 1, plus the raw
/// race/gender mappings used at ingestion.
[[nodiscard]] SchemaConfig law_schema(const std::string& protected_column = "R");

struct LawSchool {
  Dataset data;  // UGPA, LSAT, R, G, Y
  scm::FitResult fit;
  std::size_t dropped_lsat = 0;  // LSAT <= 0
  std::size_t dropped_ugpa = 0;  // UGPA outside [0, 4]
};

/// Maps raw race/gender columns through `config`, drops records unusable by
/// the model, fits the skeleton by OLS and applies the admission rule.
/// Column lookup ignores case; "sex" is accepted for "gender".
[[nodiscard]] LawSchool build_law_school(const Dataset& raw, const SchemaConfig& config);

/// Coefficients of the synthetic law-school generator.
struct LawTruth {
  double p_nonwhite = 0.161;
  double p_female = 0.438;
  double b_u = 3.2;
  double beta1 = -0.2;
  double lambda1 = -0.02;
  double sd_u = 0.3;
  double b_l = 3.61;
  double beta2 = -0.065;
  double lambda2 = -0.018;
  double sd_l = 0.13;
};

[[nodiscard]] scm::Scm law_truth_scm(const LawTruth& truth = {});

/// Raw survey-shaped sample (UGPA, LSAT, race, gender with text labels) drawn
/// from law_truth_scm; the counterpart of the public admissions file.
[[nodiscard]] Dataset generate_law_school_synthetic(std::size_t n, std::uint64_t seed,
                                                    const LawTruth& truth = {});

}  // namespace cst::scenarios
