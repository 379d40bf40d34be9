#include <cmath>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "cst/scm.hpp"

namespace cst::scm {

FitResult fit_linear_anm(const Scm& skeleton, const Dataset& data) {
  require_valid(skeleton);
  FitResult result;
  result.scm = skeleton;
  const auto n = data.size();

  for (std::size_t i = 0; i < skeleton.size(); ++i) {
    const auto& node = skeleton.node(i);
    if (!node.estimate) continue;
    const auto p = node.parents.size() + 1;
    if (n <= p)
      throw Error(fmt::format("node '{}': {} records cannot identify {} coefficients", node.name,
                              n, p));

    Eigen::MatrixXd design(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    Eigen::VectorXd target(static_cast<Eigen::Index>(n));
    const auto own = data.column(node.name);
    for (std::size_t r = 0; r < n; ++r) {
      double g = own[r];
      if (node.assignment.link == Link::exp) {
        if (!(g > 0))
          throw Error(fmt::format("node '{}' row {}: exp-link target {} is not positive",
                                  node.name, r, g));
        g = std::log(g);
      }
      target(static_cast<Eigen::Index>(r)) = g;
      design(static_cast<Eigen::Index>(r), 0) = 1.0;
    }
    for (std::size_t j = 0; j < node.parents.size(); ++j) {
      const auto col = data.column(node.parents[j]);
      for (std::size_t r = 0; r < n; ++r)
        design(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j + 1)) = col[r];
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < static_cast<Eigen::Index>(p))
      throw Error(fmt::format("node '{}': design matrix is rank deficient (rank {} < {})",
                              node.name, qr.rank(), p));
    const Eigen::VectorXd beta = qr.solve(target);
    const Eigen::VectorXd resid = target - design * beta;
    const double dof = static_cast<double>(n - p);
    const double sigma2 = resid.squaredNorm() / dof;
    const Eigen::MatrixXd xtx_inv =
        (design.transpose() * design).ldlt().solve(Eigen::MatrixXd::Identity(p, p));

    NodeFit fit;
    fit.name = node.name;
    fit.regressors.push_back("(intercept)");
    for (const auto& parent : node.parents) fit.regressors.push_back(parent);
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
      fit.coefficients.push_back(beta(j));
      fit.standard_errors.push_back(std::sqrt(sigma2 * xtx_inv(j, j)));
    }
    fit.residual_sd = std::sqrt(sigma2);
    fit.residuals.assign(resid.data(), resid.data() + resid.size());

    auto& out = result.scm.node(i);
    out.assignment.intercept = beta(0);
    out.assignment.terms.clear();
    for (std::size_t j = 0; j < node.parents.size(); ++j)
      out.assignment.terms.push_back(Term{node.parents[j], beta(static_cast<Eigen::Index>(j + 1)), {}});
    out.noise = NoiseSpec{Normal{0.0, fit.residual_sd}, 1.0};
    out.estimate = false;
    result.fits.push_back(std::move(fit));
  }
  return result;
}

}  // namespace cst::scm
