#include "ols.hpp"

#include <cmath>

#include <Eigen/QR>

namespace volq::detail {

bool ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, OlsFit& out) {
  const Eigen::Index n = x.rows();
  const Eigen::Index k = x.cols();
  if (n <= k) return false;

  Eigen::VectorXd norms = x.colwise().norm();
  for (Eigen::Index j = 0; j < k; ++j) {
    if (!(norms[j] > 0.0) || !std::isfinite(norms[j])) return false;
  }
  const Eigen::MatrixXd xs = x * norms.cwiseInverse().asDiagonal();

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> rank_check(xs);
  rank_check.setThreshold(1e-10);
  if (rank_check.rank() < k) return false;

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(xs);
  const Eigen::MatrixXd r =
      qr.matrixQR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
  const Eigen::VectorXd qty = (qr.householderQ().transpose() * y).head(k);
  const Eigen::VectorXd beta_s =
      r.triangularView<Eigen::Upper>().solve(qty);

  const Eigen::VectorXd resid = y - xs * beta_s;
  out.rss = resid.squaredNorm();
  out.tss = (y.array() - y.mean()).matrix().squaredNorm();
  out.r_squared = out.tss > 0.0 ? 1.0 - out.rss / out.tss : 0.0;
  out.dof = n - k;
  const double sigma2 = out.rss / static_cast<double>(out.dof);

  // diag((X'X)^-1) = squared row norms of R^-1.
  const Eigen::MatrixXd r_inv = r.triangularView<Eigen::Upper>().solve(
      Eigen::MatrixXd::Identity(k, k));
  out.coef = beta_s.cwiseQuotient(norms);
  out.std_err.resize(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    out.std_err[j] = std::sqrt(sigma2 * r_inv.row(j).squaredNorm()) / norms[j];
  }
  return true;
}

}  // namespace volq::detail
