#pragma once

#include <Eigen/Core>

namespace volq::detail {

struct OlsFit {
  Eigen::VectorXd coef;
  Eigen::VectorXd std_err;
  double rss = 0.0;
  double tss = 0.0;  // centered total sum of squares
  double r_squared = 0.0;
  Eigen::Index dof = 0;
};

/// Least squares via Householder QR on column-normalized regressors.
/// Returns false when the design is rank deficient or has no residual
/// degrees of freedom.
bool ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, OlsFit& out);

}  // namespace volq::detail
