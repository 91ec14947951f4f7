#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace volq::optim {

using Objective = std::function<double(std::span<const double>)>;

/// Maps a natural parameter onto the unconstrained space the optimizer
/// works in.
enum class Transform {
  Free,         // z = theta
  LogPositive,  // z = ln(theta), theta > 0
  LogitUnit,    // z = ln(theta / (1 - theta)), theta in (0, 1)
};

double to_unconstrained(Transform t, double theta);
double from_unconstrained(Transform t, double z);
/// d theta / d z at z.
double jacobian(Transform t, double z);

struct OptimizerConfig {
  int max_iter = 500;
  double grad_tol = 1e-6;
  double step_tol = 1e-10;
  /// Relative finite-difference step; 0 selects cbrt(eps) for gradients and
  /// eps^(1/4) for Hessians, scaled by max(1, |z|).
  double fd_step = 0.0;
  /// One entry per parameter; empty means all Free.
  std::vector<Transform> transforms;
};

enum class StopReason { GradientNorm, StepSize, Stalled, MaxIter };

const char* to_string(StopReason reason) noexcept;

struct TraceEntry {
  double value = 0.0;
  double step = 0.0;  // accepted line-search multiplier
};

struct OptimResult {
  std::vector<double> argmax;        // natural parameter space
  std::vector<double> unconstrained;  // argmax mapped to z
  double value = 0.0;
  double gradient_norm = 0.0;  // infinity norm in z
  Eigen::MatrixXd hessian;     // in z, symmetric
  bool converged = false;
  StopReason reason = StopReason::MaxIter;
  int iterations = 0;
  std::vector<TraceEntry> trace;
};

/// Central differences, one coordinate at a time. `fd_step` is relative
/// (scaled by max(1, |x_i|)); 0 selects cbrt(machine epsilon).
std::vector<double> numerical_gradient(const Objective& f,
                                       std::span<const double> point,
                                       double fd_step = 0.0);

Eigen::MatrixXd numerical_hessian(const Objective& f,
                                  std::span<const double> point,
                                  double fd_step = 0.0);

/// Damped Newton ascent in the unconstrained space with finite-difference
/// derivatives. The Hessian is ridge-regularized (1e-8, escalating x10)
/// until the negated matrix is positive definite; backtracking line search
/// keeps the trace monotone, with a gradient step as fallback.
OptimResult maximize(const Objective& objective, std::span<const double> init,
                     const OptimizerConfig& config = {});

struct StdErrors {
  std::vector<double> values;  // 0 where unavailable
  std::vector<bool> valid;
  bool singular = false;
};

/// sqrt(diag((-H)^-1)). Coordinates whose variance is non-positive or
/// non-finite are marked invalid and carry 0.
StdErrors std_errors_from_hessian(const Eigen::MatrixXd& hessian);

/// Standard errors of the natural parameters: the z-space errors scaled by
/// |d theta / d z| (delta method).
StdErrors natural_std_errors(const OptimResult& result,
                             std::span<const Transform> transforms);

}  // namespace volq::optim
