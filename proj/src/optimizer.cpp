#include "volq/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "volq/error.hpp"

namespace volq::optim {

namespace {

constexpr const char* kModule = "optimizer";

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxHalvings = 60;
constexpr double kArmijo = 1e-4;

double default_gradient_step() { return std::cbrt(kEps); }
double default_hessian_step() { return std::pow(kEps, 0.25); }

double scaled_step(double rel, double x) { return rel * std::max(1.0, std::abs(x)); }

double eval_or_throw(const Objective& f, std::span<const double> x,
                     const char* op) {
  const double v = f(x);
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::NonFiniteObjective, kModule, op,
                "objective is not finite near the evaluation point");
  }
  return v;
}

// Objective on the unconstrained space.
class Unconstrained {
 public:
  Unconstrained(const Objective& f, std::vector<Transform> transforms)
      : f_(f), transforms_(std::move(transforms)), theta_(transforms_.size()) {}

  double operator()(std::span<const double> z) const {
    for (std::size_t i = 0; i < z.size(); ++i) {
      theta_[i] = from_unconstrained(transforms_[i], z[i]);
      if (!std::isfinite(theta_[i])) {
        return -std::numeric_limits<double>::infinity();
      }
    }
    return f_(theta_);
  }

  std::vector<double> natural(std::span<const double> z) const {
    std::vector<double> out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
      out[i] = from_unconstrained(transforms_[i], z[i]);
    }
    return out;
  }

 private:
  const Objective& f_;
  std::vector<Transform> transforms_;
  mutable std::vector<double> theta_;
};

// Direction solving (-H + ridge I) d = g; nullopt when no ridge up to the
// cap makes the system positive definite.
bool newton_direction(const Eigen::MatrixXd& hessian, const Eigen::VectorXd& g,
                      Eigen::VectorXd& direction) {
  const Eigen::Index d = g.size();
  Eigen::MatrixXd a = -0.5 * (hessian + hessian.transpose());
  if (!a.allFinite()) return false;
  const double scale = std::max(1.0, a.diagonal().cwiseAbs().maxCoeff());

  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() == Eigen::Success) {
    direction = llt.solve(g);
    if (direction.allFinite()) return true;
  }
  for (double ridge = 1e-8; ridge <= 1e12; ridge *= 10.0) {
    llt.compute(a + ridge * scale * Eigen::MatrixXd::Identity(d, d));
    if (llt.info() == Eigen::Success) {
      direction = llt.solve(g);
      if (direction.allFinite()) return true;
    }
  }
  return false;
}

}  // namespace

double to_unconstrained(Transform t, double theta) {
  switch (t) {
    case Transform::Free: return theta;
    case Transform::LogPositive: return std::log(theta);
    case Transform::LogitUnit: return std::log(theta / (1.0 - theta));
  }
  return theta;
}

double from_unconstrained(Transform t, double z) {
  switch (t) {
    case Transform::Free: return z;
    case Transform::LogPositive: return std::exp(z);
    case Transform::LogitUnit:
      return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z))
                      : std::exp(z) / (1.0 + std::exp(z));
  }
  return z;
}

double jacobian(Transform t, double z) {
  switch (t) {
    case Transform::Free: return 1.0;
    case Transform::LogPositive: return std::exp(z);
    case Transform::LogitUnit: {
      const double p = from_unconstrained(t, z);
      return p * (1.0 - p);
    }
  }
  return 1.0;
}

const char* to_string(StopReason reason) noexcept {
  switch (reason) {
    case StopReason::GradientNorm: return "gradient_norm";
    case StopReason::StepSize: return "step_size";
    case StopReason::Stalled: return "stalled";
    case StopReason::MaxIter: return "max_iter";
  }
  return "unknown";
}

std::vector<double> numerical_gradient(const Objective& f,
                                       std::span<const double> point,
                                       double fd_step) {
  const double rel = fd_step > 0.0 ? fd_step : default_gradient_step();
  std::vector<double> x(point.begin(), point.end());
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    const double h = scaled_step(rel, xi);
    x[i] = xi + h;
    const double fp = eval_or_throw(f, x, "numerical_gradient");
    const double hp = x[i] - xi;
    x[i] = xi - h;
    const double fm = eval_or_throw(f, x, "numerical_gradient");
    const double hm = xi - x[i];
    x[i] = xi;
    grad[i] = (fp - fm) / (hp + hm);
  }
  return grad;
}

Eigen::MatrixXd numerical_hessian(const Objective& f,
                                  std::span<const double> point,
                                  double fd_step) {
  const double rel = fd_step > 0.0 ? fd_step : default_hessian_step();
  const std::size_t d = point.size();
  std::vector<double> x(point.begin(), point.end());
  std::vector<double> h(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double xi = x[i];
    x[i] = xi + scaled_step(rel, xi);
    h[i] = x[i] - xi;
    x[i] = xi;
  }

  Eigen::MatrixXd hess(d, d);
  const double f0 = eval_or_throw(f, x, "numerical_hessian");
  for (std::size_t i = 0; i < d; ++i) {
    const double xi = x[i];
    x[i] = xi + h[i];
    const double fp = eval_or_throw(f, x, "numerical_hessian");
    x[i] = xi - h[i];
    const double fm = eval_or_throw(f, x, "numerical_hessian");
    x[i] = xi;
    hess(i, i) = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      const double xi = x[i], xj = x[j];
      x[i] = xi + h[i]; x[j] = xj + h[j];
      const double fpp = eval_or_throw(f, x, "numerical_hessian");
      x[j] = xj - h[j];
      const double fpm = eval_or_throw(f, x, "numerical_hessian");
      x[i] = xi - h[i];
      const double fmm = eval_or_throw(f, x, "numerical_hessian");
      x[j] = xj + h[j];
      const double fmp = eval_or_throw(f, x, "numerical_hessian");
      x[i] = xi; x[j] = xj;
      const double v = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
      hess(i, j) = v;
      hess(j, i) = v;
    }
  }
  return hess;
}

OptimResult maximize(const Objective& objective, std::span<const double> init,
                     const OptimizerConfig& config) {
  if (config.max_iter < 1 || !(config.grad_tol > 0.0) ||
      !(config.step_tol > 0.0) || config.fd_step < 0.0) {
    throw Error(ErrorCode::InvalidArgument, kModule, "maximize",
                "max_iter must be >= 1 and tolerances positive");
  }
  const std::size_t d = init.size();
  if (d == 0) {
    throw Error(ErrorCode::InvalidArgument, kModule, "maximize",
                "empty parameter vector");
  }
  std::vector<Transform> transforms = config.transforms;
  if (transforms.empty()) transforms.assign(d, Transform::Free);
  if (transforms.size() != d) {
    throw Error(ErrorCode::LengthMismatch, kModule, "maximize",
                "transform list length differs from parameter count");
  }

  const Unconstrained f(objective, transforms);
  const Objective fz = [&f](std::span<const double> z) { return f(z); };

  Eigen::VectorXd z(d);
  for (std::size_t i = 0; i < d; ++i) {
    z[i] = to_unconstrained(transforms[i], init[i]);
    if (!std::isfinite(z[i])) {
      throw Error(ErrorCode::InvalidArgument, kModule, "maximize",
                  "initial value " + std::to_string(i) +
                      " outside its transform's domain");
    }
  }
  auto as_span = [](const Eigen::VectorXd& v) {
    return std::span<const double>(v.data(), static_cast<std::size_t>(v.size()));
  };

  double value = f(as_span(z));
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::NonFiniteObjective, kModule, "maximize",
                "objective is not finite at the initial point");
  }

  OptimResult result;
  result.trace.push_back({value, 0.0});
  // fd_step overrides the gradient step only; second differences keep
  // their own eps^(1/4) scaling.
  const double grad_rel = config.fd_step;
  const double hess_rel = 0.0;

  Eigen::VectorXd g(d);
  bool done = false;
  int iter = 0;
  for (; iter < config.max_iter && !done; ++iter) {
    const auto grad = numerical_gradient(fz, as_span(z), grad_rel);
    g = Eigen::Map<const Eigen::VectorXd>(grad.data(), static_cast<Eigen::Index>(d));
    if (g.cwiseAbs().maxCoeff() <= config.grad_tol) {
      result.reason = StopReason::GradientNorm;
      result.converged = true;
      break;
    }

    const Eigen::MatrixXd hess = numerical_hessian(fz, as_span(z), hess_rel);
    Eigen::VectorXd direction;
    const bool have_newton = newton_direction(hess, g, direction);

    // Try the Newton direction first, then plain gradient ascent.
    bool accepted = false;
    double predicted_gain = have_newton ? 0.5 * g.dot(direction)
                                        : std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      Eigen::VectorXd dir;
      if (attempt == 0) {
        if (!have_newton) continue;
        dir = direction;
      } else {
        dir = g / std::max(1.0, g.norm());
      }
      const double slope = g.dot(dir);
      if (!(slope > 0.0)) continue;
      double t = 1.0;
      for (int k = 0; k < kMaxHalvings; ++k, t *= 0.5) {
        const Eigen::VectorXd trial = z + t * dir;
        const double v = f(as_span(trial));
        if (std::isfinite(v) && v > value && v >= value + kArmijo * t * slope) {
          const Eigen::VectorXd step = trial - z;
          z = trial;
          value = v;
          accepted = true;
          result.trace.push_back({value, t});
          double rel_step = 0.0;
          for (std::size_t i = 0; i < d; ++i) {
            rel_step = std::max(rel_step, std::abs(step[i]) / (1.0 + std::abs(z[i])));
          }
          if (rel_step <= config.step_tol) {
            result.reason = StopReason::StepSize;
            result.converged = true;
            done = true;
          }
          break;
        }
      }
    }
    if (!accepted) {
      // No ascent possible: the point is optimal up to floating-point noise
      // when the Newton model predicts a gain below the objective's precision.
      result.reason = StopReason::Stalled;
      result.converged =
          predicted_gain <= 1e-10 * std::max(1.0, std::abs(value));
      done = true;
    }
  }
  if (!done && !result.converged) result.reason = StopReason::MaxIter;

  result.iterations = iter;
  result.value = value;
  result.unconstrained.assign(z.data(), z.data() + d);
  result.argmax = f.natural(result.unconstrained);
  const auto final_grad = numerical_gradient(fz, result.unconstrained, grad_rel);
  result.gradient_norm = 0.0;
  for (double gi : final_grad) {
    result.gradient_norm = std::max(result.gradient_norm, std::abs(gi));
  }
  result.hessian = numerical_hessian(fz, result.unconstrained, hess_rel);
  return result;
}

StdErrors std_errors_from_hessian(const Eigen::MatrixXd& hessian) {
  const Eigen::Index d = hessian.rows();
  StdErrors out;
  out.values.assign(static_cast<std::size_t>(d), 0.0);
  out.valid.assign(static_cast<std::size_t>(d), false);
  const Eigen::MatrixXd a = -0.5 * (hessian + hessian.transpose());
  if (!a.allFinite()) {
    out.singular = true;
    return out;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) {
    out.singular = true;
    return out;
  }
  const Eigen::MatrixXd cov = lu.inverse();
  for (Eigen::Index i = 0; i < d; ++i) {
    const double v = cov(i, i);
    if (std::isfinite(v) && v > 0.0) {
      out.values[static_cast<std::size_t>(i)] = std::sqrt(v);
      out.valid[static_cast<std::size_t>(i)] = true;
    }
  }
  return out;
}

StdErrors natural_std_errors(const OptimResult& result,
                             std::span<const Transform> transforms) {
  StdErrors se = std_errors_from_hessian(result.hessian);
  for (std::size_t i = 0; i < se.values.size(); ++i) {
    const Transform t = i < transforms.size() ? transforms[i] : Transform::Free;
    se.values[i] *= std::abs(jacobian(t, result.unconstrained[i]));
  }
  return se;
}

}  // namespace volq::optim
