#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "volq/forecast.hpp"
#include "volq/optimizer.hpp"
#include "volq/timeseries.hpp"

namespace volq::garch {

/// sigma2_t = a0 + sum_j a_j y_{t-j}^2 + sum_j b_j sigma2_{t-j}.
struct GarchModel {
  double a0 = 0.0;
  std::vector<double> a;  // ARCH coefficients, length m >= 1
  std::vector<double> b;  // GARCH coefficients, length n >= 0

  std::size_t order_m() const noexcept { return a.size(); }
  std::size_t order_n() const noexcept { return b.size(); }
  double persistence() const noexcept;
  /// sum(a) + sum(b) < 1; reported, never enforced.
  bool is_stationary() const noexcept { return persistence() < 1.0; }
  /// Parameter names in report order: a0, a1..am, b1..bn.
  std::vector<std::string> parameter_names() const;
  std::vector<double> parameters() const;
};

/// Throws InvalidParams unless a0 > 0, all coefficients >= 0, m >= 1.
void validate(const GarchModel& model);

/// One variance per observation. Pre-sample y^2 and sigma^2 are set to
/// `init_variance` (default: population variance of the series), so the
/// first entry is a0 + (sum a + sum b) * init_variance.
std::vector<double> variance_path(const GarchModel& model,
                                  const TimeSeries& series,
                                  std::optional<double> init_variance = {});

/// Gaussian log-likelihood sum_t ln phi(y_t; 0, sigma2_t) over every
/// observation.
double loglik(const GarchModel& model, const TimeSeries& series,
              std::optional<double> init_variance = {});

struct FitOptions {
  optim::OptimizerConfig optimizer;
  std::optional<GarchModel> init;  // default: persistence 0.95 split a/b
};

struct GarchFit {
  GarchModel model;
  std::vector<double> std_errors;  // 0 where the Hessian gives none
  std::vector<bool> std_errors_valid;
  std::vector<double> t_stats;   // 0 where the std error is unavailable
  std::vector<double> p_values;  // two-sided Normal; 1 where unavailable
  std::vector<double> variance_path;
  double init_variance = 0.0;
  double loglik = 0.0;
  bool converged = false;
  bool degenerate = false;  // zero-variance input; nothing was fitted
  int iterations = 0;
  double gradient_norm = 0.0;
  optim::StopReason stop_reason = optim::StopReason::MaxIter;
};

inline constexpr std::size_t kMinFitLength = 50;

/// Gaussian maximum likelihood with every parameter log-transformed.
/// Non-convergence is reported through `converged`, not thrown.
GarchFit fit(const TimeSeries& series, std::size_t m, std::size_t n,
             const FitOptions& options = {});

/// In-sample one-step predictions sigma2_1..sigma2_T followed by `horizon`
/// out-of-sample steps (unknown future y^2 replaced by its forecast).
/// half_width = 2 sigma.
ForecastPath forecast(const GarchFit& fit, const TimeSeries& series,
                      std::size_t horizon = 1, bool allow_unconverged = false);

/// R_t = y_t / sigma_t.
TimeSeries standardized_residuals(const GarchFit& fit, const TimeSeries& series);

}  // namespace volq::garch
