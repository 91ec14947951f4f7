#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "volq/forecast.hpp"
#include "volq/optimizer.hpp"
#include "volq/timeseries.hpp"

namespace volq::sv {

/// Stochastic volatility with two-component Gaussian-mixture noise on the
/// log-squared scale:
///   v_t = alpha0 + alpha1 v_{t-1} + w_t,       w_t ~ N(0, sigma_w^2)
///   g_t = lambda + v_t + gamma_t,
///   gamma_t ~ N(0, sigma0^2) w.p. 1 - p1,  N(phi1, sigma1^2) w.p. p1.
struct SvParams {
  double alpha0 = 0.0;
  double alpha1 = 0.96;
  double sigma_w = 0.3;
  double lambda = 0.0;
  double sigma0 = 1.0;
  double phi1 = -4.0;
  double sigma1 = 3.0;
  double p1 = 0.5;

  bool is_stationary() const noexcept { return alpha1 > -1.0 && alpha1 < 1.0; }
};

/// Report order of the seven fitted quantities.
inline constexpr std::array<const char*, 7> kParameterNames = {
    "alpha0", "alpha1", "sigma_w", "lambda", "sigma0", "phi1", "sigma1"};

/// Filter domain: sigma_w >= 0, sigma0 > 0, sigma1 > 0, p1 in (0, 1).
void validate(const SvParams& params);

/// One step of the switching filter. Index 0/1 of each pair is the mixture
/// component.
struct FilterState {
  double v_pred = 0.0;  // v_t^{t-1}
  double U_pred = 0.0;  // error variance of v_pred
  std::array<double, 2> innovations{};
  std::array<double, 2> innovation_vars{};
  std::array<double, 2> gains{};
  std::array<double, 2> probs{};  // posterior component probabilities
};

struct FilterResult {
  std::vector<FilterState> path;
  double loglik = 0.0;
  double v_next = 0.0;  // v_{T+1}^T
  double U_next = 0.0;
  int clamped_variances = 0;  // negative U reset to 0
};

/// Switching Kalman filter on log-squared observations `g`, starting from
/// v_1^0 = 0 and U_1^0 = sigma_w^2 / (1 - alpha1^2) (sigma_w^2 when
/// |alpha1| >= 1). loglik = sum_t ln(sum_j p_j h_j(t|t-1)).
FilterResult filter(const SvParams& params, std::span<const double> g);
inline FilterResult filter(const SvParams& params, const TimeSeries& g) {
  return filter(params, g.values());
}

/// The starting point used when none is supplied: alpha0 = 0,
/// alpha1 = 0.96, sigma_w = 0.3, lambda = mean(g), sigma0 = 1,
/// phi1 = -4, sigma1 = 3, p1 = 0.5.
SvParams default_init(std::span<const double> g);

struct FitOptions {
  optim::OptimizerConfig optimizer;
  std::optional<SvParams> init;
  bool estimate_p1 = false;
  bool estimate_lambda = false;
  double log_floor = kDefaultLogFloor;
};

struct SvFit {
  SvParams params;
  std::array<double, 7> std_errors{};  // kParameterNames order
  std::array<bool, 7> std_errors_valid{};
  double p1_std_error = 0.0;  // only when p1 is estimated
  bool lambda_estimated = false;
  bool p1_estimated = false;
  double loglik = 0.0;
  FilterResult filter;
  ForecastPath predicted_logvol;  // in-sample one-step predictions
  std::vector<double> g;          // log-squared observations that were fit
  bool converged = false;
  int iterations = 0;
  double gradient_norm = 0.0;
  optim::StopReason stop_reason = optim::StopReason::MaxIter;
};

inline constexpr std::size_t kMinFitLength = 100;

/// Maximizes the filter log-likelihood over (alpha0, alpha1, sigma_w,
/// sigma0, phi1, sigma1). lambda stays at mean(g) and p1 at its initial
/// value unless the options ask for them to be estimated. `series` holds
/// raw observations; the log-squared transform is applied here.
SvFit fit(const TimeSeries& series, const FitOptions& options = {});

/// One-step predicted log-volatility v_t^{t-1} with +-2 sqrt(U) bands, then
/// `horizon` steps starting at v_{T+1}^T and extrapolated by
/// v <- alpha0 + alpha1 v, U <- alpha1^2 U + sigma_w^2.
ForecastPath predict(const SvFit& fit, std::size_t horizon = 1,
                     bool allow_unconverged = false);
ForecastPath predict(const SvParams& params, const FilterResult& filtered,
                     std::size_t horizon = 1);

struct SvSimulation {
  TimeSeries y;       // observations with ln y^2 = g
  TimeSeries v_true;  // latent log-volatility
  TimeSeries g;       // log-squared observations
};

/// Draws the model forward. v_1 comes from the stationary law when
/// |alpha1| < 1. Per step the generator is consumed in the fixed order
/// (state noise, component flag, component noise, sign).
SvSimulation simulate(const SvParams& params, std::size_t n, std::uint64_t seed);

}  // namespace volq::sv
