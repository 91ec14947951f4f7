#include "volq/garch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "volq/error.hpp"

namespace volq {

const char* to_string(ForecastPath::Scale scale) noexcept {
  return scale == ForecastPath::Scale::Variance ? "variance" : "log_variance";
}

}  // namespace volq

namespace volq::garch {

namespace {

constexpr const char* kModule = "garch-engine";
constexpr double kLogTwoPi = 1.8378770664093454836;  // ln(2 pi)

double population_variance(std::span<const double> y) {
  if (y.empty()) return 0.0;
  const double n = static_cast<double>(y.size());
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double acc = 0.0;
  for (double v : y) acc += (v - mean) * (v - mean);
  return acc / n;
}

double mean_square(std::span<const double> y) {
  double acc = 0.0;
  for (double v : y) acc += v * v;
  return y.empty() ? 0.0 : acc / static_cast<double>(y.size());
}

void check_length(const GarchModel& model, const TimeSeries& series,
                  const char* op) {
  const std::size_t need = std::max(model.order_m(), model.order_n()) + 1;
  if (series.size() < need) {
    throw Error(ErrorCode::TooShort, kModule, op,
                "need at least " + std::to_string(need) + " observations");
  }
}

// Recursion shared by the path, the likelihood and the forecast.
void run_recursion(const GarchModel& model, std::span<const double> y,
                   double init, std::vector<double>& sigma2) {
  const std::size_t m = model.order_m();
  const std::size_t q = model.order_n();
  sigma2.resize(y.size());
  for (std::size_t t = 0; t < y.size(); ++t) {
    double s = model.a0;
    for (std::size_t j = 1; j <= m; ++j) {
      const double y2 = t >= j ? y[t - j] * y[t - j] : init;
      s += model.a[j - 1] * y2;
    }
    for (std::size_t j = 1; j <= q; ++j) {
      s += model.b[j - 1] * (t >= j ? sigma2[t - j] : init);
    }
    sigma2[t] = s;
  }
}

GarchModel default_init(std::size_t m, std::size_t n, double scale) {
  GarchModel model;
  const double persistence = n > 0 ? 0.95 : 0.5;
  const double arch_total = n > 0 ? 0.05 : persistence;
  model.a.assign(m, arch_total / static_cast<double>(m));
  if (n > 0) model.b.assign(n, (persistence - arch_total) / static_cast<double>(n));
  model.a0 = scale * (1.0 - persistence);
  return model;
}

GarchModel unpack(std::span<const double> theta, std::size_t m, std::size_t n) {
  GarchModel model;
  model.a0 = theta[0];
  model.a.assign(theta.begin() + 1, theta.begin() + 1 + static_cast<std::ptrdiff_t>(m));
  model.b.assign(theta.begin() + 1 + static_cast<std::ptrdiff_t>(m),
                 theta.begin() + 1 + static_cast<std::ptrdiff_t>(m + n));
  return model;
}

}  // namespace

double GarchModel::persistence() const noexcept {
  return std::accumulate(a.begin(), a.end(), 0.0) +
         std::accumulate(b.begin(), b.end(), 0.0);
}

std::vector<std::string> GarchModel::parameter_names() const {
  std::vector<std::string> names{"a0"};
  for (std::size_t j = 1; j <= a.size(); ++j) names.push_back("a" + std::to_string(j));
  for (std::size_t j = 1; j <= b.size(); ++j) names.push_back("b" + std::to_string(j));
  return names;
}

std::vector<double> GarchModel::parameters() const {
  std::vector<double> out{a0};
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

void validate(const GarchModel& model) {
  if (model.a.empty()) {
    throw Error(ErrorCode::InvalidParams, kModule, "validate",
                "ARCH order m must be at least 1");
  }
  if (!(model.a0 > 0.0) || !std::isfinite(model.a0)) {
    throw Error(ErrorCode::InvalidParams, kModule, "validate", "a0 must be > 0");
  }
  for (double c : model.a) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw Error(ErrorCode::InvalidParams, kModule, "validate",
                  "ARCH coefficients must be >= 0");
    }
  }
  for (double c : model.b) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw Error(ErrorCode::InvalidParams, kModule, "validate",
                  "GARCH coefficients must be >= 0");
    }
  }
}

std::vector<double> variance_path(const GarchModel& model,
                                  const TimeSeries& series,
                                  std::optional<double> init_variance) {
  validate(model);
  check_length(model, series, "garch_variance_path");
  const double init = init_variance.value_or(population_variance(series.values()));
  if (!(init >= 0.0) || !std::isfinite(init)) {
    throw Error(ErrorCode::InvalidArgument, kModule, "garch_variance_path",
                "init_variance must be finite and >= 0");
  }
  std::vector<double> sigma2;
  run_recursion(model, series.values(), init, sigma2);
  return sigma2;
}

double loglik(const GarchModel& model, const TimeSeries& series,
              std::optional<double> init_variance) {
  const std::vector<double> sigma2 = variance_path(model, series, init_variance);
  const double floor =
      std::max(1e-12 * population_variance(series.values()),
               std::numeric_limits<double>::min());
  auto y = series.values();
  double ll = 0.0;
  for (std::size_t t = 0; t < y.size(); ++t) {
    const double s2 = std::max(sigma2[t], floor);
    if (!std::isfinite(s2)) {
      throw Error(ErrorCode::NumericalOverflow, kModule, "garch_loglik",
                  "conditional variance overflowed at t=" + std::to_string(t));
    }
    ll -= 0.5 * (kLogTwoPi + std::log(s2) + y[t] * y[t] / s2);
  }
  return ll;
}

GarchFit fit(const TimeSeries& series, std::size_t m, std::size_t n,
             const FitOptions& options) {
  if (m < 1) {
    throw Error(ErrorCode::InvalidArgument, kModule, "fit_garch",
                "ARCH order m must be at least 1");
  }
  if (series.size() < kMinFitLength) {
    throw Error(ErrorCode::TooShort, kModule, "fit_garch",
                "series of length " + std::to_string(series.size()) +
                    " is below the minimum of " + std::to_string(kMinFitLength));
  }
  auto y = series.values();
  const double variance = population_variance(y);

  GarchFit out;
  out.init_variance = variance;

  if (!(variance > 0.0)) {
    const double ms = mean_square(y);
    out.model = default_init(m, n, ms > 0.0 ? ms : 1.0);
    out.degenerate = true;
    out.converged = false;
    out.variance_path = variance_path(out.model, series, variance);
    out.loglik = loglik(out.model, series, variance);
    const std::size_t d = 1 + m + n;
    out.std_errors.assign(d, 0.0);
    out.std_errors_valid.assign(d, false);
    out.t_stats.assign(d, 0.0);
    out.p_values.assign(d, 1.0);
    return out;
  }

  GarchModel init = options.init.value_or(default_init(m, n, variance));
  if (init.order_m() != m || init.order_n() != n) {
    throw Error(ErrorCode::InvalidArgument, kModule, "fit_garch",
                "initial model orders differ from (m, n)");
  }
  // Zero coefficients have no log image; start them just inside the domain.
  for (double& c : init.a) c = std::max(c, 1e-6);
  for (double& c : init.b) c = std::max(c, 1e-6);
  validate(init);

  const std::size_t d = 1 + m + n;
  optim::OptimizerConfig config = options.optimizer;
  config.transforms.assign(d, optim::Transform::LogPositive);

  const double floor = 1e-12 * variance;
  const optim::Objective objective = [&](std::span<const double> theta) {
    GarchModel model = unpack(theta, m, n);
    std::vector<double> sigma2;
    run_recursion(model, y, variance, sigma2);
    double ll = 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) {
      const double s2 = std::max(sigma2[t], floor);
      ll -= 0.5 * (kLogTwoPi + std::log(s2) + y[t] * y[t] / s2);
    }
    return std::isfinite(ll) ? ll : -std::numeric_limits<double>::max();
  };

  const std::vector<double> theta0 = init.parameters();
  const optim::OptimResult result = optim::maximize(objective, theta0, config);

  out.model = unpack(result.argmax, m, n);
  out.loglik = result.value;
  out.converged = result.converged;
  out.iterations = result.iterations;
  out.gradient_norm = result.gradient_norm;
  out.stop_reason = result.reason;
  out.variance_path = variance_path(out.model, series, variance);

  const optim::StdErrors se = optim::natural_std_errors(result, config.transforms);
  out.std_errors = se.values;
  out.std_errors_valid = se.valid;
  out.t_stats.assign(d, 0.0);
  out.p_values.assign(d, 1.0);
  const std::vector<double> estimates = out.model.parameters();
  for (std::size_t i = 0; i < d; ++i) {
    if (se.valid[i] && se.values[i] > 0.0) {
      out.t_stats[i] = estimates[i] / se.values[i];
      out.p_values[i] = std::erfc(std::abs(out.t_stats[i]) / std::numbers::sqrt2);
    }
  }
  return out;
}

ForecastPath forecast(const GarchFit& fit, const TimeSeries& series,
                      std::size_t horizon, bool allow_unconverged) {
  if (!fit.converged && !allow_unconverged) {
    throw Error(ErrorCode::InvalidFit, kModule, "garch_forecast",
                "fit did not converge");
  }
  try {
    validate(fit.model);
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidFit, kModule, "garch_forecast", e.what());
  }
  check_length(fit.model, series, "garch_forecast");

  auto y = series.values();
  const GarchModel& model = fit.model;
  std::vector<double> sigma2;
  run_recursion(model, y, fit.init_variance, sigma2);
  const std::size_t t_end = y.size();

  // Future squared observations are replaced by their conditional mean.
  std::vector<double> y2(y.size());
  for (std::size_t t = 0; t < y.size(); ++t) y2[t] = y[t] * y[t];
  for (std::size_t h = 0; h < horizon; ++h) {
    const std::size_t t = t_end + h;
    double s = model.a0;
    for (std::size_t j = 1; j <= model.order_m(); ++j) {
      s += model.a[j - 1] * (t >= j ? y2[t - j] : fit.init_variance);
    }
    for (std::size_t j = 1; j <= model.order_n(); ++j) {
      s += model.b[j - 1] * (t >= j ? sigma2[t - j] : fit.init_variance);
    }
    sigma2.push_back(s);
    y2.push_back(s);
  }

  ForecastPath path;
  path.scale = ForecastPath::Scale::Variance;
  path.in_sample = t_end;
  path.center = sigma2;
  path.half_width.reserve(sigma2.size());
  for (double s : sigma2) path.half_width.push_back(2.0 * std::sqrt(s));
  return path;
}

TimeSeries standardized_residuals(const GarchFit& fit, const TimeSeries& series) {
  try {
    validate(fit.model);
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidFit, kModule, "standardized_residuals", e.what());
  }
  check_length(fit.model, series, "standardized_residuals");
  std::vector<double> sigma2;
  run_recursion(fit.model, series.values(), fit.init_variance, sigma2);
  auto y = series.values();
  std::vector<double> r(y.size());
  for (std::size_t t = 0; t < y.size(); ++t) r[t] = y[t] / std::sqrt(sigma2[t]);
  std::string label = series.label().empty() ? "R" : series.label() + "-R";
  if (series.timestamps()) {
    return TimeSeries(std::move(r), *series.timestamps(), std::move(label));
  }
  return TimeSeries(std::move(r), std::move(label));
}

}  // namespace volq::garch
