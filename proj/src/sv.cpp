#include "volq/sv.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "volq/error.hpp"
#include "volq/rng.hpp"

namespace volq::sv {

namespace {

constexpr const char* kModule = "sv-engine";
constexpr double kLogTwoPi = 1.8378770664093454836;

double log_normal_pdf(double x, double var) {
  return -0.5 * (kLogTwoPi + std::log(var) + x * x / var);
}

double initial_variance(const SvParams& p) {
  const double w2 = p.sigma_w * p.sigma_w;
  return p.is_stationary() ? w2 / (1.0 - p.alpha1 * p.alpha1) : w2;
}

// Parameter layout seen by the optimizer.
struct Layout {
  bool lambda = false;
  bool p1 = false;

  std::size_t size() const { return 6 + (lambda ? 1 : 0) + (p1 ? 1 : 0); }

  std::vector<optim::Transform> transforms() const {
    using optim::Transform;
    std::vector<Transform> t = {Transform::Free,        Transform::Free,
                                Transform::LogPositive, Transform::LogPositive,
                                Transform::Free,        Transform::LogPositive};
    if (lambda) t.push_back(Transform::Free);
    if (p1) t.push_back(Transform::LogitUnit);
    return t;
  }

  std::vector<double> pack(const SvParams& p) const {
    std::vector<double> v = {p.alpha0, p.alpha1, p.sigma_w, p.sigma0, p.phi1, p.sigma1};
    if (lambda) v.push_back(p.lambda);
    if (p1) v.push_back(p.p1);
    return v;
  }

  SvParams unpack(std::span<const double> v, const SvParams& fixed) const {
    SvParams p = fixed;
    p.alpha0 = v[0];
    p.alpha1 = v[1];
    p.sigma_w = v[2];
    p.sigma0 = v[3];
    p.phi1 = v[4];
    p.sigma1 = v[5];
    std::size_t k = 6;
    if (lambda) p.lambda = v[k++];
    if (p1) p.p1 = v[k++];
    return p;
  }
};

}  // namespace

void validate(const SvParams& p) {
  const bool ok = std::isfinite(p.alpha0) && std::isfinite(p.alpha1) &&
                  std::isfinite(p.lambda) && std::isfinite(p.phi1) &&
                  std::isfinite(p.sigma_w) && p.sigma_w >= 0.0 &&
                  std::isfinite(p.sigma0) && p.sigma0 > 0.0 &&
                  std::isfinite(p.sigma1) && p.sigma1 > 0.0 && p.p1 > 0.0 &&
                  p.p1 < 1.0;
  if (!ok) {
    throw Error(ErrorCode::InvalidParams, kModule, "sv_filter",
                "need sigma_w >= 0, sigma0 > 0, sigma1 > 0, 0 < p1 < 1 and "
                "finite values");
  }
}

FilterResult filter(const SvParams& p, std::span<const double> g) {
  validate(p);
  FilterResult out;
  out.path.reserve(g.size());

  const double log_p0 = std::log1p(-p.p1);
  const double log_p1 = std::log(p.p1);
  const double var0 = p.sigma0 * p.sigma0;
  const double var1 = p.sigma1 * p.sigma1;
  const double w2 = p.sigma_w * p.sigma_w;

  double v = 0.0;
  double U = initial_variance(p);
  for (double obs : g) {
    FilterState s;
    s.v_pred = v;
    s.U_pred = U;
    s.innovation_vars = {U + var0, U + var1};
    s.innovations[0] = obs - p.lambda - v;
    s.innovations[1] = s.innovations[0] - p.phi1;

    const double lw0 = log_p0 + log_normal_pdf(s.innovations[0], s.innovation_vars[0]);
    const double lw1 = log_p1 + log_normal_pdf(s.innovations[1], s.innovation_vars[1]);
    const double hi = std::max(lw0, lw1);
    out.loglik += hi + std::log(std::exp(lw0 - hi) + std::exp(lw1 - hi));

    s.probs[0] = 1.0 / (1.0 + std::exp(lw1 - lw0));
    s.probs[1] = 1.0 - s.probs[0];

    double correction = 0.0, shrink = 0.0;
    for (int j = 0; j < 2; ++j) {
      s.gains[j] = p.alpha1 * U / s.innovation_vars[j];
      correction += s.probs[j] * s.gains[j] * s.innovations[j];
      shrink += s.probs[j] * s.gains[j] * s.gains[j] * s.innovation_vars[j];
    }
    v = p.alpha0 + p.alpha1 * v + correction;
    U = p.alpha1 * p.alpha1 * U + w2 - shrink;
    if (U < 0.0) {
      U = 0.0;
      ++out.clamped_variances;
    }
    out.path.push_back(s);
  }
  out.v_next = v;
  out.U_next = U;
  return out;
}

SvParams default_init(std::span<const double> g) {
  SvParams p;
  p.alpha0 = 0.0;
  p.alpha1 = 0.96;
  p.sigma_w = 0.3;
  p.lambda = g.empty() ? 0.0
                       : std::accumulate(g.begin(), g.end(), 0.0) /
                             static_cast<double>(g.size());
  p.sigma0 = 1.0;
  p.phi1 = -4.0;
  p.sigma1 = 3.0;
  p.p1 = 0.5;
  return p;
}

SvFit fit(const TimeSeries& series, const FitOptions& options) {
  if (series.size() < kMinFitLength) {
    throw Error(ErrorCode::TooShort, kModule, "fit_sv",
                "series of length " + std::to_string(series.size()) +
                    " is below the minimum of " + std::to_string(kMinFitLength));
  }
  const TimeSeries g_series = log_squared(series, options.log_floor);
  const std::vector<double> g(g_series.values().begin(), g_series.values().end());

  SvParams init = default_init(g);
  if (options.init) {
    init = *options.init;
    if (!options.estimate_lambda) init.lambda = default_init(g).lambda;
  }
  validate(init);
  if (!(init.sigma_w > 0.0)) {
    throw Error(ErrorCode::InvalidParams, kModule, "fit_sv",
                "initial sigma_w must be > 0");
  }

  const Layout layout{options.estimate_lambda, options.estimate_p1};
  optim::OptimizerConfig config = options.optimizer;
  config.transforms = layout.transforms();

  const optim::Objective objective = [&](std::span<const double> theta) {
    const SvParams p = layout.unpack(theta, init);
    if (!(p.p1 > 0.0 && p.p1 < 1.0) || !(p.sigma0 > 0.0) || !(p.sigma1 > 0.0)) {
      return -std::numeric_limits<double>::max();
    }
    const double ll = filter(p, g).loglik;
    return std::isfinite(ll) ? ll : -std::numeric_limits<double>::max();
  };

  const optim::OptimResult result = optim::maximize(objective, layout.pack(init), config);

  SvFit out;
  out.params = layout.unpack(result.argmax, init);
  out.lambda_estimated = layout.lambda;
  out.p1_estimated = layout.p1;
  out.loglik = result.value;
  out.converged = result.converged;
  out.iterations = result.iterations;
  out.gradient_norm = result.gradient_norm;
  out.stop_reason = result.reason;
  out.g = g;
  out.filter = filter(out.params, g);

  const optim::StdErrors se = optim::natural_std_errors(result, config.transforms);
  // Optimizer order: alpha0 alpha1 sigma_w sigma0 phi1 sigma1 [lambda] [p1];
  // report order puts lambda fourth.
  constexpr std::array<std::size_t, 6> slots = {0, 1, 2, 4, 5, 6};
  for (std::size_t i = 0; i < slots.size(); ++i) {
    out.std_errors[slots[i]] = se.values[i];
    out.std_errors_valid[slots[i]] = se.valid[i];
  }
  std::size_t k = 6;
  if (layout.lambda) {
    out.std_errors[3] = se.values[k];
    out.std_errors_valid[3] = se.valid[k];
    ++k;
  } else {
    // lambda is the sample mean of g; report the standard error of that mean.
    const SummaryStats stats = summary_stats(g);
    out.std_errors[3] = std::sqrt(stats.variance / static_cast<double>(g.size()));
    out.std_errors_valid[3] = true;
  }
  if (layout.p1) out.p1_std_error = se.values[k];

  out.predicted_logvol = predict(out.params, out.filter, 0);
  return out;
}

ForecastPath predict(const SvParams& params, const FilterResult& filtered,
                     std::size_t horizon) {
  ForecastPath path;
  path.scale = ForecastPath::Scale::LogVariance;
  path.in_sample = filtered.path.size();
  path.center.reserve(filtered.path.size() + horizon);
  path.half_width.reserve(filtered.path.size() + horizon);
  for (const FilterState& s : filtered.path) {
    path.center.push_back(s.v_pred);
    path.half_width.push_back(2.0 * std::sqrt(s.U_pred));
  }
  double v = filtered.v_next;
  double U = filtered.U_next;
  const double w2 = params.sigma_w * params.sigma_w;
  for (std::size_t h = 0; h < horizon; ++h) {
    path.center.push_back(v);
    path.half_width.push_back(2.0 * std::sqrt(U));
    v = params.alpha0 + params.alpha1 * v;
    U = params.alpha1 * params.alpha1 * U + w2;
  }
  return path;
}

ForecastPath predict(const SvFit& fit, std::size_t horizon, bool allow_unconverged) {
  if (!fit.converged && !allow_unconverged) {
    throw Error(ErrorCode::InvalidFit, kModule, "sv_predict", "fit did not converge");
  }
  if (fit.filter.path.size() != fit.g.size()) {
    throw Error(ErrorCode::InvalidFit, kModule, "sv_predict",
                "fit carries no filter path");
  }
  try {
    validate(fit.params);
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidFit, kModule, "sv_predict", e.what());
  }
  return predict(fit.params, fit.filter, horizon);
}

SvSimulation simulate(const SvParams& p, std::size_t n, std::uint64_t seed) {
  const bool ok = std::isfinite(p.alpha0) && std::isfinite(p.alpha1) &&
                  std::isfinite(p.lambda) && std::isfinite(p.phi1) &&
                  p.sigma_w >= 0.0 && p.sigma0 >= 0.0 && p.sigma1 >= 0.0 &&
                  std::isfinite(p.sigma_w) && std::isfinite(p.sigma0) &&
                  std::isfinite(p.sigma1) && p.p1 >= 0.0 && p.p1 <= 1.0;
  if (!ok) {
    throw Error(ErrorCode::InvalidParams, kModule, "simulate_sv",
                "need non-negative finite scales and p1 in [0, 1]");
  }
  if (n == 0) {
    throw Error(ErrorCode::InvalidArgument, kModule, "simulate_sv", "n must be >= 1");
  }
  Rng rng(seed);
  std::vector<double> y(n), v(n), g(n);
  double state = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double w = rng.normal();
    if (t == 0 && p.is_stationary()) {
      state = p.alpha0 / (1.0 - p.alpha1) +
              p.sigma_w / std::sqrt(1.0 - p.alpha1 * p.alpha1) * w;
    } else {
      state = p.alpha0 + p.alpha1 * (t == 0 ? 0.0 : state) + p.sigma_w * w;
    }
    const bool component1 = rng.bernoulli(p.p1);
    const double z = rng.normal();
    const double gamma = component1 ? p.phi1 + p.sigma1 * z : p.sigma0 * z;
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    v[t] = state;
    g[t] = p.lambda + state + gamma;
    y[t] = sign * std::exp(0.5 * g[t]);
  }
  return {TimeSeries(std::move(y), "sv-sim"), TimeSeries(std::move(v), "sv-sim-v"),
          TimeSeries(std::move(g), "sv-sim-g")};
}

}  // namespace volq::sv
