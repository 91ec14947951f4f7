#include "volq/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "distributions.hpp"
#include "ols.hpp"
#include "volq/error.hpp"

namespace volq::diagnostics {

namespace {

constexpr const char* kModule = "diagnostics";

double poly(const double* c, int order, double x) {
  double r = c[order - 1];
  for (int j = order - 2; j >= 0; --j) r = r * x + c[j];
  return r;
}

// Shapiro-Wilk coefficients for the upper half of the order statistics,
// a[0] pairing with the extremes (Royston 1995, algorithm AS R94).
std::vector<double> sw_coefficients(std::size_t n) {
  const std::size_t half = n / 2;
  std::vector<double> a(half);
  if (n == 3) {
    a[0] = std::numbers::sqrt2 / 2.0;
    return a;
  }
  static constexpr double c1[] = {0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056};
  static constexpr double c2[] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};

  const double an = static_cast<double>(n);
  std::vector<double> m(half);
  double summ2 = 0.0;
  for (std::size_t i = 0; i < half; ++i) {
    m[i] = detail::normal_quantile((static_cast<double>(i + 1) - 0.375) / (an + 0.25));
    summ2 += m[i] * m[i];
  }
  summ2 *= 2.0;
  const double ssumm2 = std::sqrt(summ2);
  const double rsn = 1.0 / std::sqrt(an);
  const double a1 = poly(c1, 6, rsn) - m[0] / ssumm2;

  std::size_t first_plain;
  double fac;
  if (n > 5) {
    first_plain = 2;
    const double a2 = -m[1] / ssumm2 + poly(c2, 6, rsn);
    fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) /
                    (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
    a[1] = a2;
  } else {
    first_plain = 1;
    fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
  }
  a[0] = a1;
  for (std::size_t i = first_plain; i < half; ++i) a[i] = -m[i] / fac;
  return a;
}

double sw_p_value(double w, std::size_t n) {
  const double an = static_cast<double>(n);
  if (n == 3) {
    constexpr double pi6 = 6.0 / std::numbers::pi;
    const double stqr = std::numbers::pi / 3.0;  // asin(sqrt(3/4))
    return std::clamp(pi6 * (std::asin(std::sqrt(w)) - stqr), 0.0, 1.0);
  }
  double y = std::log1p(-w);
  double m, s;
  if (n <= 11) {
    static constexpr double g[] = {-2.273, 0.459};
    static constexpr double c3[] = {0.544, -0.39978, 0.025054, -6.714e-4};
    static constexpr double c4[] = {1.3822, -0.77857, 0.062767, -0.0020322};
    const double gamma = poly(g, 2, an);
    if (y >= gamma) return 1e-99;
    y = -std::log(gamma - y);
    m = poly(c3, 4, an);
    s = std::exp(poly(c4, 4, an));
  } else {
    static constexpr double c5[] = {-1.5861, -0.31082, -0.083751, 0.0038915};
    static constexpr double c6[] = {-0.4803, -0.082676, 0.0030302};
    const double xx = std::log(an);
    m = poly(c5, 4, xx);
    s = std::exp(poly(c6, 3, xx));
  }
  return detail::normal_sf((y - m) / s);
}

void check_alpha(double alpha, const char* op) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, kModule, op, "alpha must lie in (0, 1)");
  }
}

TestReport finish(TestReport r, double alpha) {
  r.p_value = std::clamp(r.p_value, 0.0, 1.0);
  r.alpha = alpha;
  r.decision = decide(r.p_value, alpha);
  return r;
}

}  // namespace

TestReport jarque_bera(const TimeSeries& series, double alpha) {
  check_alpha(alpha, "jarque_bera");
  const std::size_t n = series.size();
  if (n < 8) {
    throw Error(ErrorCode::TooShort, kModule, "jarque_bera", "need at least 8 observations");
  }
  const SummaryStats s = summary_stats(series.values());
  if (!(s.variance > 0.0)) {
    throw Error(ErrorCode::DegenerateVariance, kModule, "jarque_bera",
                "series has zero variance");
  }
  TestReport r;
  r.test_name = TestName::JB;
  r.statistic = static_cast<double>(n) / 6.0 *
                (s.skewness * s.skewness + 0.25 * s.excess_kurtosis * s.excess_kurtosis);
  r.p_value = std::exp(-0.5 * r.statistic);  // chi-square(2) upper tail
  r.df = 2.0;
  r.sample_size = n;
  return finish(r, alpha);
}

TestReport shapiro_wilk(const TimeSeries& series, double alpha) {
  check_alpha(alpha, "shapiro_wilk");
  const std::size_t n_all = series.size();
  if (n_all < 3) {
    throw Error(ErrorCode::TooShort, kModule, "shapiro_wilk", "need at least 3 observations");
  }
  std::vector<double> x;
  bool subsampled = false;
  if (n_all > kShapiroWilkMaxN) {
    const std::size_t stride = (n_all + kShapiroWilkMaxN - 1) / kShapiroWilkMaxN;
    for (std::size_t i = 0; i < n_all; i += stride) x.push_back(series[i]);
    subsampled = true;
  } else {
    x.assign(series.values().begin(), series.values().end());
  }
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  const double range = x.back() - x.front();
  if (!(range > 0.0)) {
    throw Error(ErrorCode::DegenerateVariance, kModule, "shapiro_wilk",
                "series has zero variance");
  }

  const std::vector<double> a = sw_coefficients(n);
  double mean = 0.0;
  for (double v : x) mean += v / range;
  mean /= static_cast<double>(n);
  double num = 0.0, ssx = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += a[i] * (x[n - 1 - i] - x[i]) / range;
  }
  for (double v : x) ssx += (v / range - mean) * (v / range - mean);
  const double w = std::min(1.0, num * num / ssx);

  TestReport r;
  r.test_name = TestName::SW;
  r.statistic = w;
  r.p_value = sw_p_value(w, n);
  r.sample_size = n;
  r.subsampled = subsampled;
  return finish(r, alpha);
}

TestReport ljung_box(const TimeSeries& series, std::size_t lag, std::size_t fitdf,
                     double alpha) {
  check_alpha(alpha, "ljung_box");
  const std::size_t n = series.size();
  if (lag == 0 || lag >= n) {
    throw Error(ErrorCode::InvalidArgument, kModule, "ljung_box",
                "lag must satisfy 0 < lag < n");
  }
  if (fitdf >= lag) {
    throw Error(ErrorCode::InvalidArgument, kModule, "ljung_box", "fitdf must be < lag");
  }
  auto v = series.values();
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(n);
  double denom = 0.0;
  for (double x : v) denom += (x - mean) * (x - mean);
  if (!(denom > 0.0)) {
    throw Error(ErrorCode::DegenerateVariance, kModule, "ljung_box",
                "series has zero variance");
  }
  const double dn = static_cast<double>(n);
  double q = 0.0;
  for (std::size_t k = 1; k <= lag; ++k) {
    double acc = 0.0;
    for (std::size_t t = k; t < n; ++t) acc += (v[t] - mean) * (v[t - k] - mean);
    const double rho = acc / denom;
    q += rho * rho / (dn - static_cast<double>(k));
  }
  q *= dn * (dn + 2.0);

  TestReport r;
  r.test_name = TestName::LB;
  r.statistic = q;
  r.lag = lag;
  r.df = static_cast<double>(lag - fitdf);
  r.p_value = detail::chi2_sf(q, r.df);
  r.sample_size = n;
  return finish(r, alpha);
}

TestReport lm_arch(const TimeSeries& series, std::size_t lag, double alpha) {
  check_alpha(alpha, "lm_arch");
  const std::size_t n = series.size();
  if (lag == 0 || n <= lag + 1) {
    throw Error(ErrorCode::TooShort, kModule, "lm_arch", "need n > lag + 1 and lag >= 1");
  }
  auto v = series.values();
  const std::size_t rows = n - lag;
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(lag + 1));
  Eigen::VectorXd y(static_cast<Eigen::Index>(rows));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t t = r + lag;
    const auto i = static_cast<Eigen::Index>(r);
    y[i] = v[t] * v[t];
    x(i, 0) = 1.0;
    for (std::size_t k = 1; k <= lag; ++k) {
      x(i, static_cast<Eigen::Index>(k)) = v[t - k] * v[t - k];
    }
  }
  detail::OlsFit fit;
  if (!detail::ols(x, y, fit) || !(fit.tss > 0.0)) {
    throw Error(ErrorCode::SingularRegression, kModule, "lm_arch",
                "squared-series regression is rank deficient");
  }
  TestReport r;
  r.test_name = TestName::LMARCH;
  r.statistic = static_cast<double>(rows) * fit.r_squared;
  r.lag = lag;
  r.df = static_cast<double>(lag);
  r.p_value = detail::chi2_sf(r.statistic, r.df);
  r.sample_size = rows;
  return finish(r, alpha);
}

std::vector<BatteryRow> DiagnosticsBattery::rows() const {
  std::vector<BatteryRow> out;
  out.push_back({"Jarque-Bera Test", "R", "Chi^2", jb});
  out.push_back({"Shapiro-Wilk Test", "R", "W", sw});
  for (const TestReport& r : lb_r) {
    out.push_back({"Ljung-Box Test", "R", "Q(" + std::to_string(r.lag) + ")", r});
  }
  for (const TestReport& r : lb_r2) {
    out.push_back({"Ljung-Box Test", "R^2", "Q(" + std::to_string(r.lag) + ")", r});
  }
  out.push_back({"LM-Arch Test", "R", "TR^2", lm_arch});
  return out;
}

DiagnosticsBattery run_battery(const TimeSeries& residuals, const BatteryOptions& options) {
  DiagnosticsBattery b;
  b.jb = jarque_bera(residuals, options.alpha);
  b.sw = shapiro_wilk(residuals, options.alpha);

  std::vector<double> sq(residuals.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = residuals[i] * residuals[i];
  const TimeSeries squared(std::move(sq), residuals.label() + "^2");
  for (std::size_t lag : options.lb_lags) {
    b.lb_r.push_back(ljung_box(residuals, lag, options.fitdf, options.alpha));
  }
  for (std::size_t lag : options.lb_lags) {
    b.lb_r2.push_back(ljung_box(squared, lag, options.fitdf, options.alpha));
  }
  b.lm_arch = diagnostics::lm_arch(residuals, options.arch_lag, options.alpha);
  return b;
}

}  // namespace volq::diagnostics
