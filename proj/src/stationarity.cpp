#include "volq/stationarity.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "ols.hpp"
#include "volq/error.hpp"

namespace volq::stationarity {

namespace {

constexpr const char* kModule = "stationarity-tests";

// Dickey-Fuller t-ratio quantiles (Fuller 1976, Table 8.5.2). Rows are
// sample sizes, columns the lower-tail probabilities in kAdfProbs.
constexpr std::array<double, 8> kAdfProbs = {0.01, 0.025, 0.05, 0.10,
                                             0.90, 0.95,  0.975, 0.99};
constexpr std::array<double, 6> kAdfSizes = {25, 50, 100, 250, 500, 0 /*inf*/};

using AdfTable = std::array<std::array<double, 8>, 6>;

constexpr AdfTable kAdfNone = {{
    {-2.66, -2.26, -1.95, -1.60, 0.92, 1.33, 1.70, 2.16},
    {-2.62, -2.25, -1.95, -1.61, 0.91, 1.31, 1.66, 2.08},
    {-2.60, -2.24, -1.95, -1.61, 0.90, 1.29, 1.64, 2.03},
    {-2.58, -2.23, -1.95, -1.62, 0.89, 1.29, 1.63, 2.01},
    {-2.58, -2.23, -1.95, -1.62, 0.89, 1.28, 1.62, 2.00},
    {-2.58, -2.23, -1.95, -1.62, 0.89, 1.28, 1.62, 2.00},
}};

constexpr AdfTable kAdfDrift = {{
    {-3.75, -3.33, -3.00, -2.63, -0.37, 0.00, 0.34, 0.72},
    {-3.58, -3.22, -2.93, -2.60, -0.40, -0.03, 0.29, 0.66},
    {-3.51, -3.17, -2.89, -2.58, -0.42, -0.05, 0.26, 0.63},
    {-3.46, -3.14, -2.88, -2.57, -0.42, -0.06, 0.24, 0.62},
    {-3.44, -3.13, -2.87, -2.57, -0.43, -0.07, 0.24, 0.61},
    {-3.43, -3.12, -2.86, -2.57, -0.44, -0.07, 0.23, 0.60},
}};

constexpr AdfTable kAdfTrend = {{
    {-4.38, -3.95, -3.60, -3.24, -1.14, -0.80, -0.50, -0.15},
    {-4.15, -3.80, -3.50, -3.18, -1.19, -0.87, -0.58, -0.24},
    {-4.04, -3.73, -3.45, -3.15, -1.22, -0.90, -0.62, -0.28},
    {-3.99, -3.69, -3.43, -3.13, -1.23, -0.92, -0.64, -0.31},
    {-3.98, -3.68, -3.42, -3.13, -1.24, -0.93, -0.65, -0.32},
    {-3.96, -3.66, -3.41, -3.12, -1.25, -0.94, -0.66, -0.33},
}};

// Kwiatkowski et al. (1992) asymptotic upper-tail quantiles, level case.
constexpr std::array<double, 4> kKpssCrit = {0.347, 0.463, 0.574, 0.739};
constexpr std::array<double, 4> kKpssProbs = {0.10, 0.05, 0.025, 0.01};

double lerp(double x0, double y0, double x1, double y1, double x) {
  if (x1 == x0) return y0;
  return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

const AdfTable& table_for(AdfTerms terms) {
  switch (terms) {
    case AdfTerms::None: return kAdfNone;
    case AdfTerms::Drift: return kAdfDrift;
    case AdfTerms::Trend: return kAdfTrend;
  }
  return kAdfTrend;
}

void check_alpha(double alpha, const char* op) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, kModule, op,
                "alpha must lie in (0, 1)");
  }
}

}  // namespace

const char* to_string(AdfTerms terms) noexcept {
  switch (terms) {
    case AdfTerms::None: return "none";
    case AdfTerms::Drift: return "drift";
    case AdfTerms::Trend: return "trend";
  }
  return "trend";
}

std::size_t default_adf_lag(std::size_t n) {
  return static_cast<std::size_t>(
      std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
}

std::size_t default_kpss_lag(std::size_t n) {
  return static_cast<std::size_t>(
      std::floor(4.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
}

PInterp adf_p_value(double statistic, std::size_t n, AdfTerms terms) {
  const AdfTable& table = table_for(terms);
  // Critical values at this n, linear in 1/n (the last row is n = infinity).
  const double inv_n = 1.0 / static_cast<double>(std::max<std::size_t>(n, 1));
  std::array<double, 8> crit{};
  for (std::size_t j = 0; j < kAdfProbs.size(); ++j) {
    if (inv_n >= 1.0 / kAdfSizes[0]) {
      crit[j] = table[0][j];
      continue;
    }
    for (std::size_t r = 0; r + 1 < kAdfSizes.size(); ++r) {
      const double x0 = 1.0 / kAdfSizes[r];
      const double x1 = r + 1 == kAdfSizes.size() - 1 ? 0.0 : 1.0 / kAdfSizes[r + 1];
      if (inv_n <= x0 && inv_n >= x1) {
        crit[j] = lerp(x0, table[r][j], x1, table[r + 1][j], inv_n);
        break;
      }
    }
  }
  if (statistic < crit.front()) return {kAdfProbs.front(), PClamp::AtLower};
  if (statistic > crit.back()) return {kAdfProbs.back(), PClamp::AtUpper};
  for (std::size_t j = 0; j + 1 < crit.size(); ++j) {
    if (statistic <= crit[j + 1]) {
      return {lerp(crit[j], kAdfProbs[j], crit[j + 1], kAdfProbs[j + 1], statistic),
              PClamp::None};
    }
  }
  return {kAdfProbs.back(), PClamp::None};
}

PInterp kpss_p_value(double statistic) {
  if (statistic < kKpssCrit.front()) return {kKpssProbs.front(), PClamp::AtUpper};
  if (statistic > kKpssCrit.back()) return {kKpssProbs.back(), PClamp::AtLower};
  for (std::size_t j = 0; j + 1 < kKpssCrit.size(); ++j) {
    if (statistic <= kKpssCrit[j + 1]) {
      return {lerp(kKpssCrit[j], kKpssProbs[j], kKpssCrit[j + 1], kKpssProbs[j + 1],
                   statistic),
              PClamp::None};
    }
  }
  return {kKpssProbs.back(), PClamp::None};
}

TestReport adf_test(const TimeSeries& series, const AdfOptions& options) {
  check_alpha(options.alpha, "adf_test");
  const std::size_t n = series.size();
  const std::size_t lag = options.lag.value_or(default_adf_lag(n));
  if (n < 3 * (lag + 2)) {
    throw Error(ErrorCode::TooShort, kModule, "adf_test",
                "series of length " + std::to_string(n) + " too short for lag " +
                    std::to_string(lag));
  }
  auto y = series.values();
  std::vector<double> dy(n - 1);
  for (std::size_t t = 1; t < n; ++t) dy[t - 1] = y[t] - y[t - 1];

  // Rows t = lag+1 .. n-1 (0-based level index), regressand dy[t-1].
  const std::size_t rows = n - 1 - lag;
  const Eigen::Index det = options.terms == AdfTerms::Trend   ? 2
                           : options.terms == AdfTerms::Drift ? 1
                                                              : 0;
  const Eigen::Index cols = det + 1 + static_cast<Eigen::Index>(lag);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows), cols);
  Eigen::VectorXd resp(static_cast<Eigen::Index>(rows));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t t = r + lag + 1;
    const auto i = static_cast<Eigen::Index>(r);
    Eigen::Index c = 0;
    if (det >= 1) x(i, c++) = 1.0;
    if (det >= 2) x(i, c++) = static_cast<double>(t + 1);
    x(i, c++) = y[t - 1];
    for (std::size_t k = 1; k <= lag; ++k) x(i, c++) = dy[t - 1 - k];
    resp[i] = dy[t - 1];
  }

  detail::OlsFit fit;
  if (!detail::ols(x, resp, fit)) {
    throw Error(ErrorCode::SingularRegression, kModule, "adf_test",
                "augmented regression design is rank deficient");
  }

  TestReport report;
  report.test_name = TestName::ADF;
  report.statistic = fit.coef[det] / fit.std_err[det];
  const PInterp p = adf_p_value(report.statistic, n, options.terms);
  report.p_value = p.p;
  report.p_clamped = p.clamp;
  report.lag = lag;
  report.sample_size = rows;
  report.alpha = options.alpha;
  report.decision = decide(report.p_value, options.alpha);
  return report;
}

TestReport kpss_test(const TimeSeries& series, const KpssOptions& options) {
  check_alpha(options.alpha, "kpss_test");
  const std::size_t n = series.size();
  const std::size_t lag = options.lag.value_or(default_kpss_lag(n));
  if (n < 3 * (lag + 2)) {
    throw Error(ErrorCode::TooShort, kModule, "kpss_test",
                "series of length " + std::to_string(n) + " too short for lag " +
                    std::to_string(lag));
  }
  auto y = series.values();
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> e(n);
  for (std::size_t t = 0; t < n; ++t) e[t] = y[t] - mean;

  double gamma0 = 0.0;
  for (double v : e) gamma0 += v * v;
  if (!(gamma0 > 0.0)) {
    throw Error(ErrorCode::SingularRegression, kModule, "kpss_test",
                "level regression leaves zero residual variance");
  }
  const double dn = static_cast<double>(n);
  double s2 = gamma0 / dn;
  for (std::size_t s = 1; s <= lag; ++s) {
    double acc = 0.0;
    for (std::size_t t = s; t < n; ++t) acc += e[t] * e[t - s];
    const double w = 1.0 - static_cast<double>(s) / static_cast<double>(lag + 1);
    s2 += 2.0 * w * acc / dn;
  }

  double partial = 0.0, sum_sq = 0.0;
  for (double v : e) {
    partial += v;
    sum_sq += partial * partial;
  }

  TestReport report;
  report.test_name = TestName::KPSS;
  report.statistic = sum_sq / (dn * dn * s2);
  const PInterp p = kpss_p_value(report.statistic);
  report.p_value = p.p;
  report.p_clamped = p.clamp;
  report.lag = lag;
  report.sample_size = n;
  report.alpha = options.alpha;
  report.decision = decide(report.p_value, options.alpha);
  return report;
}

}  // namespace volq::stationarity
