#pragma once

#include <cstddef>
#include <optional>

#include "volq/test_report.hpp"
#include "volq/timeseries.hpp"

namespace volq::stationarity {

/// Deterministic terms of the augmented Dickey-Fuller regression.
enum class AdfTerms { None, Drift, Trend };

const char* to_string(AdfTerms terms) noexcept;

struct AdfOptions {
  std::optional<std::size_t> lag;  // default floor(12 (n/100)^(1/4))
  double alpha = 0.05;
  AdfTerms terms = AdfTerms::Trend;
};

struct KpssOptions {
  std::optional<std::size_t> lag;  // default floor(4 (n/100)^(1/4))
  double alpha = 0.05;
};

std::size_t default_adf_lag(std::size_t n);
std::size_t default_kpss_lag(std::size_t n);

/// Null: unit root. Regresses the first difference on the chosen
/// deterministic terms, the lagged level and `lag` lagged differences; the
/// statistic is the t-ratio of the lagged level. p is interpolated in the
/// Dickey-Fuller quantile table (linear in tail probability and in 1/n) and
/// clamped to [0.01, 0.99].
TestReport adf_test(const TimeSeries& series, const AdfOptions& options = {});

/// Null: level stationarity. eta = sum S_t^2 / (n^2 s^2(lag)) with S_t the
/// partial sums of demeaned data and s^2 the Bartlett long-run variance.
/// p is interpolated in the asymptotic table and clamped to [0.01, 0.10].
TestReport kpss_test(const TimeSeries& series, const KpssOptions& options = {});

/// Interpolation helpers, exposed for table checks.
struct PInterp {
  double p = 0.0;
  PClamp clamp = PClamp::None;
};
PInterp adf_p_value(double statistic, std::size_t n, AdfTerms terms);
PInterp kpss_p_value(double statistic);

}  // namespace volq::stationarity
