#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "volq/test_report.hpp"
#include "volq/timeseries.hpp"

namespace volq::diagnostics {

inline constexpr std::size_t kShapiroWilkMaxN = 5000;
inline constexpr std::size_t kDefaultArchLag = 12;
inline constexpr std::array<std::size_t, 3> kLjungBoxLags = {10, 15, 20};

/// JB = n/6 (S^2 + K^2/4) with population skewness S and excess kurtosis K;
/// p from the chi-square(2) upper tail.
TestReport jarque_bera(const TimeSeries& series, double alpha = 0.05);

/// Royston's approximation to the Shapiro-Wilk W and its p-value. Above
/// 5000 observations every ceil(n/5000)-th value (in series order) is used
/// and the report is flagged as subsampled.
TestReport shapiro_wilk(const TimeSeries& series, double alpha = 0.05);

/// Q = n(n+2) sum_{k<=lag} rho_k^2 / (n-k); p from chi-square(lag - fitdf).
TestReport ljung_box(const TimeSeries& series, std::size_t lag,
                     std::size_t fitdf = 0, double alpha = 0.05);

/// Engle's LM test: x_t^2 on an intercept and `lag` own lags; statistic is
/// (n - lag) R^2 with p from chi-square(lag).
TestReport lm_arch(const TimeSeries& series, std::size_t lag = kDefaultArchLag,
                   double alpha = 0.05);

/// One row of the residual-test table, in the order
/// JB(R), SW(R), Q(10..20)(R), Q(10..20)(R^2), TR^2(R).
struct BatteryRow {
  std::string test;       // "Jarque-Bera Test"
  std::string residuals;  // "R" or "R^2"
  std::string label;      // "Chi^2", "W", "Q(10)", "TR^2"
  TestReport report;
};

struct DiagnosticsBattery {
  TestReport jb;
  TestReport sw;
  std::vector<TestReport> lb_r;
  std::vector<TestReport> lb_r2;
  TestReport lm_arch;

  std::vector<BatteryRow> rows() const;
};

struct BatteryOptions {
  std::size_t fitdf = 0;
  std::vector<std::size_t> lb_lags = {kLjungBoxLags.begin(), kLjungBoxLags.end()};
  std::size_t arch_lag = kDefaultArchLag;
  double alpha = 0.05;
};

DiagnosticsBattery run_battery(const TimeSeries& residuals,
                               const BatteryOptions& options = {});

}  // namespace volq::diagnostics
