#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "volq/forecast.hpp"
#include "volq/optimizer.hpp"
#include "volq/report.hpp"
#include "volq/stationarity.hpp"
#include "volq/timeseries.hpp"

namespace volq::pipeline {

enum class Command { Stationarity, FitGarch, FitSv, Forecast, Diagnose, Report };

const char* to_string(Command command) noexcept;
std::optional<Command> command_from_string(const std::string& name);

enum class Model { Garch, Sv };

struct RunOptions {
  std::size_t m = 1;  // GARCH ARCH order
  std::size_t n = 1;  // GARCH GARCH order
  std::optional<std::size_t> lag;  // stationarity lag; default per test
  double alpha = 0.05;
  std::size_t horizon = 1;
  Model model = Model::Garch;
  stationarity::AdfTerms adf_terms = stationarity::AdfTerms::Trend;
  std::size_t fitdf = 0;
  std::size_t arch_lag = 12;
  bool estimate_p1 = false;
  optim::OptimizerConfig optimizer;
  std::optional<std::string> timestamp;
};

struct RunResult {
  report::Report report;
  std::optional<ForecastPath> forecast;
  /// Series the forecast band is drawn against: returns for GARCH,
  /// g - lambda for SV.
  std::optional<TimeSeries> observed;
  /// False when a fit in this run failed to converge.
  bool converged = true;
};

/// Runs one command against a series. Fits that fail to converge are still
/// reported (with `converged` false); forecasts are only produced from
/// converged fits. `report` fits GARCH and SV concurrently.
RunResult run(Command command, const TimeSeries& series, const RunOptions& options,
              const std::string& input_digest);

/// Current UTC time as "YYYY-MM-DDTHH:MM:SSZ".
std::string utc_timestamp();

}  // namespace volq::pipeline
