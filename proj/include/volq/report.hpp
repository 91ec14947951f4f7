#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "volq/diagnostics.hpp"
#include "volq/forecast.hpp"
#include "volq/garch.hpp"
#include "volq/sv.hpp"
#include "volq/test_report.hpp"

namespace volq::report {

inline constexpr const char* kLibraryVersion = "0.1.0";

/// p-values below this print as 0 in the residual table; the raw value is
/// kept alongside.
inline constexpr double kDisplayZeroP = 1e-16;

struct Metadata {
  std::string command;
  std::optional<std::string> timestamp;  // ISO-8601 UTC; absent with --no-timestamp
  std::string input_digest;
  std::string library_version = kLibraryVersion;
  std::string generator;
  std::string label;
  std::size_t n = 0;

  bool operator==(const Metadata&) const = default;
};

struct StationarityBlock {
  TestReport adf;
  TestReport kpss;
  std::string adf_terms = "trend";

  bool operator==(const StationarityBlock&) const = default;
};

/// Estimate / Error / t-statistic / p-value.
struct ParameterRow {
  std::string name;
  double estimate = 0.0;
  double error = 0.0;
  double t_statistic = 0.0;
  double p_value = 1.0;
  bool error_valid = true;

  bool operator==(const ParameterRow&) const = default;
};

struct GarchBlock {
  std::size_t m = 1;
  std::size_t n = 1;
  std::vector<ParameterRow> parameters;  // a0, a1..am, b1..bn
  double loglik = 0.0;
  double persistence = 0.0;
  bool stationary = false;
  bool converged = false;
  std::string stop_reason;
  int iterations = 0;
  double gradient_norm = 0.0;

  bool operator==(const GarchBlock&) const = default;
};

struct SvRow {
  std::string name;
  double estimate = 0.0;
  double standard_error = 0.0;
  bool estimated = true;  // false for quantities held fixed during the fit

  bool operator==(const SvRow&) const = default;
};

struct SvBlock {
  std::vector<SvRow> parameters;  // alpha0, alpha1, sigma_w, lambda, sigma0, phi1, sigma1
  double p1 = 0.5;
  bool p1_estimated = false;
  double loglik = 0.0;
  bool stationary = false;
  bool converged = false;
  std::string stop_reason;
  int iterations = 0;
  double gradient_norm = 0.0;
  int clamped_variances = 0;

  bool operator==(const SvBlock&) const = default;
};

struct DiagnosticsRow {
  std::string test;
  std::string residuals;
  std::string label;
  TestReport report;

  bool operator==(const DiagnosticsRow&) const = default;
};

struct ForecastRow {
  std::size_t t = 0;
  bool in_sample = true;
  double center = 0.0;
  double half_width = 0.0;
  double lower = 0.0;
  double upper = 0.0;

  bool operator==(const ForecastRow&) const = default;
};

struct ForecastBlock {
  std::string model;  // "garch" or "sv"
  std::string scale;  // "variance" or "log_variance"
  std::vector<ForecastRow> rows;

  bool operator==(const ForecastBlock&) const = default;
};

struct Report {
  Metadata metadata;
  std::optional<StationarityBlock> stationarity;
  std::optional<GarchBlock> garch;
  std::optional<SvBlock> sv;
  std::optional<std::vector<DiagnosticsRow>> diagnostics;
  std::optional<ForecastBlock> forecast;

  bool operator==(const Report&) const = default;
};

StationarityBlock make_stationarity(const TestReport& adf, const TestReport& kpss,
                                    std::string adf_terms);
GarchBlock make_garch(const garch::GarchFit& fit);
SvBlock make_sv(const sv::SvFit& fit);
std::vector<DiagnosticsRow> make_diagnostics(const diagnostics::DiagnosticsBattery& battery);
ForecastBlock make_forecast(const ForecastPath& path, std::string model);

enum class Format { Json, Csv };

std::optional<Format> format_from_string(const std::string& name);

/// Deterministic bytes: fixed key order, shortest round-trip numbers.
std::string to_json(const Report& report);

/// Long format "section,row,field,value", one line per scalar.
std::string to_csv(const Report& report);

std::string emit(const Report& report, Format format);

/// Inverse of to_json. Throws ParseError on malformed input.
Report from_json(std::string_view text);

}  // namespace volq::report
