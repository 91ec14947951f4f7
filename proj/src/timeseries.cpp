#include "volq/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "volq/error.hpp"

namespace volq {

namespace {

constexpr const char* kModule = "timeseries-core";

void require_finite(std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(ErrorCode::NonFiniteValue, kModule, "TimeSeries",
                  "non-finite value at index " + std::to_string(i));
    }
  }
}

}  // namespace

TimeSeries::TimeSeries(std::vector<double> values, std::string label)
    : values_(std::move(values)), label_(std::move(label)) {
  require_finite(values_);
}

TimeSeries::TimeSeries(std::vector<double> values,
                       std::vector<double> timestamps, std::string label)
    : values_(std::move(values)), label_(std::move(label)) {
  require_finite(values_);
  if (timestamps.size() != values_.size()) {
    throw Error(ErrorCode::LengthMismatch, kModule, "TimeSeries",
                "timestamps and values differ in length");
  }
  for (std::size_t i = 1; i < timestamps.size(); ++i) {
    if (!(timestamps[i] > timestamps[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, kModule, "TimeSeries",
                  "timestamps not strictly increasing at index " +
                      std::to_string(i));
    }
  }
  timestamps_ = std::move(timestamps);
}

TimeSeries TimeSeries::with_label(std::string label) const {
  TimeSeries copy = *this;
  copy.label_ = std::move(label);
  return copy;
}

TimeSeries log_returns(const TimeSeries& prices) {
  if (prices.size() < 2) {
    throw Error(ErrorCode::TooShort, kModule, "log_returns",
                "need at least 2 prices");
  }
  auto p = prices.values();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] > 0.0)) {
      throw Error(ErrorCode::NonPositiveValue, kModule, "log_returns",
                  "price at index " + std::to_string(i) + " is not positive");
    }
  }
  std::vector<double> out(p.size() - 1);
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    out[i] = std::log(p[i + 1] / p[i]);
  }
  std::string label = prices.label() + "-logret";
  if (prices.timestamps()) {
    std::vector<double> ts(prices.timestamps()->begin() + 1,
                           prices.timestamps()->end());
    return TimeSeries(std::move(out), std::move(ts), std::move(label));
  }
  return TimeSeries(std::move(out), std::move(label));
}

TimeSeries log_squared(const TimeSeries& series, double floor) {
  if (series.empty()) {
    throw Error(ErrorCode::TooShort, kModule, "log_squared", "empty series");
  }
  if (!(floor > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, kModule, "log_squared",
                "floor must be positive");
  }
  std::vector<double> out;
  out.reserve(series.size());
  for (double y : series.values()) {
    out.push_back(std::log(std::max(y * y, floor)));
  }
  if (series.timestamps()) {
    return TimeSeries(std::move(out), *series.timestamps(), series.label());
  }
  return TimeSeries(std::move(out), series.label());
}

SummaryStats summary_stats(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) {
    throw Error(ErrorCode::TooShort, kModule, "summary_stats",
                "need at least 2 observations");
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);

  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double d = v - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  const double dn = static_cast<double>(n);
  m2 /= dn;
  m3 /= dn;
  m4 /= dn;

  SummaryStats s;
  s.n = n;
  s.mean = mean;
  s.variance = m2;
  if (m2 > 0.0) {
    s.skewness = m3 / std::pow(m2, 1.5);
    s.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  }
  return s;
}

Histogram histogram_with_normal(const TimeSeries& series, std::size_t bins) {
  if (bins < 2) {
    throw Error(ErrorCode::InvalidArgument, kModule, "histogram_with_normal",
                "bins must be at least 2");
  }
  const SummaryStats stats = summary_stats(series.values());
  if (!(stats.variance > 0.0)) {
    throw Error(ErrorCode::DegenerateVariance, kModule,
                "histogram_with_normal", "series has zero variance");
  }
  auto v = series.values();
  const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  const double width = (hi - lo) / static_cast<double>(bins);

  Histogram h;
  h.mean = stats.mean;
  h.stddev = std::sqrt(stats.variance);
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) {
    h.edges[i] = lo + width * static_cast<double>(i);
  }
  h.edges.back() = hi;

  std::vector<std::size_t> counts(bins, 0);
  for (double x : v) {
    auto idx = static_cast<std::size_t>((x - lo) / width);
    counts[std::min(idx, bins - 1)]++;
  }

  const double n = static_cast<double>(v.size());
  const double norm = 1.0 / (h.stddev * std::sqrt(2.0 * std::numbers::pi));
  h.rows.reserve(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    HistogramRow row;
    row.lower = h.edges[i];
    row.upper = h.edges[i + 1];
    row.midpoint = 0.5 * (row.lower + row.upper);
    row.count = counts[i];
    row.density = static_cast<double>(counts[i]) / (n * width);
    const double z = (row.midpoint - h.mean) / h.stddev;
    row.normal_pdf = norm * std::exp(-0.5 * z * z);
    h.rows.push_back(row);
  }
  return h;
}

}  // namespace volq
