#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace volq {

/// Equally spaced scalar observations. Values are finite; timestamps, when
/// present, match the values in length and strictly increase. Timestamps are
/// carried for reporting only and never enter an estimator.
class TimeSeries {
 public:
  TimeSeries() = default;
  explicit TimeSeries(std::vector<double> values, std::string label = {});
  TimeSeries(std::vector<double> values, std::vector<double> timestamps,
             std::string label);

  std::span<const double> values() const noexcept { return values_; }
  const std::optional<std::vector<double>>& timestamps() const noexcept {
    return timestamps_;
  }
  const std::string& label() const noexcept { return label_; }

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  double operator[](std::size_t i) const { return values_[i]; }

  TimeSeries with_label(std::string label) const;

 private:
  std::vector<double> values_;
  std::optional<std::vector<double>> timestamps_;
  std::string label_;
};

struct SummaryStats {
  double mean = 0.0;
  double variance = 0.0;  // population (divide by n)
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  std::size_t n = 0;
};

struct HistogramRow {
  double lower = 0.0;
  double upper = 0.0;
  double midpoint = 0.0;
  std::size_t count = 0;
  double density = 0.0;     // count / (n * width)
  double normal_pdf = 0.0;  // fitted Normal at the midpoint
};

struct Histogram {
  std::vector<double> edges;  // bins + 1 entries
  std::vector<HistogramRow> rows;
  double mean = 0.0;
  double stddev = 0.0;
};

inline constexpr double kDefaultLogFloor = 1e-300;

/// ln(p[i+1] / p[i]); requires strictly positive prices.
TimeSeries log_returns(const TimeSeries& prices);

/// ln(max(y^2, floor)). The floor keeps exact zeros finite.
TimeSeries log_squared(const TimeSeries& series,
                       double floor = kDefaultLogFloor);

SummaryStats summary_stats(std::span<const double> values);
inline SummaryStats summary_stats(const TimeSeries& series) {
  return summary_stats(series.values());
}

/// Equal-width histogram over [min, max] with the Normal density fitted by
/// the sample mean and population standard deviation.
Histogram histogram_with_normal(const TimeSeries& series, std::size_t bins);

}  // namespace volq
