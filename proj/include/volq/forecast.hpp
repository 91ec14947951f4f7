#pragma once

#include <cstddef>
#include <vector>

namespace volq {

/// Predicted volatility path with a +-half_width band. For the variance
/// scale (GARCH) the band is the +-2 sigma envelope of the zero-mean return
/// forecast; for the log-variance scale (SV) it surrounds `center` itself.
struct ForecastPath {
  enum class Scale { Variance, LogVariance };

  std::vector<double> center;
  std::vector<double> half_width;
  Scale scale = Scale::Variance;
  /// Number of leading entries that are in-sample one-step predictions.
  std::size_t in_sample = 0;

  std::size_t size() const noexcept { return center.size(); }
  /// Value the band is centred on at index i.
  double band_mid(std::size_t i) const {
    return scale == Scale::Variance ? 0.0 : center[i];
  }
  double lower(std::size_t i) const { return band_mid(i) - half_width[i]; }
  double upper(std::size_t i) const { return band_mid(i) + half_width[i]; }
};

const char* to_string(ForecastPath::Scale scale) noexcept;

}  // namespace volq
