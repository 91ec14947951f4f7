#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "volq/garch.hpp"
#include "volq/rng.hpp"
#include "volq/sv.hpp"
#include "volq/timeseries.hpp"

namespace volq::simulate {

enum class Kind { Garch, Sv, WhiteNoise, RandomWalk, Ar1 };

const char* to_string(Kind kind) noexcept;
std::optional<Kind> kind_from_string(const std::string& name);

struct NoiseParams {
  double sigma = 1.0;
};

/// x_t = c + phi x_{t-1} + sigma e_t.
struct Ar1Params {
  double c = 0.0;
  double phi = 0.5;
  double sigma = 1.0;
};

using Params = std::variant<garch::GarchModel, sv::SvParams, NoiseParams, Ar1Params>;

struct SimSpec {
  Kind kind = Kind::WhiteNoise;
  Params params = NoiseParams{};
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  std::size_t burn_in = 500;  // applies to garch, sv and ar1
};

struct SimResult {
  TimeSeries series;
  /// GARCH conditional variances or SV log-volatilities; empty otherwise.
  std::optional<TimeSeries> latent;
  std::string generator = Rng::kIdentity;
};

/// Deterministic given the spec. GARCH paths use y_t = sigma_t eta_t with
/// eta_t ~ N(0,1), starting from the unconditional variance (a0 when the
/// model is not stationary); the first `burn_in` draws are discarded.
SimResult simulate(const SimSpec& spec);

}  // namespace volq::simulate
