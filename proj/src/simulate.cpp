#include "volq/simulate.hpp"

#include <cmath>

#include "volq/error.hpp"
#include "volq/rng.hpp"

namespace volq::simulate {

namespace {

constexpr const char* kModule = "simulate";

template <class T>
const T& params_as(const SimSpec& spec) {
  if (const T* p = std::get_if<T>(&spec.params)) return *p;
  throw Error(ErrorCode::InvalidParams, kModule, "simulate",
              std::string("parameter record does not match kind ") + to_string(spec.kind));
}

SimResult simulate_garch(const SimSpec& spec) {
  const garch::GarchModel& model = params_as<garch::GarchModel>(spec);
  try {
    garch::validate(model);
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidParams, kModule, "simulate", e.what());
  }
  const std::size_t m = model.order_m();
  const std::size_t q = model.order_n();
  const double start =
      model.is_stationary() ? model.a0 / (1.0 - model.persistence()) : model.a0;

  Rng rng(spec.seed);
  const std::size_t total = spec.burn_in + spec.n;
  std::vector<double> y(total), s2(total);
  for (std::size_t t = 0; t < total; ++t) {
    double s = model.a0;
    for (std::size_t j = 1; j <= m; ++j) s += model.a[j - 1] * (t >= j ? y[t - j] * y[t - j] : start);
    for (std::size_t j = 1; j <= q; ++j) s += model.b[j - 1] * (t >= j ? s2[t - j] : start);
    s2[t] = s;
    y[t] = std::sqrt(s) * rng.normal();
  }
  const auto skip = static_cast<std::ptrdiff_t>(spec.burn_in);
  SimResult out;
  out.series = TimeSeries(std::vector<double>(y.begin() + skip, y.end()), "garch-sim");
  out.latent = TimeSeries(std::vector<double>(s2.begin() + skip, s2.end()), "garch-sim-sigma2");
  return out;
}

SimResult simulate_sv(const SimSpec& spec) {
  const sv::SvParams& p = params_as<sv::SvParams>(spec);
  sv::SvSimulation sim = sv::simulate(p, spec.burn_in + spec.n, spec.seed);
  const auto skip = static_cast<std::ptrdiff_t>(spec.burn_in);
  auto tail = [skip](const TimeSeries& s, std::string label) {
    return TimeSeries(std::vector<double>(s.values().begin() + skip, s.values().end()),
                      std::move(label));
  };
  SimResult out;
  out.series = tail(sim.y, "sv-sim");
  out.latent = tail(sim.v_true, "sv-sim-v");
  return out;
}

SimResult simulate_noise(const SimSpec& spec, bool cumulative) {
  const NoiseParams& p = params_as<NoiseParams>(spec);
  if (!(p.sigma >= 0.0) || !std::isfinite(p.sigma)) {
    throw Error(ErrorCode::InvalidParams, kModule, "simulate", "sigma must be >= 0");
  }
  Rng rng(spec.seed);
  std::vector<double> x(spec.n);
  double level = 0.0;
  for (std::size_t t = 0; t < spec.n; ++t) {
    const double e = p.sigma * rng.normal();
    level = cumulative ? level + e : e;
    x[t] = level;
  }
  SimResult out;
  out.series = TimeSeries(std::move(x), cumulative ? "random-walk-sim" : "white-noise-sim");
  return out;
}

SimResult simulate_ar1(const SimSpec& spec) {
  const Ar1Params& p = params_as<Ar1Params>(spec);
  if (!(p.sigma >= 0.0) || !std::isfinite(p.sigma) || !std::isfinite(p.phi) ||
      !std::isfinite(p.c)) {
    throw Error(ErrorCode::InvalidParams, kModule, "simulate",
                "ar1 needs finite c, phi and sigma >= 0");
  }
  Rng rng(spec.seed);
  const std::size_t total = spec.burn_in + spec.n;
  std::vector<double> x(total);
  double prev = std::abs(p.phi) < 1.0 ? p.c / (1.0 - p.phi) : 0.0;
  for (std::size_t t = 0; t < total; ++t) {
    prev = p.c + p.phi * prev + p.sigma * rng.normal();
    x[t] = prev;
  }
  SimResult out;
  out.series = TimeSeries(
      std::vector<double>(x.begin() + static_cast<std::ptrdiff_t>(spec.burn_in), x.end()),
      "ar1-sim");
  return out;
}

}  // namespace

const char* to_string(Kind kind) noexcept {
  switch (kind) {
    case Kind::Garch: return "garch";
    case Kind::Sv: return "sv";
    case Kind::WhiteNoise: return "white_noise";
    case Kind::RandomWalk: return "random_walk";
    case Kind::Ar1: return "ar1";
  }
  return "unknown";
}

std::optional<Kind> kind_from_string(const std::string& name) {
  for (Kind k : {Kind::Garch, Kind::Sv, Kind::WhiteNoise, Kind::RandomWalk, Kind::Ar1}) {
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

SimResult simulate(const SimSpec& spec) {
  if (spec.n < 1) {
    throw Error(ErrorCode::InvalidArgument, kModule, "simulate", "n must be >= 1");
  }
  switch (spec.kind) {
    case Kind::Garch: return simulate_garch(spec);
    case Kind::Sv: return simulate_sv(spec);
    case Kind::WhiteNoise: return simulate_noise(spec, false);
    case Kind::RandomWalk: return simulate_noise(spec, true);
    case Kind::Ar1: return simulate_ar1(spec);
  }
  throw Error(ErrorCode::InvalidArgument, kModule, "simulate", "unknown kind");
}

}  // namespace volq::simulate
