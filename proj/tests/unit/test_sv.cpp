#include <catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "volq/error.hpp"
#include "volq/sv.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
namespace sv = volq::sv;

namespace {

sv::SvParams params(double a0, double a1, double sw, double lambda, double s0, double phi1,
                    double s1, double p1) {
  sv::SvParams p;
  p.alpha0 = a0;
  p.alpha1 = a1;
  p.sigma_w = sw;
  p.lambda = lambda;
  p.sigma0 = s0;
  p.phi1 = phi1;
  p.sigma1 = s1;
  p.p1 = p1;
  return p;
}

std::vector<double> log_sq_sample(std::size_t n, std::uint64_t seed) {
  const auto s = sv::simulate(params(-0.2, 0.9, 0.5, 0.0, 1.0, -4.0, 3.0, 0.5), n, seed);
  return {s.g.values().begin(), s.g.values().end()};
}

}  // namespace

TEST_CASE("identical components collapse to a scalar Kalman filter") {
  const auto g = log_sq_sample(400, 1);
  for (double p1 : {0.1, 0.5, 0.9}) {
    const auto p = params(-0.1, 0.85, 0.4, -1.2, 1.3, 0.0, 1.3, p1);
    const auto got = sv::filter(p, g);
    const auto ref = oracle::scalar_kalman(-0.1, 0.85, 0.4, -1.2, 0.0, 1.3 * 1.3, g);
    CHECK_THAT(got.loglik, WithinRel(ref.loglik, 1e-12));
    for (std::size_t t = 0; t < g.size(); ++t) {
      CHECK_THAT(got.path[t].v_pred, WithinAbs(ref.v_pred[t], 1e-10));
      CHECK_THAT(got.path[t].U_pred, WithinRel(ref.U_pred[t], 1e-12));
    }
  }
}

TEST_CASE("filter agrees with a probability-space evaluation") {
  const auto g = log_sq_sample(300, 2);
  const oracle::SvConfig c{0.05, 0.93, 0.35, -0.7, 0.9, -3.5, 2.7, 0.4};
  const auto p = params(c.alpha0, c.alpha1, c.sigma_w, c.lambda, c.sigma0, c.phi1, c.sigma1,
                        c.p1);
  for (std::size_t n : {1u, 2u, 5u, 300u}) {
    const std::vector<double> head(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(n));
    CHECK_THAT(sv::filter(p, head).loglik,
               WithinRel(oracle::sv_loglik_enumerated(c, head), 1e-11));
  }
}

TEST_CASE("single observation log-likelihood by hand") {
  const auto p = params(0.0, 0.5, 1.0, 0.0, 1.0, -2.0, 2.0, 0.25);
  const double g = 0.7;
  const double U = 1.0 / (1.0 - 0.25);
  auto dens = [](double x, double var) {
    return std::exp(-0.5 * x * x / var) / std::sqrt(2.0 * M_PI * var);
  };
  const double expect = std::log(0.75 * dens(g, U + 1.0) + 0.25 * dens(g + 2.0, U + 4.0));
  CHECK_THAT(sv::filter(p, std::vector<double>{g}).loglik, WithinRel(expect, 1e-14));
}

TEST_CASE("filter invariants") {
  const auto g = log_sq_sample(1000, 3);
  const auto p = params(-0.2, 0.9, 0.5, 0.1, 1.0, -4.0, 3.0, 0.5);
  const auto r = sv::filter(p, g);
  REQUIRE(r.path.size() == g.size());
  for (const auto& s : r.path) {
    CHECK(s.U_pred >= 0.0);
    CHECK_THAT(s.probs[0] + s.probs[1], WithinAbs(1.0, 1e-15));
    CHECK(s.probs[0] >= 0.0);
    CHECK(s.probs[1] >= 0.0);
    CHECK_THAT(s.gains[0], WithinRel(p.alpha1 * s.U_pred / s.innovation_vars[0], 1e-15));
  }
  CHECK(r.path.front().v_pred == 0.0);
  CHECK_THAT(r.path.front().U_pred, WithinRel(0.25 / (1.0 - 0.81), 1e-15));
}

TEST_CASE("shifting the observations and lambda together changes nothing") {
  const auto g = log_sq_sample(500, 4);
  const auto p = params(-0.2, 0.9, 0.5, 0.0, 1.0, -4.0, 3.0, 0.5);
  for (double c : {-5.0, 2.5}) {
    auto shifted = g;
    for (double& v : shifted) v += c;
    auto q = p;
    q.lambda += c;
    const auto a = sv::filter(p, g);
    const auto b = sv::filter(q, shifted);
    CHECK_THAT(b.loglik, WithinAbs(a.loglik, 1e-12 * std::abs(a.loglik)));
    for (std::size_t t = 0; t < g.size(); ++t) {
      CHECK_THAT(b.path[t].v_pred, WithinAbs(a.path[t].v_pred, 1e-12));
    }
  }
}

TEST_CASE("vanishing state noise pins the prediction at alpha0") {
  const auto g = log_sq_sample(50, 5);
  const auto p = params(0.3, 0.0, 1e-9, 0.0, 1.0, -4.0, 3.0, 0.5);
  const auto r = sv::filter(p, g);
  for (std::size_t t = 1; t < r.path.size(); ++t) {
    CHECK_THAT(r.path[t].v_pred, WithinAbs(0.3, 1e-12));
  }
}

TEST_CASE("prediction variance approaches the stationary value") {
  const auto p = params(0.1, 0.8, 0.6, 0.0, 1.0, -4.0, 3.0, 0.5);
  sv::FilterResult f;
  f.v_next = 3.0;
  f.U_next = 0.0;
  const auto path = sv::predict(p, f, 200);
  REQUIRE(path.size() == 200);
  CHECK(path.in_sample == 0);
  CHECK(path.center[0] == 3.0);
  CHECK_THAT(path.center.back(), WithinAbs(0.1 / 0.2, 1e-10));
  CHECK_THAT(path.half_width.back(), WithinRel(2.0 * std::sqrt(0.36 / 0.36), 1e-10));
  CHECK(path.scale == volq::ForecastPath::Scale::LogVariance);
  CHECK(path.lower(5) == path.center[5] - path.half_width[5]);
}

TEST_CASE("default starting point") {
  const std::vector<double> g{1.0, 2.0, 6.0};
  const auto p = sv::default_init(g);
  CHECK(p.alpha0 == 0.0);
  CHECK(p.alpha1 == 0.96);
  CHECK(p.sigma_w == 0.3);
  CHECK(p.lambda == 3.0);
  CHECK(p.sigma0 == 1.0);
  CHECK(p.phi1 == -4.0);
  CHECK(p.sigma1 == 3.0);
  CHECK(p.p1 == 0.5);
}

TEST_CASE("parameter validation") {
  const std::vector<double> g{0.0};
  CHECK_THROWS_AS(sv::filter(params(0, 0.5, -1.0, 0, 1, 0, 1, 0.5), g), volq::Error);
  CHECK_THROWS_AS(sv::filter(params(0, 0.5, 1.0, 0, 0.0, 0, 1, 0.5), g), volq::Error);
  CHECK_THROWS_AS(sv::filter(params(0, 0.5, 1.0, 0, 1, 0, 1, 1.0), g), volq::Error);
  CHECK_THROWS_AS(sv::filter(params(0, 0.5, 1.0, 0, 1, 0, 1, 0.0), g), volq::Error);
}

TEST_CASE("fit") {
  const auto truth = params(-0.2, 0.9, 0.5, 0.0, 1.0, -4.0, 3.0, 0.5);
  const auto sim = sv::simulate(truth, 2000, 21);
  const auto fit = sv::fit(sim.y);
  CHECK(fit.converged);
  CHECK(sv::kParameterNames.size() == 7);
  CHECK_FALSE(fit.lambda_estimated);
  CHECK_FALSE(fit.p1_estimated);
  CHECK(fit.params.p1 == 0.5);
  CHECK(fit.g.size() == 2000);
  CHECK_THAT(fit.params.lambda, WithinRel(volq::summary_stats(fit.g).mean, 1e-14));
  CHECK(std::abs(fit.params.alpha1 - 0.9) < 3.0 * fit.std_errors[1]);
  CHECK_THAT(fit.loglik, WithinRel(sv::filter(fit.params, fit.g).loglik, 1e-12));
  const auto path = sv::predict(fit, 3);
  CHECK(path.size() == 2003);
  CHECK(path.in_sample == 2000);
}

TEST_CASE("fit errors") {
  CHECK_THROWS_AS(sv::fit(volq::TimeSeries(std::vector<double>(50, 0.1))), volq::Error);
  try {
    sv::fit(volq::TimeSeries(std::vector<double>(99, 0.1)));
  } catch (const volq::Error& e) {
    CHECK(e.code() == volq::ErrorCode::TooShort);
  }
  sv::SvFit unconverged;
  CHECK_THROWS_AS(sv::predict(unconverged), volq::Error);
}
