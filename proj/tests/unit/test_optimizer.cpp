#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "volq/error.hpp"
#include "volq/optimizer.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
namespace optim = volq::optim;

TEST_CASE("one-dimensional quadratic") {
  const optim::Objective f = [](std::span<const double> x) {
    return -(x[0] - 3.0) * (x[0] - 3.0);
  };
  const std::vector<double> init{0.0};
  const auto r = optim::maximize(f, init);
  CHECK(r.converged);
  CHECK(r.iterations <= 10);
  CHECK_THAT(r.argmax[0], WithinAbs(3.0, 1e-8));
}

TEST_CASE("separable quadratic in five dimensions") {
  const std::vector<double> c{1.0, -2.0, 0.5, 10.0, -7.25};
  const optim::Objective f = [&](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) s -= (x[i] - c[i]) * (x[i] - c[i]);
    return s;
  };
  const std::vector<double> init(5, 0.0);
  const auto r = optim::maximize(f, init);
  CHECK(r.converged);
  CHECK(r.iterations <= 5 + 2);
  for (std::size_t i = 0; i < c.size(); ++i) CHECK_THAT(r.argmax[i], WithinAbs(c[i], 1e-8));
}

TEST_CASE("correlated concave quadratic converges within dimension + 2 steps") {
  // -(x - m)' A (x - m) with A positive definite.
  const double A[3][3] = {{4.0, 1.0, 0.5}, {1.0, 3.0, -0.2}, {0.5, -0.2, 2.0}};
  const double m[3] = {0.3, -1.2, 2.0};
  const optim::Objective f = [&](std::span<const double> x) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s -= (x[i] - m[i]) * A[i][j] * (x[j] - m[j]);
    return s;
  };
  const std::vector<double> init{5.0, 5.0, -5.0};
  const auto r = optim::maximize(f, init);
  CHECK(r.converged);
  CHECK(r.iterations <= 5);
  for (int i = 0; i < 3; ++i) CHECK_THAT(r.argmax[i], WithinAbs(m[i], 1e-8));
}

TEST_CASE("negated Rosenbrock") {
  const optim::Objective f = [](std::span<const double> x) {
    const double a = 1.0 - x[0];
    const double b = x[1] - x[0] * x[0];
    return -(a * a + 100.0 * b * b);
  };
  const std::vector<double> init{-1.2, 1.0};
  const auto r = optim::maximize(f, init);
  CHECK(r.converged);
  CHECK_THAT(r.argmax[0], WithinAbs(1.0, 1e-4));
  CHECK_THAT(r.argmax[1], WithinAbs(1.0, 1e-4));

  SECTION("trace is monotone") {
    for (std::size_t i = 1; i < r.trace.size(); ++i) {
      CHECK(r.trace[i].value >= r.trace[i - 1].value);
    }
  }
  SECTION("bit-identical reruns") {
    const auto again = optim::maximize(f, init);
    REQUIRE(again.trace.size() == r.trace.size());
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
      CHECK(again.trace[i].value == r.trace[i].value);
      CHECK(again.trace[i].step == r.trace[i].step);
    }
    CHECK(again.argmax == r.argmax);
  }
}

TEST_CASE("transforms keep the optimizer inside the domain") {
  // f(s) = -s^2/2 + ln s peaks at s = 1.
  const optim::Objective f = [](std::span<const double> x) {
    return -0.5 * x[0] * x[0] + std::log(x[0]);
  };
  optim::OptimizerConfig cfg;
  cfg.transforms = {optim::Transform::LogPositive};
  const std::vector<double> init{5.0};
  const auto r = optim::maximize(f, init, cfg);
  CHECK(r.converged);
  CHECK_THAT(r.argmax[0], WithinAbs(1.0, 1e-7));
  CHECK_THAT(r.unconstrained[0], WithinAbs(0.0, 1e-7));
}

TEST_CASE("non-finite objective at the start is an error") {
  const optim::Objective f = [](std::span<const double>) {
    return std::numeric_limits<double>::quiet_NaN();
  };
  const std::vector<double> init{1.0};
  try {
    optim::maximize(f, init);
    FAIL("expected an error");
  } catch (const volq::Error& e) {
    CHECK(e.code() == volq::ErrorCode::NonFiniteObjective);
  }
}

TEST_CASE("iteration cap reports non-convergence with best-so-far") {
  const optim::Objective f = [](std::span<const double> x) {
    const double a = 1.0 - x[0];
    const double b = x[1] - x[0] * x[0];
    return -(a * a + 100.0 * b * b);
  };
  optim::OptimizerConfig cfg;
  cfg.max_iter = 2;
  const std::vector<double> init{-1.2, 1.0};
  const auto r = optim::maximize(f, init, cfg);
  CHECK_FALSE(r.converged);
  CHECK(r.reason == optim::StopReason::MaxIter);
  CHECK(r.value >= f(init));
}

TEST_CASE("numerical gradient") {
  const optim::Objective sq = [](std::span<const double> x) { return x[0] * x[0]; };
  const optim::Objective sn = [](std::span<const double> x) { return std::sin(x[0]); };
  const std::vector<double> one{1.0}, zero{0.0};
  CHECK_THAT(optim::numerical_gradient(sq, one)[0], WithinAbs(2.0, 1e-7));
  CHECK_THAT(optim::numerical_gradient(sn, zero)[0], WithinAbs(1.0, 1e-7));
}

TEST_CASE("numerical Hessian is symmetric") {
  const optim::Objective f = [](std::span<const double> x) {
    return std::sin(x[0]) * std::exp(x[1]) - x[0] * x[1] * x[1];
  };
  const std::vector<double> p{0.3, -0.4};
  const auto H = optim::numerical_hessian(f, p);
  CHECK(H(0, 1) == H(1, 0));
  CHECK_THAT(H(0, 0), WithinAbs(-std::sin(0.3) * std::exp(-0.4), 1e-5));
  CHECK_THAT(H(1, 1), WithinAbs(std::sin(0.3) * std::exp(-0.4) - 2 * 0.3, 1e-5));
  CHECK_THAT(H(0, 1), WithinAbs(std::cos(0.3) * std::exp(-0.4) + 0.8, 1e-5));
}

TEST_CASE("standard errors from the Hessian") {
  SECTION("-2 I") {
    const auto se = optim::std_errors_from_hessian(-2.0 * Eigen::MatrixXd::Identity(3, 3));
    for (double v : se.values) CHECK_THAT(v, WithinRel(1.0 / std::sqrt(2.0), 1e-14));
    CHECK_FALSE(se.singular);
  }
  SECTION("diag(-4, -1)") {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2, 2);
    h(0, 0) = -4.0;
    h(1, 1) = -1.0;
    const auto se = optim::std_errors_from_hessian(h);
    CHECK_THAT(se.values[0], WithinRel(0.5, 1e-14));
    CHECK_THAT(se.values[1], WithinRel(1.0, 1e-14));
  }
  SECTION("singular Hessian is flagged, not NaN") {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2, 2);
    h(0, 0) = -1.0;
    const auto se = optim::std_errors_from_hessian(h);
    CHECK(se.singular);
    for (double v : se.values) CHECK(std::isfinite(v));
    CHECK_FALSE(se.valid[1]);
  }
  SECTION("delta method for a log-transformed parameter") {
    optim::OptimResult r;
    r.unconstrained = {std::log(3.0)};
    r.argmax = {3.0};
    r.hessian = -Eigen::MatrixXd::Identity(1, 1);
    const std::vector<optim::Transform> t{optim::Transform::LogPositive};
    const auto se = optim::natural_std_errors(r, t);
    CHECK_THAT(se.values[0], WithinRel(3.0, 1e-14));
  }
}

TEST_CASE("transforms are exact bijections") {
  using optim::Transform;
  for (double x : {1e-8, 0.3, 1.0, 42.0, 1e6}) {
    CHECK_THAT(optim::from_unconstrained(Transform::LogPositive,
                                         optim::to_unconstrained(Transform::LogPositive, x)),
               WithinRel(x, 1e-14));
  }
  for (double x : {1e-6, 0.25, 0.5, 0.9, 0.999}) {
    CHECK_THAT(optim::from_unconstrained(Transform::LogitUnit,
                                         optim::to_unconstrained(Transform::LogitUnit, x)),
               WithinRel(x, 1e-14));
  }
  for (double x : {-3.5, 0.0, 7.0}) {
    CHECK(optim::from_unconstrained(Transform::Free, optim::to_unconstrained(Transform::Free, x)) ==
          x);
  }
  CHECK_THAT(optim::jacobian(Transform::LogPositive, std::log(2.0)), WithinRel(2.0, 1e-14));
  CHECK_THAT(optim::jacobian(Transform::LogitUnit, 0.0), WithinRel(0.25, 1e-14));
}
