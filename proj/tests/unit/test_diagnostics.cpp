#include <catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "volq/diagnostics.hpp"
#include "volq/error.hpp"
#include "volq/rng.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using volq::ErrorCode;
using volq::TimeSeries;
namespace dg = volq::diagnostics;

namespace {

TimeSeries noise(int n) { return TimeSeries(oracle::hash_noise_series(n)); }

TimeSeries normal_sample(std::size_t n, std::uint64_t seed) {
  volq::Rng rng(seed);
  std::vector<double> x(n);
  for (double& v : x) v = rng.normal();
  return TimeSeries(x);
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const volq::Error& e) {
    return e.code();
  }
  FAIL("expected volq::Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

// Reference values from scipy.stats (jarque_bera, shapiro) and statsmodels
// (acorr_ljungbox, het_arch) on the hash-noise sequence.
TEST_CASE("Jarque-Bera matches a reference implementation") {
  const auto r = dg::jarque_bera(noise(300));
  CHECK_THAT(r.statistic, WithinRel(15.660593501709771, 1e-10));
  CHECK_THAT(r.p_value, WithinRel(0.0003975075020942566, 1e-8));
  CHECK(r.df == 2.0);
  CHECK(r.sample_size == 300);
  CHECK(r.decision == volq::Decision::RejectNull);
}

TEST_CASE("Shapiro-Wilk matches a reference implementation") {
  const auto all = oracle::hash_noise_series(300);
  struct Case {
    std::size_t n;
    double w, p;
  };
  for (const Case& c : {Case{300, 0.9599831602225699, 2.445961678629404e-07},
                        Case{20, 0.955917993494326, 0.46585324328952094},
                        Case{7, 0.9797404037931629, 0.9582681511553025},
                        Case{3, 0.9916331042107495, 0.8250592273651355}}) {
    const TimeSeries x(std::vector<double>(all.begin(), all.begin() + static_cast<long>(c.n)));
    const auto r = dg::shapiro_wilk(x);
    CHECK_THAT(r.statistic, WithinAbs(c.w, 1e-6));
    CHECK_THAT(r.p_value, WithinRel(c.p, 1e-3));
    CHECK_FALSE(r.subsampled);
  }
  std::vector<double> ramp(10);
  for (int i = 0; i < 10; ++i) ramp[i] = i + 1.0;
  const auto r = dg::shapiro_wilk(TimeSeries(ramp));
  CHECK_THAT(r.statistic, WithinAbs(0.9701646110856056, 1e-6));
  CHECK_THAT(r.p_value, WithinRel(0.8923673061902978, 1e-3));
}

TEST_CASE("Ljung-Box matches the autocorrelation definition") {
  const auto x = oracle::hash_noise_series(300);
  const auto r = dg::ljung_box(TimeSeries(x), 10);
  CHECK_THAT(r.statistic, WithinRel(5.521209830997202, 1e-10));
  CHECK_THAT(r.statistic, WithinRel(oracle::ljung_box_q(x, 10), 1e-12));
  CHECK_THAT(r.p_value, WithinRel(0.8537590851308509, 1e-8));
  CHECK(r.df == 10.0);
  const auto adj = dg::ljung_box(TimeSeries(x), 10, 2);
  CHECK(adj.statistic == r.statistic);
  CHECK(adj.df == 8.0);
  CHECK_THAT(adj.p_value, WithinRel(0.7006890067562856, 1e-8));
}

TEST_CASE("LM-ARCH matches a reference implementation") {
  const auto a = dg::lm_arch(noise(300), 12);
  CHECK_THAT(a.statistic, WithinRel(4.31126492888292, 1e-8));
  CHECK_THAT(a.p_value, WithinRel(0.9771423515126441, 1e-8));
  const auto b = dg::lm_arch(noise(300), 3);
  CHECK_THAT(b.statistic, WithinRel(0.014137465331903298, 1e-7));
  CHECK_THAT(b.p_value, WithinRel(0.9995548207295718, 1e-8));
}

TEST_CASE("two-point sign data") {
  std::vector<double> x(1000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = i % 2 == 0 ? 1.0 : -1.0;
  // S = 0, K = -2 gives JB = n/6 * 1.
  const auto jb = dg::jarque_bera(TimeSeries(x));
  CHECK_THAT(jb.statistic, WithinRel(1000.0 / 6.0, 1e-12));
  CHECK(jb.decision == volq::Decision::RejectNull);
  CHECK(dg::shapiro_wilk(TimeSeries(x)).decision == volq::Decision::RejectNull);
}

TEST_CASE("statistics are affine invariant") {
  const auto x = normal_sample(400, 8);
  std::vector<double> y(x.values().begin(), x.values().end());
  for (double& v : y) v = 3.5 * v - 2.0;
  const TimeSeries ty(y);
  CHECK_THAT(dg::jarque_bera(ty).statistic, WithinRel(dg::jarque_bera(x).statistic, 1e-9));
  CHECK_THAT(dg::shapiro_wilk(ty).statistic, WithinRel(dg::shapiro_wilk(x).statistic, 1e-12));
  CHECK_THAT(dg::ljung_box(ty, 15).statistic, WithinRel(dg::ljung_box(x, 15).statistic, 1e-9));
}

TEST_CASE("Normal samples are rarely rejected") {
  int rejections = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto x = normal_sample(500, 1000 + seed);
    if (dg::shapiro_wilk(x).decision == volq::Decision::RejectNull) ++rejections;
  }
  // 5% level: 40 draws give 2 on average, 8 or more has probability < 0.001.
  CHECK(rejections < 8);
}

TEST_CASE("Shapiro-Wilk subsamples long series") {
  const auto x = normal_sample(12000, 3);
  const auto r = dg::shapiro_wilk(x);
  CHECK(r.subsampled);
  CHECK(r.sample_size == 4000);  // stride ceil(12000 / 5000) = 3
  std::vector<double> every_third;
  for (std::size_t i = 0; i < x.size(); i += 3) every_third.push_back(x[i]);
  CHECK(dg::shapiro_wilk(TimeSeries(every_third)).statistic == r.statistic);
}

TEST_CASE("battery layout") {
  const auto x = normal_sample(600, 4);
  const auto b = dg::run_battery(x);
  const auto rows = b.rows();
  REQUIRE(rows.size() == 9);
  const char* labels[] = {"Chi^2", "W",     "Q(10)", "Q(15)", "Q(20)",
                          "Q(10)", "Q(15)", "Q(20)", "TR^2"};
  const char* residuals[] = {"R", "R", "R", "R", "R", "R^2", "R^2", "R^2", "R"};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].label == labels[i]);
    CHECK(rows[i].residuals == residuals[i]);
  }
  CHECK(rows[0].report == dg::jarque_bera(x));
  CHECK(rows[8].report == dg::lm_arch(x, 12));
  std::vector<double> sq(x.values().begin(), x.values().end());
  for (double& v : sq) v *= v;
  CHECK(rows[6].report == dg::ljung_box(TimeSeries(sq), 15));
  const auto again = dg::run_battery(x).rows();
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(again[i].report == rows[i].report);
}

TEST_CASE("errors") {
  CHECK(code_of([] { dg::jarque_bera(TimeSeries({1.0, 2.0, 3.0})); }) == ErrorCode::TooShort);
  CHECK(code_of([] { dg::shapiro_wilk(TimeSeries({1.0, 2.0})); }) == ErrorCode::TooShort);
  CHECK(code_of([] { dg::jarque_bera(TimeSeries(std::vector<double>(20, 1.0))); }) ==
        ErrorCode::DegenerateVariance);
  CHECK(code_of([] { dg::ljung_box(noise(100), 5, 5); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { dg::lm_arch(noise(10), 12); }) == ErrorCode::TooShort);
  CHECK(code_of([] { dg::jarque_bera(noise(100), 1.5); }) == ErrorCode::InvalidArgument);
}
