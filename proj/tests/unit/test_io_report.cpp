#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "json.hpp"
#include "volq/error.hpp"
#include "volq/io.hpp"
#include "volq/pipeline.hpp"
#include "volq/report.hpp"
#include "volq/simulate.hpp"

using Catch::Matchers::ContainsSubstring;
using volq::ErrorCode;
using volq::TimeSeries;
namespace io = volq::io;
namespace report = volq::report;
namespace pipeline = volq::pipeline;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const volq::Error& e) {
    return e.code();
  }
  FAIL("expected volq::Error");
  return ErrorCode::InvalidArgument;
}

TimeSeries garch_sample(std::size_t n, std::uint64_t seed) {
  volq::simulate::SimSpec s;
  s.kind = volq::simulate::Kind::Garch;
  volq::garch::GarchModel m;
  m.a0 = 1e-6;
  m.a = {0.1};
  m.b = {0.85};
  s.params = m;
  s.n = n;
  s.seed = seed;
  return volq::simulate::simulate(s).series;
}

std::string to_text(const TimeSeries& x) {
  std::string s = "t,value\n";
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += std::to_string(i + 1) + "," + io::format_double(x[i]) + "\n";
  }
  return s;
}

}  // namespace

TEST_CASE("CSV parsing") {
  SECTION("time and value columns") {
    const auto x = io::parse_csv("t,v\n1,0.5\n2,-0.5\n");
    REQUIRE(x.size() == 2);
    CHECK(x[0] == 0.5);
    CHECK(x[1] == -0.5);
    REQUIRE(x.timestamps());
    CHECK((*x.timestamps())[1] == 2.0);
  }
  SECTION("column by name and by index") {
    const std::string text = "# comment\na,b,c\n\n1,2,3\n4,5,6\n";
    CHECK(io::parse_csv(text, "c")[1] == 6.0);
    CHECK(io::parse_csv(text, "1")[0] == 2.0);
    CHECK(io::parse_csv(text)[0] == 1.0);
    CHECK(code_of([&] { io::parse_csv(text, "zz"); }) == ErrorCode::ParseError);
  }
  SECTION("no header") {
    const auto x = io::parse_csv("1.5\n2.5\n", {}, false);
    CHECK(x.size() == 2);
    CHECK_FALSE(x.timestamps());
  }
  SECTION("errors") {
    CHECK(code_of([] { io::parse_csv(""); }) == ErrorCode::ParseError);
    CHECK(code_of([] { io::parse_csv("t,v\n"); }) == ErrorCode::ParseError);
    CHECK(code_of([] { io::parse_csv("t,v\n1,abc\n"); }) == ErrorCode::ParseError);
    CHECK(code_of([] { io::parse_csv("t,v\n1,nan\n"); }) == ErrorCode::NonFiniteValue);
    CHECK(code_of([] { io::load_csv("/nonexistent/file.csv"); }) == ErrorCode::FileNotFound);
    try {
      io::parse_csv("t,v\n1,0.5\n2,oops\n");
    } catch (const volq::Error& e) {
      // Rows are counted as file lines, header included.
      CHECK_THAT(std::string(e.what()), ContainsSubstring("row 3"));
    }
  }
  SECTION("values round trip through text") {
    const auto x = garch_sample(200, 1);
    const auto back = io::parse_csv(to_text(x));
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(back[i] == x[i]);
  }
}

TEST_CASE("digest and number formatting") {
  CHECK(io::digest("") == "fnv1a64:cbf29ce484222325");
  CHECK(io::digest("a") == "fnv1a64:af63dc4c8601ec8c");
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(-2.0) == "-2");
}

TEST_CASE("simulation CSV") {
  volq::simulate::SimSpec s;
  s.kind = volq::simulate::Kind::WhiteNoise;
  s.n = 5;
  s.seed = 3;
  const auto r = volq::simulate::simulate(s);
  const std::string text = io::simulation_to_csv(r, s);
  CHECK_THAT(text, ContainsSubstring("# generator: mt19937_64/u53/polar-normal v1"));
  const auto x = io::parse_csv(text);
  REQUIRE(x.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(x[i] == r.series[i]);
}

TEST_CASE("plot data") {
  volq::ForecastPath p;
  p.scale = volq::ForecastPath::Scale::LogVariance;
  p.center = {1.0, 2.0, 3.0};
  p.half_width = {0.0, 0.0, 0.5};
  p.in_sample = 2;
  const std::string csv = io::plot_data_csv(p, TimeSeries({0.9, 2.1}));
  std::istringstream lines(csv);
  std::string line;
  std::vector<std::string> all;
  while (std::getline(lines, line)) all.push_back(line);
  REQUIRE(all.size() == 4);
  CHECK(all[0] == "t,observed,center,lower,upper");
  CHECK(all[1] == "1,0.9,1,1,1");
  CHECK(all[3] == "3,,3,2.5,3.5");
  CHECK(code_of([&] { io::plot_data_csv(p, TimeSeries({1.0})); }) == ErrorCode::LengthMismatch);
}

TEST_CASE("report JSON round trip") {
  const auto x = garch_sample(1500, 4);
  pipeline::RunOptions o;
  o.horizon = 3;
  o.timestamp = "2026-01-01T00:00:00Z";
  const auto run = pipeline::run(pipeline::Command::Forecast, x, o, "fnv1a64:0");
  REQUIRE(run.converged);
  const std::string text = report::to_json(run.report);
  const report::Report back = report::from_json(text);
  CHECK(back == run.report);
  CHECK(report::to_json(back) == text);

  const auto j = nlohmann::ordered_json::parse(text);
  CHECK(j["metadata"]["command"] == "forecast");
  CHECK(j["forecast"]["rows"].size() == 1503);
  std::vector<std::string> names;
  for (const auto& row : j["garch"]["parameters"]) names.push_back(row["parameter"]);
  CHECK(names == std::vector<std::string>{"a0", "a1", "b1"});

  SECTION("timestamp is omitted when absent") {
    auto r = run.report;
    r.metadata.timestamp.reset();
    CHECK_FALSE(nlohmann::ordered_json::parse(report::to_json(r))["metadata"].contains("timestamp"));
  }
  SECTION("empty forecast keeps an empty row list") {
    auto r = run.report;
    r.forecast->rows.clear();
    CHECK_THAT(report::to_json(r), ContainsSubstring("\"rows\": []"));
    CHECK(report::from_json(report::to_json(r)) == r);
  }
  SECTION("CSV form is long format") {
    const std::string csv = report::emit(run.report, report::Format::Csv);
    CHECK(csv.rfind("section,row,field,value\n", 0) == 0);
    CHECK_THAT(csv, ContainsSubstring("garch,"));
  }
  SECTION("malformed input") {
    CHECK(code_of([] { report::from_json("{not json"); }) == ErrorCode::ParseError);
  }
}

TEST_CASE("tiny p-values display as zero with the raw value kept") {
  volq::diagnostics::DiagnosticsBattery b;
  b.jb.test_name = volq::TestName::JB;
  b.jb.p_value = 1e-30;
  b.sw.test_name = volq::TestName::SW;
  b.lm_arch.test_name = volq::TestName::LMARCH;
  report::Report r;
  r.diagnostics = report::make_diagnostics(b);
  const auto j = nlohmann::ordered_json::parse(report::to_json(r));
  CHECK(j["diagnostics"][0]["p_value"] == 0.0);
  CHECK(j["diagnostics"][0]["p_value_raw"] == 1e-30);
  CHECK(report::from_json(report::to_json(r)) == r);
}

TEST_CASE("pipeline commands") {
  const auto x = garch_sample(1200, 5);
  pipeline::RunOptions o;
  SECTION("stationarity only fills its block") {
    const auto r = pipeline::run(pipeline::Command::Stationarity, x, o, "d");
    CHECK(r.report.stationarity);
    CHECK_FALSE(r.report.garch);
    CHECK(r.report.metadata.n == 1200);
    CHECK(r.report.metadata.input_digest == "d");
  }
  SECTION("diagnose runs the residual battery") {
    const auto r = pipeline::run(pipeline::Command::Diagnose, x, o, "d");
    REQUIRE(r.report.diagnostics);
    CHECK(r.report.diagnostics->size() == 9);
  }
  SECTION("diagnose rejects the SV model") {
    o.model = pipeline::Model::Sv;
    CHECK(code_of([&] { pipeline::run(pipeline::Command::Diagnose, x, o, "d"); }) ==
          ErrorCode::InvalidArgument);
  }
  SECTION("unconverged fits produce no forecast") {
    o.optimizer.max_iter = 1;
    const auto r = pipeline::run(pipeline::Command::Forecast, x, o, "d");
    CHECK_FALSE(r.converged);
    CHECK_FALSE(r.forecast);
    CHECK(r.report.garch);
  }
  SECTION("command names") {
    for (auto c : {pipeline::Command::Stationarity, pipeline::Command::FitGarch,
                   pipeline::Command::FitSv, pipeline::Command::Forecast,
                   pipeline::Command::Diagnose, pipeline::Command::Report}) {
      CHECK(pipeline::command_from_string(pipeline::to_string(c)) == c);
    }
  }
}
