// Exercises the shared library through its C interface only.
#include <catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <string>

#include "volq/volq.h"

using Catch::Matchers::ContainsSubstring;

namespace {

std::string simulated_csv(volq_sim_kind kind, size_t n, uint64_t seed) {
  volq_sim_options s;
  volq_sim_options_init(&s);
  s.kind = kind;
  s.n = n;
  s.seed = seed;
  char* out = nullptr;
  size_t len = 0;
  REQUIRE(volq_simulate_csv(&s, &out, &len) == VOLQ_OK);
  std::string text(out, len);
  volq_string_free(out);
  return text;
}

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = "capi_" + name + ".csv";
  FILE* f = std::fopen(path.c_str(), "wb");
  REQUIRE(f);
  std::fwrite(text.data(), 1, text.size(), f);
  std::fclose(f);
  return path;
}

}  // namespace

TEST_CASE("version and status strings") {
  CHECK(std::string(volq_version()) == "0.1.0");
  CHECK(std::string(volq_status_string(VOLQ_OK)) != "");
  CHECK(std::string(volq_status_string(VOLQ_ERR_TOO_SHORT)) !=
        std::string(volq_status_string(VOLQ_ERR_PARSE)));
}

TEST_CASE("series from values") {
  const double v[] = {1.0, 2.0, 3.0};
  volq_series* s = nullptr;
  REQUIRE(volq_series_from_values(v, 3, "x", &s) == VOLQ_OK);
  CHECK(volq_series_length(s) == 3);
  CHECK(volq_series_data(s)[2] == 3.0);
  CHECK(std::string(volq_series_digest(s)).rfind("fnv1a64:", 0) == 0);
  volq_series_free(s);

  const double bad[] = {1.0, NAN};
  volq_series* t = nullptr;
  CHECK(volq_series_from_values(bad, 2, "x", &t) == VOLQ_ERR_NON_FINITE_VALUE);
  CHECK(t == nullptr);
  CHECK_THAT(std::string(volq_last_error_message()), ContainsSubstring("NonFiniteValue"));
  CHECK(volq_series_from_values(nullptr, 2, "x", &t) == VOLQ_ERR_INVALID_ARGUMENT);
}

TEST_CASE("errors map to status codes") {
  volq_series* s = nullptr;
  CHECK(volq_series_load_csv("/no/such/file.csv", nullptr, 1, &s) == VOLQ_ERR_FILE_NOT_FOUND);
  const std::string path = write_temp("bad", "t,v\n1,x\n");
  CHECK(volq_series_load_csv(path.c_str(), nullptr, 1, &s) == VOLQ_ERR_PARSE);

  const double few[] = {0.1, -0.2, 0.3, -0.1, 0.2};
  REQUIRE(volq_series_from_values(few, 5, "few", &s) == VOLQ_OK);
  volq_options o;
  volq_options_init(&o);
  volq_report* r = nullptr;
  CHECK(volq_analyze(VOLQ_CMD_FIT_GARCH, s, &o, &r) == VOLQ_ERR_TOO_SHORT);
  CHECK(r == nullptr);
  volq_series_free(s);
}

TEST_CASE("simulate, load, fit and render") {
  const std::string path = write_temp("garch", simulated_csv(VOLQ_SIM_GARCH, 1500, 7));
  volq_series* s = nullptr;
  REQUIRE(volq_series_load_csv(path.c_str(), nullptr, 1, &s) == VOLQ_OK);
  CHECK(volq_series_length(s) == 1500);

  volq_options o;
  volq_options_init(&o);
  o.include_timestamp = 0;
  o.horizon = 2;
  volq_report* r = nullptr;
  REQUIRE(volq_analyze(VOLQ_CMD_FORECAST, s, &o, &r) == VOLQ_OK);
  CHECK(volq_report_converged(r) == 1);
  CHECK(volq_report_has_forecast(r) == 1);

  char* json = nullptr;
  size_t len = 0;
  REQUIRE(volq_report_render(r, VOLQ_FORMAT_JSON, &json, &len) == VOLQ_OK);
  const std::string text(json, len);
  volq_string_free(json);
  CHECK_THAT(text, ContainsSubstring("\"garch\""));
  CHECK_THAT(text, ContainsSubstring(volq_series_digest(s)));
  CHECK_FALSE(text.find("\"timestamp\"") != std::string::npos);

  char* plot = nullptr;
  REQUIRE(volq_report_plot_csv(r, &plot, &len) == VOLQ_OK);
  const std::string rows(plot, len);
  volq_string_free(plot);
  CHECK(rows.rfind("t,observed,center,lower,upper\n", 0) == 0);

  // Same inputs, same bytes.
  volq_report* again = nullptr;
  REQUIRE(volq_analyze(VOLQ_CMD_FORECAST, s, &o, &again) == VOLQ_OK);
  char* json2 = nullptr;
  REQUIRE(volq_report_render(again, VOLQ_FORMAT_JSON, &json2, &len) == VOLQ_OK);
  CHECK(std::string(json2, len) == text);
  volq_string_free(json2);

  volq_report_free(again);
  volq_report_free(r);
  volq_series_free(s);
}

TEST_CASE("stationarity without a forecast has no plot data") {
  const std::string path = write_temp("wn", simulated_csv(VOLQ_SIM_WHITE_NOISE, 500, 2));
  volq_series* s = nullptr;
  REQUIRE(volq_series_load_csv(path.c_str(), "value", 1, &s) == VOLQ_OK);
  volq_options o;
  volq_options_init(&o);
  volq_report* r = nullptr;
  REQUIRE(volq_analyze(VOLQ_CMD_STATIONARITY, s, &o, &r) == VOLQ_OK);
  CHECK(volq_report_has_forecast(r) == 0);
  char* out = nullptr;
  size_t len = 0;
  CHECK(volq_report_plot_csv(r, &out, &len) != VOLQ_OK);
  REQUIRE(volq_report_render(r, VOLQ_FORMAT_CSV, &out, &len) == VOLQ_OK);
  CHECK(std::string(out, len).rfind("section,row,field,value\n", 0) == 0);
  volq_string_free(out);
  volq_report_free(r);
  volq_series_free(s);
}

TEST_CASE("null handles are rejected, not dereferenced") {
  volq_options o;
  volq_options_init(&o);
  volq_report* r = nullptr;
  CHECK(volq_analyze(VOLQ_CMD_FIT_GARCH, nullptr, &o, &r) == VOLQ_ERR_INVALID_ARGUMENT);
  char* out = nullptr;
  size_t len = 0;
  CHECK(volq_report_render(nullptr, VOLQ_FORMAT_JSON, &out, &len) == VOLQ_ERR_INVALID_ARGUMENT);
  volq_report_free(nullptr);
  volq_series_free(nullptr);
  volq_string_free(nullptr);
}
