// volq command-line front end. Talks to the library only through volq.h.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "volq/volq.h"

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kConvergence = 3 };

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

Level log_level() {
  const char* env = std::getenv("VOLQ_LOG");
  if (!env) return Level::Warn;
  const std::string v = env;
  if (v == "error") return Level::Error;
  if (v == "info") return Level::Info;
  if (v == "debug") return Level::Debug;
  return Level::Warn;
}

void log(Level level, const std::string& msg) {
  static const Level threshold = log_level();
  if (level > threshold) return;
  static const char* names[] = {"error", "warn", "info", "debug"};
  std::fprintf(stderr, "volq [%s] %s\n", names[static_cast<int>(level)], msg.c_str());
}

int exit_for(volq_status status) {
  switch (status) {
    case VOLQ_OK: return kOk;
    case VOLQ_ERR_INVALID_ARGUMENT: return kUsage;
    case VOLQ_ERR_NON_CONVERGENCE: return kConvergence;
    default: return kData;
  }
}

int fail(const char* stage, volq_status status) {
  log(Level::Error, std::string(stage) + " failed: " + volq_last_error_message());
  return exit_for(status);
}

bool write_output(const std::string& path, const char* data, size_t length) {
  if (path.empty() || path == "-") {
    std::fwrite(data, 1, length, stdout);
    std::fflush(stdout);
    return true;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out.write(data, static_cast<std::streamsize>(length));
  return static_cast<bool>(out);
}

struct AnalyzeArgs {
  std::string input;
  std::string column;
  std::string output;
  std::string plot_data;
  std::string format = "json";
  std::string model = "garch";
  std::string adf_terms = "trend";
  bool no_header = false;
  bool no_timestamp = false;
  volq_options options{};
  long lag = -1;
};

struct SimArgs {
  std::string kind = "garch";
  std::string output;
  volq_sim_options options{};
};

void add_analyze_flags(CLI::App& cmd, AnalyzeArgs& a, volq_command command) {
  cmd.add_option("--input", a.input, "Input CSV file")->required();
  cmd.add_option("--column", a.column, "Column name or 0-based index (default: first non-timestamp)");
  cmd.add_flag("--no-header", a.no_header, "Input has no header row");
  cmd.add_option("--output", a.output, "Output file (default: stdout)");
  cmd.add_option("--format", a.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd.add_flag("--no-timestamp", a.no_timestamp, "Omit the timestamp from the report");
  cmd.add_option("--alpha", a.options.alpha, "Significance level")
      ->check(CLI::Range(0.0, 1.0));
  cmd.add_option("--max-iter", a.options.max_iter, "Optimizer iteration cap")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--grad-tol", a.options.grad_tol, "Optimizer gradient tolerance")
      ->check(CLI::PositiveNumber);
  if (command == VOLQ_CMD_STATIONARITY || command == VOLQ_CMD_REPORT) {
    cmd.add_option("--lag", a.lag, "Lag order for ADF and KPSS")->check(CLI::NonNegativeNumber);
    cmd.add_option("--adf-terms", a.adf_terms, "ADF deterministic terms")
        ->check(CLI::IsMember({"none", "drift", "trend"}));
  }
  if (command != VOLQ_CMD_STATIONARITY && command != VOLQ_CMD_FIT_SV) {
    cmd.add_option("--m", a.options.m, "GARCH ARCH order")->check(CLI::PositiveNumber);
    cmd.add_option("--n", a.options.n, "GARCH GARCH order")->check(CLI::NonNegativeNumber);
  }
  if (command == VOLQ_CMD_FORECAST || command == VOLQ_CMD_REPORT) {
    cmd.add_option("--model", a.model, "Model used for the forecast")
        ->check(CLI::IsMember({"garch", "sv"}));
    cmd.add_option("--horizon", a.options.horizon, "Out-of-sample steps")
        ->check(CLI::NonNegativeNumber);
    cmd.add_option("--plot-data", a.plot_data, "Write t,observed,center,lower,upper rows here");
  }
  if (command == VOLQ_CMD_DIAGNOSE || command == VOLQ_CMD_REPORT) {
    cmd.add_option("--fitdf", a.options.fitdf, "Degrees of freedom removed from Ljung-Box");
    cmd.add_option("--arch-lag", a.options.arch_lag, "LM-ARCH lag")->check(CLI::PositiveNumber);
  }
  if (command == VOLQ_CMD_FIT_SV || command == VOLQ_CMD_FORECAST ||
      command == VOLQ_CMD_REPORT) {
    cmd.add_flag("--estimate-p1", a.options.estimate_p1, "Estimate the mixture weight");
  }
}

int run_analyze(volq_command command, AnalyzeArgs& a) {
  a.options.lag = a.lag;
  a.options.model = a.model == "sv" ? VOLQ_MODEL_SV : VOLQ_MODEL_GARCH;
  a.options.adf_terms = a.adf_terms == "none"    ? VOLQ_ADF_NONE
                        : a.adf_terms == "drift" ? VOLQ_ADF_DRIFT
                                                 : VOLQ_ADF_TREND;
  a.options.include_timestamp = a.no_timestamp ? 0 : 1;

  volq_series* series = nullptr;
  volq_status st = volq_series_load_csv(a.input.c_str(), a.column.c_str(), a.no_header ? 0 : 1,
                                        &series);
  if (st != VOLQ_OK) return fail("load_csv", st);
  log(Level::Info, "loaded " + std::to_string(volq_series_length(series)) + " values from " +
                       a.input);

  volq_report* report = nullptr;
  st = volq_analyze(command, series, &a.options, &report);
  volq_series_free(series);
  if (st != VOLQ_OK) return fail("analysis", st);

  char* text = nullptr;
  size_t length = 0;
  st = volq_report_render(report,
                          a.format == "csv" ? VOLQ_FORMAT_CSV : VOLQ_FORMAT_JSON, &text,
                          &length);
  if (st != VOLQ_OK) {
    volq_report_free(report);
    return fail("emit_report", st);
  }
  const bool written = write_output(a.output, text, length);
  volq_string_free(text);
  if (!written) {
    volq_report_free(report);
    log(Level::Error, "emit_report failed: cannot write '" + a.output + "'");
    return kData;
  }

  if (!a.plot_data.empty()) {
    if (!volq_report_has_forecast(report)) {
      log(Level::Warn, "no forecast was produced; plot data not written");
    } else {
      st = volq_report_plot_csv(report, &text, &length);
      if (st != VOLQ_OK) {
        volq_report_free(report);
        return fail("emit_plot_data", st);
      }
      const bool ok = write_output(a.plot_data, text, length);
      volq_string_free(text);
      if (!ok) {
        volq_report_free(report);
        log(Level::Error, "emit_plot_data failed: cannot write '" + a.plot_data + "'");
        return kData;
      }
    }
  }

  const bool converged = volq_report_converged(report) != 0;
  volq_report_free(report);
  if (!converged) {
    log(Level::Error, "fit did not converge; report written with converged=false");
    return kConvergence;
  }
  return kOk;
}

int run_simulate(SimArgs& s) {
  static const std::map<std::string, volq_sim_kind> kinds = {
      {"garch", VOLQ_SIM_GARCH},
      {"sv", VOLQ_SIM_SV},
      {"white_noise", VOLQ_SIM_WHITE_NOISE},
      {"random_walk", VOLQ_SIM_RANDOM_WALK},
      {"ar1", VOLQ_SIM_AR1}};
  s.options.kind = kinds.at(s.kind);
  char* text = nullptr;
  size_t length = 0;
  const volq_status st = volq_simulate_csv(&s.options, &text, &length);
  if (st != VOLQ_OK) return fail("simulate", st);
  const bool ok = write_output(s.output, text, length);
  volq_string_free(text);
  if (!ok) {
    log(Level::Error, "simulate failed: cannot write '" + s.output + "'");
    return kData;
  }
  log(Level::Info, "simulated " + std::to_string(s.options.n) + " values (" + s.kind + ")");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"volq: GARCH and stochastic-volatility modeling"};
  app.set_version_flag("--version", std::string(volq_version()));
  app.require_subcommand(1);

  static const std::pair<const char*, volq_command> commands[] = {
      {"stationarity", VOLQ_CMD_STATIONARITY}, {"fit-garch", VOLQ_CMD_FIT_GARCH},
      {"fit-sv", VOLQ_CMD_FIT_SV},             {"forecast", VOLQ_CMD_FORECAST},
      {"diagnose", VOLQ_CMD_DIAGNOSE},         {"report", VOLQ_CMD_REPORT}};
  static const char* descriptions[] = {
      "ADF and KPSS tests",
      "Fit GARCH(m,n) by maximum likelihood",
      "Fit the mixture-noise stochastic-volatility model",
      "Fit a model and emit +-2 standard-error bands",
      "Residual test battery on GARCH standardized residuals",
      "Stationarity, both fits, diagnostics and a forecast in one document"};

  AnalyzeArgs analyze[6];
  CLI::App* subs[6];
  for (int i = 0; i < 6; ++i) {
    volq_options_init(&analyze[i].options);
    subs[i] = app.add_subcommand(commands[i].first, descriptions[i]);
    add_analyze_flags(*subs[i], analyze[i], commands[i].second);
  }

  SimArgs sim;
  volq_sim_options_init(&sim.options);
  CLI::App* simulate = app.add_subcommand("simulate", "Write a seeded synthetic series as CSV");
  simulate->add_option("--kind", sim.kind, "Generator")
      ->check(CLI::IsMember({"garch", "sv", "white_noise", "random_walk", "ar1"}));
  simulate->add_option("--n", sim.options.n, "Series length")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.options.seed, "Generator seed");
  simulate->add_option("--burn-in", sim.options.burn_in, "Discarded leading draws");
  simulate->add_option("--output", sim.output, "Output file (default: stdout)");
  simulate->add_option("--a0", sim.options.a0, "GARCH a0");
  simulate->add_option("--a1", sim.options.a1, "GARCH a1");
  simulate->add_option("--b1", sim.options.b1, "GARCH b1");
  simulate->add_option("--alpha0", sim.options.alpha0, "SV alpha0");
  simulate->add_option("--alpha1", sim.options.alpha1, "SV alpha1");
  simulate->add_option("--sigma-w", sim.options.sigma_w, "SV state noise scale");
  simulate->add_option("--lambda", sim.options.lambda, "SV observation offset");
  simulate->add_option("--sigma0", sim.options.sigma0, "SV component 0 scale");
  simulate->add_option("--phi1", sim.options.phi1, "SV component 1 mean");
  simulate->add_option("--sigma1", sim.options.sigma1, "SV component 1 scale");
  simulate->add_option("--p1", sim.options.p1, "SV component 1 probability");
  simulate->add_option("--sigma", sim.options.sigma, "Noise scale (white_noise, random_walk, ar1)");
  simulate->add_option("--c", sim.options.c, "AR(1) intercept");
  simulate->add_option("--phi", sim.options.phi, "AR(1) coefficient");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kUsage;
  }

  if (simulate->parsed()) return run_simulate(sim);
  for (int i = 0; i < 6; ++i) {
    if (subs[i]->parsed()) return run_analyze(commands[i].second, analyze[i]);
  }
  return kUsage;
}
