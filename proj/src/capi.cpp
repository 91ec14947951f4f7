#include "volq/volq.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "volq/error.hpp"
#include "volq/io.hpp"
#include "volq/pipeline.hpp"
#include "volq/report.hpp"
#include "volq/simulate.hpp"

struct volq_series {
  volq::TimeSeries series;
  std::string digest;
};

struct volq_report {
  volq::pipeline::RunResult result;
};

namespace {

thread_local std::string last_error;

volq_status status_of(volq::ErrorCode code) {
  using volq::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return VOLQ_ERR_INVALID_ARGUMENT;
    case ErrorCode::TooShort: return VOLQ_ERR_TOO_SHORT;
    case ErrorCode::NonPositiveValue: return VOLQ_ERR_NON_POSITIVE_VALUE;
    case ErrorCode::NonFiniteValue: return VOLQ_ERR_NON_FINITE_VALUE;
    case ErrorCode::DegenerateVariance: return VOLQ_ERR_DEGENERATE_VARIANCE;
    case ErrorCode::SingularRegression: return VOLQ_ERR_SINGULAR_REGRESSION;
    case ErrorCode::SingularHessian: return VOLQ_ERR_SINGULAR_HESSIAN;
    case ErrorCode::InvalidParams: return VOLQ_ERR_INVALID_PARAMS;
    case ErrorCode::InvalidFit: return VOLQ_ERR_INVALID_FIT;
    case ErrorCode::NonConvergence: return VOLQ_ERR_NON_CONVERGENCE;
    case ErrorCode::NonFiniteObjective: return VOLQ_ERR_NON_FINITE_OBJECTIVE;
    case ErrorCode::NumericalOverflow: return VOLQ_ERR_NUMERICAL_OVERFLOW;
    case ErrorCode::LengthMismatch: return VOLQ_ERR_LENGTH_MISMATCH;
    case ErrorCode::FileNotFound: return VOLQ_ERR_FILE_NOT_FOUND;
    case ErrorCode::ParseError: return VOLQ_ERR_PARSE;
  }
  return VOLQ_ERR_INTERNAL;
}

template <class F>
volq_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return VOLQ_OK;
  } catch (const volq::Error& e) {
    last_error = std::string(volq::to_string(e.code())) + " in " + e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return VOLQ_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return VOLQ_ERR_INTERNAL;
  }
}

volq_status invalid(const char* op, const char* detail) {
  last_error = std::string("InvalidArgument in io-cli/") + op + ": " + detail;
  return VOLQ_ERR_INVALID_ARGUMENT;
}

void hand_out(const std::string& s, char** out, size_t* length) {
  char* buf = static_cast<char*>(std::malloc(s.size() + 1));
  if (!buf) throw std::bad_alloc();
  std::memcpy(buf, s.data(), s.size());
  buf[s.size()] = '\0';
  *out = buf;
  if (length) *length = s.size();
}

volq::pipeline::RunOptions run_options(const volq_options& o) {
  using namespace volq;
  pipeline::RunOptions r;
  r.m = o.m;
  r.n = o.n;
  if (o.lag >= 0) r.lag = static_cast<std::size_t>(o.lag);
  r.alpha = o.alpha;
  r.horizon = o.horizon;
  r.model = o.model == VOLQ_MODEL_SV ? pipeline::Model::Sv : pipeline::Model::Garch;
  switch (o.adf_terms) {
    case VOLQ_ADF_NONE: r.adf_terms = stationarity::AdfTerms::None; break;
    case VOLQ_ADF_DRIFT: r.adf_terms = stationarity::AdfTerms::Drift; break;
    default: r.adf_terms = stationarity::AdfTerms::Trend; break;
  }
  r.fitdf = o.fitdf;
  r.arch_lag = o.arch_lag;
  r.estimate_p1 = o.estimate_p1 != 0;
  if (o.max_iter <= 0) {
    throw Error(ErrorCode::InvalidArgument, "io-cli", "run_config", "max_iter must be > 0");
  }
  if (!(o.grad_tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "io-cli", "run_config", "grad_tol must be > 0");
  }
  r.optimizer.max_iter = o.max_iter;
  r.optimizer.grad_tol = o.grad_tol;
  if (o.include_timestamp) r.timestamp = pipeline::utc_timestamp();
  return r;
}

volq::pipeline::Command command_of(volq_command c) {
  using volq::pipeline::Command;
  switch (c) {
    case VOLQ_CMD_STATIONARITY: return Command::Stationarity;
    case VOLQ_CMD_FIT_GARCH: return Command::FitGarch;
    case VOLQ_CMD_FIT_SV: return Command::FitSv;
    case VOLQ_CMD_FORECAST: return Command::Forecast;
    case VOLQ_CMD_DIAGNOSE: return Command::Diagnose;
    case VOLQ_CMD_REPORT: return Command::Report;
  }
  throw volq::Error(volq::ErrorCode::InvalidArgument, "io-cli", "run_config",
                    "unknown command");
}

volq::simulate::SimSpec sim_spec(const volq_sim_options& o) {
  using namespace volq;
  simulate::SimSpec spec;
  spec.n = o.n;
  spec.seed = o.seed;
  spec.burn_in = o.burn_in;
  switch (o.kind) {
    case VOLQ_SIM_GARCH: {
      spec.kind = simulate::Kind::Garch;
      garch::GarchModel g;
      g.a0 = o.a0;
      g.a = {o.a1};
      g.b = {o.b1};
      spec.params = g;
      break;
    }
    case VOLQ_SIM_SV: {
      spec.kind = simulate::Kind::Sv;
      spec.params = sv::SvParams{o.alpha0, o.alpha1, o.sigma_w, o.lambda,
                                 o.sigma0, o.phi1,   o.sigma1,  o.p1};
      break;
    }
    case VOLQ_SIM_WHITE_NOISE:
    case VOLQ_SIM_RANDOM_WALK:
      spec.kind = o.kind == VOLQ_SIM_WHITE_NOISE ? simulate::Kind::WhiteNoise
                                                 : simulate::Kind::RandomWalk;
      spec.params = simulate::NoiseParams{o.sigma};
      break;
    case VOLQ_SIM_AR1:
      spec.kind = simulate::Kind::Ar1;
      spec.params = simulate::Ar1Params{o.c, o.phi, o.sigma};
      break;
    default:
      throw Error(ErrorCode::InvalidArgument, "simulate", "simulate", "unknown kind");
  }
  return spec;
}

}  // namespace

extern "C" {

const char* volq_version(void) { return volq::report::kLibraryVersion; }

const char* volq_status_string(volq_status status) {
  switch (status) {
    case VOLQ_OK: return "ok";
    case VOLQ_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case VOLQ_ERR_TOO_SHORT: return "TooShort";
    case VOLQ_ERR_NON_POSITIVE_VALUE: return "NonPositiveValue";
    case VOLQ_ERR_NON_FINITE_VALUE: return "NonFiniteValue";
    case VOLQ_ERR_DEGENERATE_VARIANCE: return "DegenerateVariance";
    case VOLQ_ERR_SINGULAR_REGRESSION: return "SingularRegression";
    case VOLQ_ERR_SINGULAR_HESSIAN: return "SingularHessian";
    case VOLQ_ERR_INVALID_PARAMS: return "InvalidParams";
    case VOLQ_ERR_INVALID_FIT: return "InvalidFit";
    case VOLQ_ERR_NON_CONVERGENCE: return "NonConvergence";
    case VOLQ_ERR_NON_FINITE_OBJECTIVE: return "NonFiniteObjective";
    case VOLQ_ERR_NUMERICAL_OVERFLOW: return "NumericalOverflow";
    case VOLQ_ERR_LENGTH_MISMATCH: return "LengthMismatch";
    case VOLQ_ERR_FILE_NOT_FOUND: return "FileNotFound";
    case VOLQ_ERR_PARSE: return "ParseError";
    case VOLQ_ERR_INTERNAL: return "Internal";
  }
  return "unknown";
}

const char* volq_last_error_message(void) { return last_error.c_str(); }

void volq_options_init(volq_options* o) {
  if (!o) return;
  *o = volq_options{};
  const volq::optim::OptimizerConfig defaults;
  o->m = 1;
  o->n = 1;
  o->lag = -1;
  o->alpha = 0.05;
  o->horizon = 1;
  o->model = VOLQ_MODEL_GARCH;
  o->adf_terms = VOLQ_ADF_TREND;
  o->fitdf = 0;
  o->arch_lag = 12;
  o->estimate_p1 = 0;
  o->max_iter = defaults.max_iter;
  o->grad_tol = defaults.grad_tol;
  o->include_timestamp = 1;
}

void volq_sim_options_init(volq_sim_options* o) {
  if (!o) return;
  *o = volq_sim_options{};
  const volq::sv::SvParams sv;
  o->kind = VOLQ_SIM_GARCH;
  o->n = 1000;
  o->seed = 0;
  o->burn_in = 500;
  o->a0 = 1e-6;
  o->a1 = 0.10;
  o->b1 = 0.85;
  o->alpha0 = -0.2;
  o->alpha1 = 0.9;
  o->sigma_w = 0.5;
  o->lambda = 0.0;
  o->sigma0 = sv.sigma0;
  o->phi1 = sv.phi1;
  o->sigma1 = sv.sigma1;
  o->p1 = sv.p1;
  o->sigma = 1.0;
  o->c = 0.0;
  o->phi = 0.5;
}

volq_status volq_series_from_values(const double* values, size_t n, const char* label,
                                    volq_series** out) {
  if (!out) return invalid("series_from_values", "null output pointer");
  if (!values && n > 0) return invalid("series_from_values", "null values");
  return guarded([&] {
    std::vector<double> v(values, values + n);
    std::string bytes(reinterpret_cast<const char*>(values), n * sizeof(double));
    auto* s = new volq_series{volq::TimeSeries(std::move(v), label ? label : ""),
                              volq::io::digest(bytes)};
    *out = s;
  });
}

volq_status volq_series_load_csv(const char* path, const char* column, int has_header,
                                 volq_series** out) {
  if (!out) return invalid("load_csv", "null output pointer");
  if (!path || !*path) return invalid("load_csv", "input path is empty");
  return guarded([&] {
    const std::string text = volq::io::read_file(path);
    std::string label = path;
    if (auto slash = label.find_last_of('/'); slash != std::string::npos) {
      label = label.substr(slash + 1);
    }
    auto* s = new volq_series{
        volq::io::parse_csv(text, column ? column : "", has_header != 0, label),
        volq::io::digest(text)};
    *out = s;
  });
}

size_t volq_series_length(const volq_series* series) {
  return series ? series->series.size() : 0;
}

const double* volq_series_data(const volq_series* series) {
  return series ? series->series.values().data() : nullptr;
}

const char* volq_series_digest(const volq_series* series) {
  return series ? series->digest.c_str() : "";
}

void volq_series_free(volq_series* series) { delete series; }

volq_status volq_analyze(volq_command command, const volq_series* series,
                         const volq_options* options, volq_report** out) {
  if (!out || !series) return invalid("run", "null series or output pointer");
  return guarded([&] {
    volq_options defaults;
    volq_options_init(&defaults);
    const volq::pipeline::RunOptions opts = run_options(options ? *options : defaults);
    auto* r = new volq_report{
        volq::pipeline::run(command_of(command), series->series, opts, series->digest)};
    *out = r;
  });
}

int volq_report_converged(const volq_report* report) {
  return report && report->result.converged ? 1 : 0;
}

int volq_report_has_forecast(const volq_report* report) {
  return report && report->result.forecast ? 1 : 0;
}

volq_status volq_report_render(const volq_report* report, volq_format format, char** out,
                               size_t* length) {
  if (!report || !out) return invalid("emit_report", "null report or output pointer");
  return guarded([&] {
    const auto f = format == VOLQ_FORMAT_CSV ? volq::report::Format::Csv
                                             : volq::report::Format::Json;
    hand_out(volq::report::emit(report->result.report, f), out, length);
  });
}

volq_status volq_report_plot_csv(const volq_report* report, char** out, size_t* length) {
  if (!report || !out) return invalid("emit_plot_data", "null report or output pointer");
  if (!report->result.forecast || !report->result.observed) {
    return invalid("emit_plot_data", "report carries no forecast");
  }
  return guarded([&] {
    hand_out(volq::io::plot_data_csv(*report->result.forecast, *report->result.observed), out,
             length);
  });
}

void volq_report_free(volq_report* report) { delete report; }

volq_status volq_simulate_csv(const volq_sim_options* options, char** out, size_t* length) {
  if (!options || !out) return invalid("simulate", "null options or output pointer");
  return guarded([&] {
    const volq::simulate::SimSpec spec = sim_spec(*options);
    hand_out(volq::io::simulation_to_csv(volq::simulate::simulate(spec), spec), out, length);
  });
}

void volq_string_free(char* s) { std::free(s); }

}  // extern "C"
