#include "volq/pipeline.hpp"

#include <chrono>
#include <ctime>
#include <future>

#include "volq/diagnostics.hpp"
#include "volq/error.hpp"
#include "volq/garch.hpp"
#include "volq/rng.hpp"
#include "volq/sv.hpp"

namespace volq::pipeline {

namespace {

constexpr const char* kModule = "io-cli";

report::StationarityBlock run_stationarity(const TimeSeries& series, const RunOptions& o) {
  stationarity::AdfOptions adf;
  adf.lag = o.lag;
  adf.alpha = o.alpha;
  adf.terms = o.adf_terms;
  stationarity::KpssOptions kpss;
  kpss.lag = o.lag;
  kpss.alpha = o.alpha;
  return report::make_stationarity(stationarity::adf_test(series, adf),
                                   stationarity::kpss_test(series, kpss),
                                   stationarity::to_string(o.adf_terms));
}

garch::GarchFit fit_garch(const TimeSeries& series, const RunOptions& o) {
  garch::FitOptions opts;
  opts.optimizer = o.optimizer;
  return garch::fit(series, o.m, o.n, opts);
}

sv::SvFit fit_sv(const TimeSeries& series, const RunOptions& o) {
  sv::FitOptions opts;
  opts.optimizer = o.optimizer;
  opts.estimate_p1 = o.estimate_p1;
  return sv::fit(series, opts);
}

std::vector<report::DiagnosticsRow> diagnose(const garch::GarchFit& fit,
                                             const TimeSeries& series, const RunOptions& o) {
  diagnostics::BatteryOptions b;
  b.fitdf = o.fitdf;
  b.arch_lag = o.arch_lag;
  b.alpha = o.alpha;
  return report::make_diagnostics(
      diagnostics::run_battery(garch::standardized_residuals(fit, series), b));
}

TimeSeries centred_log_squares(const sv::SvFit& fit, const TimeSeries& series) {
  std::vector<double> x(fit.g.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = fit.g[i] - fit.params.lambda;
  return TimeSeries(std::move(x), series.label() + "-g");
}

void add_garch_forecast(RunResult& out, const garch::GarchFit& fit, const TimeSeries& series,
                        const RunOptions& o) {
  if (!fit.converged) return;
  ForecastPath path = garch::forecast(fit, series, o.horizon);
  out.report.forecast = report::make_forecast(path, "garch");
  out.forecast = std::move(path);
  out.observed = series;
}

void add_sv_forecast(RunResult& out, const sv::SvFit& fit, const TimeSeries& series,
                     const RunOptions& o) {
  if (!fit.converged) return;
  ForecastPath path = sv::predict(fit, o.horizon);
  out.report.forecast = report::make_forecast(path, "sv");
  out.forecast = std::move(path);
  out.observed = centred_log_squares(fit, series);
}

}  // namespace

const char* to_string(Command command) noexcept {
  switch (command) {
    case Command::Stationarity: return "stationarity";
    case Command::FitGarch: return "fit-garch";
    case Command::FitSv: return "fit-sv";
    case Command::Forecast: return "forecast";
    case Command::Diagnose: return "diagnose";
    case Command::Report: return "report";
  }
  return "unknown";
}

std::optional<Command> command_from_string(const std::string& name) {
  for (Command c : {Command::Stationarity, Command::FitGarch, Command::FitSv,
                    Command::Forecast, Command::Diagnose, Command::Report}) {
    if (name == to_string(c)) return c;
  }
  return std::nullopt;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RunResult run(Command command, const TimeSeries& series, const RunOptions& o,
              const std::string& input_digest) {
  if (!(o.alpha > 0.0 && o.alpha < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, kModule, "run", "alpha must lie in (0, 1)");
  }
  if (o.m < 1) {
    throw Error(ErrorCode::InvalidArgument, kModule, "run", "GARCH order m must be >= 1");
  }

  RunResult out;
  report::Metadata& meta = out.report.metadata;
  meta.command = to_string(command);
  meta.timestamp = o.timestamp;
  meta.input_digest = input_digest;
  meta.generator = Rng::kIdentity;
  meta.label = series.label();
  meta.n = series.size();

  switch (command) {
    case Command::Stationarity:
      out.report.stationarity = run_stationarity(series, o);
      break;

    case Command::FitGarch: {
      const garch::GarchFit fit = fit_garch(series, o);
      out.report.garch = report::make_garch(fit);
      out.converged = fit.converged;
      break;
    }

    case Command::FitSv: {
      const sv::SvFit fit = fit_sv(series, o);
      out.report.sv = report::make_sv(fit);
      out.converged = fit.converged;
      break;
    }

    case Command::Forecast:
      if (o.model == Model::Garch) {
        const garch::GarchFit fit = fit_garch(series, o);
        out.report.garch = report::make_garch(fit);
        out.converged = fit.converged;
        add_garch_forecast(out, fit, series, o);
      } else {
        const sv::SvFit fit = fit_sv(series, o);
        out.report.sv = report::make_sv(fit);
        out.converged = fit.converged;
        add_sv_forecast(out, fit, series, o);
      }
      break;

    case Command::Diagnose: {
      if (o.model != Model::Garch) {
        throw Error(ErrorCode::InvalidArgument, kModule, "diagnose",
                    "standardized residuals are defined for the GARCH model only");
      }
      const garch::GarchFit fit = fit_garch(series, o);
      out.report.garch = report::make_garch(fit);
      out.converged = fit.converged;
      if (fit.converged) out.report.diagnostics = diagnose(fit, series, o);
      break;
    }

    case Command::Report: {
      auto sv_job = std::async(std::launch::async, [&] { return fit_sv(series, o); });
      out.report.stationarity = run_stationarity(series, o);
      const garch::GarchFit gfit = fit_garch(series, o);
      const sv::SvFit sfit = sv_job.get();
      out.report.garch = report::make_garch(gfit);
      out.report.sv = report::make_sv(sfit);
      out.converged = gfit.converged && sfit.converged;
      if (gfit.converged) out.report.diagnostics = diagnose(gfit, series, o);
      if (o.model == Model::Garch) {
        add_garch_forecast(out, gfit, series, o);
      } else {
        add_sv_forecast(out, sfit, series, o);
      }
      break;
    }
  }
  return out;
}

}  // namespace volq::pipeline
