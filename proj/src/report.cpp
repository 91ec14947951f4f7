#include "volq/report.hpp"

#include <cmath>
#include <limits>

#include "json.hpp"
#include "volq/error.hpp"

namespace volq::report {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kModule = "io-cli";

json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

double read_number(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

template <class Enum, std::size_t N>
Enum enum_from(const std::string& s, const Enum (&all)[N], const char* what) {
  for (Enum e : all) {
    if (s == to_string(e)) return e;
  }
  throw Error(ErrorCode::ParseError, kModule, "parse_report",
              std::string("unknown ") + what + " '" + s + "'");
}

constexpr TestName kTestNames[] = {TestName::ADF, TestName::KPSS, TestName::JB,
                                   TestName::SW,  TestName::LB,   TestName::LMARCH};
constexpr PClamp kClamps[] = {PClamp::None, PClamp::AtLower, PClamp::AtUpper};
constexpr Decision kDecisions[] = {Decision::RejectNull, Decision::FailToReject};

json test_json(const TestReport& r) {
  json j;
  j["test"] = to_string(r.test_name);
  j["statistic"] = number(r.statistic);
  j["p_value"] = number(r.p_value);
  j["p_clamped"] = to_string(r.p_clamped);
  j["lag"] = r.lag;
  j["df"] = number(r.df);
  j["sample_size"] = r.sample_size;
  j["subsampled"] = r.subsampled;
  j["decision"] = to_string(r.decision);
  j["alpha"] = number(r.alpha);
  return j;
}

TestReport test_from(const json& j) {
  TestReport r;
  r.test_name = enum_from(j.at("test").get<std::string>(), kTestNames, "test");
  r.statistic = read_number(j.at("statistic"));
  r.p_value = read_number(j.contains("p_value_raw") ? j.at("p_value_raw") : j.at("p_value"));
  r.p_clamped = enum_from(j.at("p_clamped").get<std::string>(), kClamps, "clamp flag");
  r.lag = j.at("lag").get<std::size_t>();
  r.df = read_number(j.at("df"));
  r.sample_size = j.at("sample_size").get<std::size_t>();
  r.subsampled = j.at("subsampled").get<bool>();
  r.decision = enum_from(j.at("decision").get<std::string>(), kDecisions, "decision");
  r.alpha = read_number(j.at("alpha"));
  return r;
}

json build(const Report& r) {
  json root;
  json& meta = root["metadata"];
  meta["command"] = r.metadata.command;
  if (r.metadata.timestamp) meta["timestamp"] = *r.metadata.timestamp;
  meta["input_digest"] = r.metadata.input_digest;
  meta["library_version"] = r.metadata.library_version;
  meta["generator"] = r.metadata.generator;
  meta["label"] = r.metadata.label;
  meta["n"] = r.metadata.n;

  if (r.stationarity) {
    json& s = root["stationarity"];
    s["adf_terms"] = r.stationarity->adf_terms;
    s["adf"] = test_json(r.stationarity->adf);
    s["kpss"] = test_json(r.stationarity->kpss);
  }

  if (r.garch) {
    const GarchBlock& g = *r.garch;
    json& j = root["garch"];
    j["m"] = g.m;
    j["n"] = g.n;
    j["parameters"] = json::array();
    for (const ParameterRow& p : g.parameters) {
      json row;
      row["parameter"] = p.name;
      row["estimate"] = number(p.estimate);
      row["error"] = number(p.error);
      row["t_statistic"] = number(p.t_statistic);
      row["p_value"] = number(p.p_value);
      row["error_valid"] = p.error_valid;
      j["parameters"].push_back(std::move(row));
    }
    j["loglik"] = number(g.loglik);
    j["persistence"] = number(g.persistence);
    j["stationary"] = g.stationary;
    j["converged"] = g.converged;
    j["stop_reason"] = g.stop_reason;
    j["iterations"] = g.iterations;
    j["gradient_norm"] = number(g.gradient_norm);
  }

  if (r.sv) {
    const SvBlock& s = *r.sv;
    json& j = root["sv"];
    j["parameters"] = json::array();
    for (const SvRow& p : s.parameters) {
      json row;
      row["parameter"] = p.name;
      row["estimate"] = number(p.estimate);
      row["standard_error"] = number(p.standard_error);
      row["estimated"] = p.estimated;
      j["parameters"].push_back(std::move(row));
    }
    j["p1"] = number(s.p1);
    j["p1_estimated"] = s.p1_estimated;
    j["loglik"] = number(s.loglik);
    j["stationary"] = s.stationary;
    j["converged"] = s.converged;
    j["stop_reason"] = s.stop_reason;
    j["iterations"] = s.iterations;
    j["gradient_norm"] = number(s.gradient_norm);
    j["clamped_variances"] = s.clamped_variances;
  }

  if (r.diagnostics) {
    json& j = root["diagnostics"];
    j = json::array();
    for (const DiagnosticsRow& d : *r.diagnostics) {
      json row;
      row["test"] = d.test;
      row["residuals"] = d.residuals;
      row["label"] = d.label;
      json t = test_json(d.report);
      t.erase("test");
      row["name"] = to_string(d.report.test_name);
      for (auto& [k, v] : t.items()) row[k] = v;
      const double p = d.report.p_value;
      row["p_value"] = number(p < kDisplayZeroP ? 0.0 : p);
      row["p_value_raw"] = number(p);
      j.push_back(std::move(row));
    }
  }

  if (r.forecast) {
    json& j = root["forecast"];
    j["model"] = r.forecast->model;
    j["scale"] = r.forecast->scale;
    j["rows"] = json::array();
    for (const ForecastRow& f : r.forecast->rows) {
      json row;
      row["t"] = f.t;
      row["in_sample"] = f.in_sample;
      row["center"] = number(f.center);
      row["half_width"] = number(f.half_width);
      row["lower"] = number(f.lower);
      row["upper"] = number(f.upper);
      j["rows"].push_back(std::move(row));
    }
  }
  return root;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_value(const json& v) {
  if (v.is_string()) return csv_cell(v.get<std::string>());
  if (v.is_null()) return "";
  return v.dump();
}

void emit_object(std::string& out, const std::string& section, const std::string& row,
                 const json& obj) {
  for (const auto& [key, value] : obj.items()) {
    out += csv_cell(section) + ',' + csv_cell(row) + ',' + csv_cell(key) + ',' +
           csv_value(value) + '\n';
  }
}

}  // namespace

StationarityBlock make_stationarity(const TestReport& adf, const TestReport& kpss,
                                    std::string adf_terms) {
  return {adf, kpss, std::move(adf_terms)};
}

GarchBlock make_garch(const garch::GarchFit& fit) {
  GarchBlock b;
  b.m = fit.model.order_m();
  b.n = fit.model.order_n();
  const auto names = fit.model.parameter_names();
  const auto values = fit.model.parameters();
  for (std::size_t i = 0; i < names.size(); ++i) {
    ParameterRow row;
    row.name = names[i];
    row.estimate = values[i];
    if (i < fit.std_errors.size()) {
      row.error = fit.std_errors[i];
      row.error_valid = fit.std_errors_valid[i];
      row.t_statistic = fit.t_stats[i];
      row.p_value = fit.p_values[i];
    } else {
      row.error_valid = false;
    }
    b.parameters.push_back(std::move(row));
  }
  b.loglik = fit.loglik;
  b.persistence = fit.model.persistence();
  b.stationary = fit.model.is_stationary();
  b.converged = fit.converged;
  b.stop_reason = optim::to_string(fit.stop_reason);
  b.iterations = fit.iterations;
  b.gradient_norm = fit.gradient_norm;
  return b;
}

SvBlock make_sv(const sv::SvFit& fit) {
  SvBlock b;
  const sv::SvParams& p = fit.params;
  const double est[7] = {p.alpha0, p.alpha1, p.sigma_w, p.lambda, p.sigma0, p.phi1, p.sigma1};
  for (std::size_t i = 0; i < sv::kParameterNames.size(); ++i) {
    SvRow row;
    row.name = sv::kParameterNames[i];
    row.estimate = est[i];
    row.standard_error = fit.std_errors[i];
    row.estimated = i != 3 || fit.lambda_estimated;
    b.parameters.push_back(std::move(row));
  }
  b.p1 = p.p1;
  b.p1_estimated = fit.p1_estimated;
  b.loglik = fit.loglik;
  b.stationary = p.is_stationary();
  b.converged = fit.converged;
  b.stop_reason = optim::to_string(fit.stop_reason);
  b.iterations = fit.iterations;
  b.gradient_norm = fit.gradient_norm;
  b.clamped_variances = fit.filter.clamped_variances;
  return b;
}

std::vector<DiagnosticsRow> make_diagnostics(const diagnostics::DiagnosticsBattery& battery) {
  std::vector<DiagnosticsRow> out;
  for (const auto& row : battery.rows()) {
    out.push_back({row.test, row.residuals, row.label, row.report});
  }
  return out;
}

ForecastBlock make_forecast(const ForecastPath& path, std::string model) {
  ForecastBlock b;
  b.model = std::move(model);
  b.scale = to_string(path.scale);
  for (std::size_t i = 0; i < path.size(); ++i) {
    b.rows.push_back({i + 1, i < path.in_sample, path.center[i], path.half_width[i],
                      path.lower(i), path.upper(i)});
  }
  return b;
}

std::optional<Format> format_from_string(const std::string& name) {
  if (name == "json") return Format::Json;
  if (name == "csv") return Format::Csv;
  return std::nullopt;
}

std::string to_json(const Report& report) { return build(report).dump(2) + "\n"; }

std::string to_csv(const Report& report) {
  const json root = build(report);
  std::string out = "section,row,field,value\n";
  for (const auto& [section, body] : root.items()) {
    if (section == "metadata") {
      emit_object(out, section, "", body);
    } else if (section == "stationarity") {
      out += "stationarity,,adf_terms," + csv_value(body.at("adf_terms")) + '\n';
      emit_object(out, section, "ADF", body.at("adf"));
      emit_object(out, section, "KPSS", body.at("kpss"));
    } else if (section == "garch" || section == "sv") {
      for (const auto& [key, value] : body.items()) {
        if (key == "parameters") {
          for (const json& row : value) {
            emit_object(out, section, row.at("parameter").get<std::string>(), row);
          }
        } else {
          out += section + ",," + key + ',' + csv_value(value) + '\n';
        }
      }
    } else if (section == "diagnostics") {
      for (const json& row : body) {
        const std::string id = row.at("label").get<std::string>() + "(" +
                               row.at("residuals").get<std::string>() + ")";
        emit_object(out, section, id, row);
      }
    } else if (section == "forecast") {
      out += "forecast,,model," + csv_value(body.at("model")) + '\n';
      out += "forecast,,scale," + csv_value(body.at("scale")) + '\n';
      for (const json& row : body.at("rows")) {
        emit_object(out, section, std::to_string(row.at("t").get<std::size_t>()), row);
      }
    }
  }
  return out;
}

std::string emit(const Report& report, Format format) {
  return format == Format::Json ? to_json(report) : to_csv(report);
}

Report from_json(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, kModule, "parse_report", e.what());
  }
  try {
    Report r;
    const json& meta = root.at("metadata");
    r.metadata.command = meta.at("command").get<std::string>();
    if (meta.contains("timestamp") && !meta.at("timestamp").is_null()) {
      r.metadata.timestamp = meta.at("timestamp").get<std::string>();
    }
    r.metadata.input_digest = meta.at("input_digest").get<std::string>();
    r.metadata.library_version = meta.at("library_version").get<std::string>();
    r.metadata.generator = meta.at("generator").get<std::string>();
    r.metadata.label = meta.at("label").get<std::string>();
    r.metadata.n = meta.at("n").get<std::size_t>();

    if (root.contains("stationarity")) {
      const json& s = root.at("stationarity");
      r.stationarity = StationarityBlock{test_from(s.at("adf")), test_from(s.at("kpss")),
                                         s.at("adf_terms").get<std::string>()};
    }
    if (root.contains("garch")) {
      const json& j = root.at("garch");
      GarchBlock g;
      g.m = j.at("m").get<std::size_t>();
      g.n = j.at("n").get<std::size_t>();
      for (const json& row : j.at("parameters")) {
        g.parameters.push_back({row.at("parameter").get<std::string>(),
                                read_number(row.at("estimate")), read_number(row.at("error")),
                                read_number(row.at("t_statistic")),
                                read_number(row.at("p_value")),
                                row.at("error_valid").get<bool>()});
      }
      g.loglik = read_number(j.at("loglik"));
      g.persistence = read_number(j.at("persistence"));
      g.stationary = j.at("stationary").get<bool>();
      g.converged = j.at("converged").get<bool>();
      g.stop_reason = j.at("stop_reason").get<std::string>();
      g.iterations = j.at("iterations").get<int>();
      g.gradient_norm = read_number(j.at("gradient_norm"));
      r.garch = std::move(g);
    }
    if (root.contains("sv")) {
      const json& j = root.at("sv");
      SvBlock s;
      for (const json& row : j.at("parameters")) {
        s.parameters.push_back({row.at("parameter").get<std::string>(),
                                read_number(row.at("estimate")),
                                read_number(row.at("standard_error")),
                                row.at("estimated").get<bool>()});
      }
      s.p1 = read_number(j.at("p1"));
      s.p1_estimated = j.at("p1_estimated").get<bool>();
      s.loglik = read_number(j.at("loglik"));
      s.stationary = j.at("stationary").get<bool>();
      s.converged = j.at("converged").get<bool>();
      s.stop_reason = j.at("stop_reason").get<std::string>();
      s.iterations = j.at("iterations").get<int>();
      s.gradient_norm = read_number(j.at("gradient_norm"));
      s.clamped_variances = j.at("clamped_variances").get<int>();
      r.sv = std::move(s);
    }
    if (root.contains("diagnostics")) {
      std::vector<DiagnosticsRow> rows;
      for (const json& row : root.at("diagnostics")) {
        json t = row;
        t["test"] = row.at("name");
        rows.push_back({row.at("test").get<std::string>(),
                        row.at("residuals").get<std::string>(),
                        row.at("label").get<std::string>(), test_from(t)});
      }
      r.diagnostics = std::move(rows);
    }
    if (root.contains("forecast")) {
      const json& j = root.at("forecast");
      ForecastBlock f;
      f.model = j.at("model").get<std::string>();
      f.scale = j.at("scale").get<std::string>();
      for (const json& row : j.at("rows")) {
        f.rows.push_back({row.at("t").get<std::size_t>(), row.at("in_sample").get<bool>(),
                          read_number(row.at("center")), read_number(row.at("half_width")),
                          read_number(row.at("lower")), read_number(row.at("upper"))});
      }
      r.forecast = std::move(f);
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, kModule, "parse_report", e.what());
  }
}

}  // namespace volq::report
