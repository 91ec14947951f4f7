#include "volq/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "volq/error.hpp"
#include "volq/rng.hpp"

namespace volq::io {

namespace {

constexpr const char* kModule = "io-cli";

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

bool parse_number(std::string_view cell, double& out) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return false;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc() && ptr == cell.data() + cell.size();
}

bool is_index(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

struct Line {
  std::size_t number;  // 1-based line in the input
  std::vector<std::string_view> cells;
};

}  // namespace

TimeSeries parse_csv(std::string_view text, const std::string& column, bool has_header,
                     const std::string& label) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    const std::string_view raw = trim(text.substr(pos, end - pos));
    if (!raw.empty() && raw.front() != '#') lines.push_back({number, split(raw)});
    if (end == text.size()) break;
    pos = end + 1;
  }
  if (lines.empty() || (has_header && lines.size() < 2)) {
    throw Error(ErrorCode::ParseError, kModule, "load_csv", "no data rows");
  }

  std::vector<std::string> header;
  std::size_t first_data = 0;
  if (has_header) {
    for (auto cell : lines[0].cells) header.emplace_back(cell);
    first_data = 1;
  }
  const std::size_t width = lines[first_data].cells.size();

  auto is_time_name = [](const std::string& h) {
    return h == "t" || h == "time" || h == "timestamp";
  };
  std::optional<std::size_t> time_col;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (is_time_name(header[i])) {
      time_col = i;
      break;
    }
  }

  std::size_t col = 0;
  if (column.empty()) {
    if (time_col && *time_col == 0 && width > 1) col = 1;
  } else {
    auto it = std::find(header.begin(), header.end(), column);
    if (it != header.end()) {
      col = static_cast<std::size_t>(it - header.begin());
    } else if (is_index(column)) {
      col = std::stoul(column);
    } else {
      throw Error(ErrorCode::ParseError, kModule, "load_csv",
                  "column '" + column + "' not found in header");
    }
  }
  if (time_col && *time_col == col) time_col.reset();
  const std::string name =
      has_header && col < header.size() ? header[col] : (column.empty() ? "" : column);

  std::vector<double> values;
  std::vector<double> times;
  bool times_ok = time_col.has_value();
  const std::size_t tc = time_col.value_or(0);
  for (std::size_t i = first_data; i < lines.size(); ++i) {
    const Line& line = lines[i];
    if (col >= line.cells.size()) {
      throw Error(ErrorCode::ParseError, kModule, "load_csv",
                  "row " + std::to_string(line.number) + " has no column " +
                      std::to_string(col));
    }
    double v = 0.0;
    if (!parse_number(line.cells[col], v)) {
      throw Error(ErrorCode::ParseError, kModule, "load_csv",
                  "row " + std::to_string(line.number) + ", column " + std::to_string(col) +
                      ": cannot parse '" + std::string(line.cells[col]) + "'");
    }
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::NonFiniteValue, kModule, "load_csv",
                  "row " + std::to_string(line.number) + ": non-finite value");
    }
    values.push_back(v);
    if (times_ok) {
      double t = 0.0;
      if (tc < line.cells.size() && parse_number(line.cells[tc], t) &&
          std::isfinite(t) && (times.empty() || t > times.back())) {
        times.push_back(t);
      } else {
        times_ok = false;
      }
    }
  }

  std::string series_label = label.empty() ? name : label;
  if (times_ok) return TimeSeries(std::move(values), std::move(times), std::move(series_label));
  return TimeSeries(std::move(values), std::move(series_label));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::FileNotFound, kModule, "load_csv", "cannot open '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

TimeSeries load_csv(const std::string& path, const std::string& column, bool has_header) {
  const std::string text = read_file(path);
  std::string label = path;
  if (auto slash = label.find_last_of('/'); slash != std::string::npos) {
    label = label.substr(slash + 1);
  }
  TimeSeries series = parse_csv(text, column, has_header);
  return series.with_label(series.label().empty() ? label : label + ":" + series.label());
}

std::string digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016" PRIx64, h);
  return buf;
}

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::string simulation_to_csv(const simulate::SimResult& result,
                              const simulate::SimSpec& spec) {
  std::string out = "# generator: " + result.generator + "\n";
  out += "# kind: " + std::string(simulate::to_string(spec.kind)) +
         ", n: " + std::to_string(spec.n) + ", seed: " + std::to_string(spec.seed) +
         ", burn_in: " + std::to_string(spec.burn_in) + "\n";
  out += result.latent ? "t,value,latent\n" : "t,value\n";
  for (std::size_t i = 0; i < result.series.size(); ++i) {
    out += std::to_string(i + 1);
    out += ',';
    out += format_double(result.series[i]);
    if (result.latent) {
      out += ',';
      out += format_double((*result.latent)[i]);
    }
    out += '\n';
  }
  return out;
}

std::string plot_data_csv(const ForecastPath& forecast, const TimeSeries& observed) {
  if (forecast.half_width.size() != forecast.center.size() ||
      observed.size() != forecast.in_sample || forecast.in_sample > forecast.size()) {
    throw Error(ErrorCode::LengthMismatch, kModule, "emit_plot_data",
                "forecast has " + std::to_string(forecast.in_sample) +
                    " in-sample points but the series has " +
                    std::to_string(observed.size()));
  }
  const auto& ts = observed.timestamps();
  std::string out = "t,observed,center,lower,upper\n";
  for (std::size_t i = 0; i < forecast.size(); ++i) {
    if (ts && i < ts->size()) {
      out += format_double((*ts)[i]);
    } else {
      out += std::to_string(i + 1);
    }
    out += ',';
    if (i < observed.size()) out += format_double(observed[i]);
    out += ',';
    out += format_double(forecast.center[i]);
    out += ',';
    out += format_double(forecast.lower(i));
    out += ',';
    out += format_double(forecast.upper(i));
    out += '\n';
  }
  return out;
}

}  // namespace volq::io
