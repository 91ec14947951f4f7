#pragma once

#include <string>
#include <string_view>

#include "volq/forecast.hpp"
#include "volq/simulate.hpp"
#include "volq/timeseries.hpp"

namespace volq::io {

/// Reads one numeric column from comma-separated text. `column` is a header
/// name or a 0-based index; empty selects the first column, or the second
/// when the first is a timestamp column. Lines starting
/// with '#' and blank lines are skipped. When the header names a column
/// "t", "time" or "timestamp" and that column is numeric and strictly
/// increasing, it becomes the series' timestamps.
TimeSeries parse_csv(std::string_view text, const std::string& column = {},
                     bool has_header = true, const std::string& label = {});

TimeSeries load_csv(const std::string& path, const std::string& column = {},
                    bool has_header = true);

std::string read_file(const std::string& path);

/// "fnv1a64:<16 hex digits>" over the given bytes.
std::string digest(std::string_view bytes);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

/// Simulator output as CSV: a "# generator: ..." comment, then
/// "t,value[,latent]" rows.
std::string simulation_to_csv(const simulate::SimResult& result,
                              const simulate::SimSpec& spec);

/// Plot-ready rows "t,observed,center,lower,upper". In-sample rows pair
/// with `observed` (which must have exactly forecast.in_sample entries);
/// out-of-sample rows leave `observed` empty.
std::string plot_data_csv(const ForecastPath& forecast, const TimeSeries& observed);

}  // namespace volq::io
