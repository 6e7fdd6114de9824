//*****************************************************************************
// Copyright 2026 The mlserve Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//*****************************************************************************
#pragma once

#include <chrono>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mlserve {

using Timestamp = std::chrono::sys_seconds;

// Accepts "YYYY-MM-DD[T| ]HH:MM[:SS[.000…]]" with an optional "Z" or
// "±HH[:]MM" suffix; naive timestamps are taken as UTC.
std::optional<Timestamp> parse_iso8601(std::string_view text);

// Always "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601(Timestamp t);

// UTC hour, 0..23.
inline std::size_t hour_of_day(Timestamp t) {
    const auto since_midnight = t - std::chrono::floor<std::chrono::days>(t);
    return static_cast<std::size_t>(std::chrono::floor<std::chrono::hours>(since_midnight).count());
}

// Hourly series: equal lengths, strictly increasing timestamps exactly one
// hour apart, finite values.
struct TimeSeries {
    std::vector<Timestamp> timestamps;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    bool operator==(const TimeSeries&) const = default;
};

// Builds a TimeSeries from wire lists, enforcing every invariant. Throws
// CsvError with the same codes as the CSV parser (rows are 1-based list
// positions) plus LENGTH_MISMATCH.
TimeSeries make_timeseries(std::span<const std::string> timestamps, std::span<const double> values);

// Header row required; comma separated, no quoting. Throws CsvError:
// MISSING_COLUMN, RAGGED_ROW, BAD_TIMESTAMP, BAD_NUMBER, NON_MONOTONIC_TIME,
// NON_HOURLY_STEP. Data rows are numbered from 1.
TimeSeries parse_timeseries_csv(std::string_view content, std::string_view time_column,
                                std::string_view value_column);

struct ForecastResult {
    std::string model;
    std::vector<Timestamp> timestamps;
    std::vector<double> values;

    bool operator==(const ForecastResult&) const = default;
};

// Shortest decimal that parses back to the same double.
std::string format_double(double v);

// "utc_timestamp,<model>,…" then one LF-terminated row per timestamp.
// Throws CsvError(TIMESTAMP_MISMATCH) when forecasts disagree on timestamps.
std::string render_forecast_csv(std::span<const ForecastResult> forecasts);

// Inverse of render_forecast_csv.
std::vector<ForecastResult> parse_forecast_csv(std::string_view content);

}  // namespace mlserve
