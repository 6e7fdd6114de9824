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
#include "mlserve/timeseries.hpp"

#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "mlserve/error.hpp"

namespace mlserve {

namespace {

using namespace std::chrono;

bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    out = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
        out = out * 10 + (s[i] - '0');
    }
    return true;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::vector<std::string_view> split_lines(std::string_view content) {
    if (content.starts_with("\xEF\xBB\xBF")) content.remove_prefix(3);
    auto lines = split(content, '\n');
    if (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    for (auto& l : lines) {
        if (l.ends_with('\r')) l.remove_suffix(1);
    }
    return lines;
}

std::optional<double> parse_number(std::string_view s) {
    s = trim(s);
    if (s.starts_with('+')) s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

// Shared by the CSV and list paths so both enforce identical rules.
void check_step(const TimeSeries& ts, std::size_t i) {
    if (i == 0) return;
    const long row = static_cast<long>(i) + 1;
    const auto step = ts.timestamps[i] - ts.timestamps[i - 1];
    if (step <= seconds{0}) {
        throw CsvError("NON_MONOTONIC_TIME", fmt::format("row {}: timestamp {} does not increase", row,
                                                         format_iso8601(ts.timestamps[i])),
                       row);
    }
    if (step != hours{1}) {
        throw CsvError("NON_HOURLY_STEP", fmt::format("row {}: step of {} s from previous row, expected 3600 s", row,
                                                      step.count()),
                       row);
    }
}

}  // namespace

std::optional<Timestamp> parse_iso8601(std::string_view s) {
    s = trim(s);
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
    if (!read_int(s, 0, 4, y) || s.size() < 16 || s[4] != '-' || !read_int(s, 5, 2, mo) || s[7] != '-' ||
        !read_int(s, 8, 2, d) || (s[10] != 'T' && s[10] != ' ') || !read_int(s, 11, 2, h) || s[13] != ':' ||
        !read_int(s, 14, 2, mi)) {
        return std::nullopt;
    }
    std::size_t pos = 16;
    if (pos < s.size() && s[pos] == ':') {
        if (!read_int(s, pos + 1, 2, sec)) return std::nullopt;
        pos += 3;
        if (pos < s.size() && s[pos] == '.') {
            ++pos;
            const auto start = pos;
            while (pos < s.size() && s[pos] == '0') ++pos;
            if (pos == start || (pos < s.size() && s[pos] >= '1' && s[pos] <= '9')) return std::nullopt;
        }
    }
    seconds offset{0};
    if (pos < s.size()) {
        if (s[pos] == 'Z' && pos + 1 == s.size()) {
            pos = s.size();
        } else if (s[pos] == '+' || s[pos] == '-') {
            int oh = 0, om = 0;
            const int sign = s[pos] == '-' ? -1 : 1;
            if (!read_int(s, pos + 1, 2, oh)) return std::nullopt;
            std::size_t mpos = pos + 3;
            if (mpos < s.size() && s[mpos] == ':') ++mpos;
            if (!read_int(s, mpos, 2, om) || mpos + 2 != s.size() || oh > 23 || om > 59) return std::nullopt;
            offset = sign * (hours{oh} + minutes{om});
            pos = s.size();
        } else {
            return std::nullopt;
        }
    }
    if (pos != s.size() || h > 23 || mi > 59 || sec > 59) return std::nullopt;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    return sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec} - offset;
}

std::string format_iso8601(Timestamp t) {
    const auto day_point = floor<days>(t);
    const year_month_day ymd{day_point};
    const hh_mm_ss hms{t - day_point};
    return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}Z", static_cast<int>(ymd.year()),
                       static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), hms.hours().count(),
                       hms.minutes().count(), hms.seconds().count());
}

TimeSeries make_timeseries(std::span<const std::string> timestamps, std::span<const double> values) {
    if (timestamps.size() != values.size()) {
        throw CsvError("LENGTH_MISMATCH", fmt::format("{} timestamps but {} values", timestamps.size(), values.size()));
    }
    TimeSeries ts;
    ts.timestamps.reserve(values.size());
    ts.values.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const long row = static_cast<long>(i) + 1;
        const auto t = parse_iso8601(timestamps[i]);
        if (!t) throw CsvError("BAD_TIMESTAMP", fmt::format("row {}: cannot parse timestamp '{}'", row, timestamps[i]), row);
        if (!std::isfinite(values[i])) throw CsvError("BAD_NUMBER", fmt::format("row {}: value is not finite", row), row);
        ts.timestamps.push_back(*t);
        ts.values.push_back(values[i]);
        check_step(ts, i);
    }
    return ts;
}

TimeSeries parse_timeseries_csv(std::string_view content, std::string_view time_column, std::string_view value_column) {
    const auto lines = split_lines(content);
    if (lines.empty()) throw CsvError("MISSING_COLUMN", "CSV has no header row");
    const auto header = split(lines[0], ',');
    auto find_column = [&](std::string_view name) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (trim(header[i]) == name) return i;
        }
        throw CsvError("MISSING_COLUMN", fmt::format("column '{}' not found in header", name), 0);
    };
    const std::size_t tcol = find_column(time_column);
    const std::size_t vcol = find_column(value_column);

    TimeSeries ts;
    ts.timestamps.reserve(lines.size() - 1);
    ts.values.reserve(lines.size() - 1);
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const long row = static_cast<long>(r);
        const auto cells = split(lines[r], ',');
        if (cells.size() != header.size()) {
            throw CsvError("RAGGED_ROW",
                           fmt::format("row {}: {} fields, header has {}", row, cells.size(), header.size()), row);
        }
        const auto t = parse_iso8601(cells[tcol]);
        if (!t) throw CsvError("BAD_TIMESTAMP", fmt::format("row {}: cannot parse timestamp '{}'", row, trim(cells[tcol])), row);
        const auto v = parse_number(cells[vcol]);
        if (!v || !std::isfinite(*v)) {
            throw CsvError("BAD_NUMBER", fmt::format("row {}: '{}' is not a finite number", row, trim(cells[vcol])), row);
        }
        ts.timestamps.push_back(*t);
        ts.values.push_back(*v);
        check_step(ts, ts.size() - 1);
    }
    return ts;
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string render_forecast_csv(std::span<const ForecastResult> forecasts) {
    std::string out = "utc_timestamp";
    for (const auto& f : forecasts) out += "," + f.model;
    out += '\n';
    if (forecasts.empty()) return out;
    const auto& stamps = forecasts.front().timestamps;
    for (const auto& f : forecasts) {
        if (f.timestamps != stamps || f.values.size() != stamps.size()) {
            throw CsvError("TIMESTAMP_MISMATCH", "forecast '" + f.model + "' does not share the first forecast's timestamps");
        }
    }
    for (std::size_t i = 0; i < stamps.size(); ++i) {
        out += format_iso8601(stamps[i]);
        for (const auto& f : forecasts) {
            out += ',';
            out += format_double(f.values[i]);
        }
        out += '\n';
    }
    return out;
}

std::vector<ForecastResult> parse_forecast_csv(std::string_view content) {
    const auto lines = split_lines(content);
    if (lines.empty() || trim(split(lines[0], ',')[0]) != "utc_timestamp") {
        throw CsvError("MISSING_COLUMN", "forecast CSV must start with a utc_timestamp column", 0);
    }
    const auto header = split(lines[0], ',');
    std::vector<ForecastResult> out(header.size() - 1);
    for (std::size_t m = 1; m < header.size(); ++m) out[m - 1].model = std::string(trim(header[m]));
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const long row = static_cast<long>(r);
        const auto cells = split(lines[r], ',');
        if (cells.size() != header.size()) throw CsvError("RAGGED_ROW", fmt::format("row {}: wrong field count", row), row);
        const auto t = parse_iso8601(cells[0]);
        if (!t) throw CsvError("BAD_TIMESTAMP", fmt::format("row {}: bad timestamp", row), row);
        for (std::size_t m = 1; m < cells.size(); ++m) {
            const auto v = parse_number(cells[m]);
            if (!v) throw CsvError("BAD_NUMBER", fmt::format("row {}: bad number", row), row);
            out[m - 1].timestamps.push_back(*t);
            out[m - 1].values.push_back(*v);
        }
    }
    return out;
}

}  // namespace mlserve
