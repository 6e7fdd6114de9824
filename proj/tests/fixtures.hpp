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

// Shared test data builders and stub services.

#include <atomic>
#include <chrono>
#include <mutex>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "mlserve/apps/forecast.hpp"
#include "mlserve/service.hpp"
#include "mlserve/tensor.hpp"
#include "mlserve/timeseries.hpp"

namespace fixtures {

using namespace std::chrono;

// 2024-01-01T00:00:00Z
inline mlserve::Timestamp series_start() { return sys_days{year{2024} / January / 1}; }

inline mlserve::TimeSeries hourly(const std::vector<double>& values, mlserve::Timestamp start = series_start()) {
    mlserve::TimeSeries ts;
    for (std::size_t i = 0; i < values.size(); ++i) {
        ts.timestamps.push_back(start + hours(i));
        ts.values.push_back(values[i]);
    }
    return ts;
}

// 24 h periodic: 100 + 20 sin(2 pi h / 24) + 5 cos(4 pi h / 24).
inline std::vector<double> daily_sinusoid(std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double h = static_cast<double>(i % 24);
        v[i] = 100.0 + 20.0 * std::sin(2 * M_PI * h / 24.0) + 5.0 * std::cos(4 * M_PI * h / 24.0);
    }
    return v;
}

// y(t) = 0.5 y(t-24) + 10, seeded with a varied first day.
inline std::vector<double> half_lag_series(std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i < 24) {
            v[i] = 400.0 + 300.0 * std::sin(0.7 * static_cast<double>(i)) + 37.0 * static_cast<double>(i % 5);
        } else {
            v[i] = 0.5 * v[i - 24] + 10.0;
        }
    }
    return v;
}

inline std::vector<std::int64_t> unix_seconds(const mlserve::TimeSeries& ts) {
    std::vector<std::int64_t> out;
    for (const auto t : ts.timestamps) out.push_back(t.time_since_epoch().count());
    return out;
}

inline nlohmann::json forecast_request(const std::vector<std::string>& models, const mlserve::TimeSeries& ts) {
    return mlserve::forecast::to_json(mlserve::forecast::ForecastRequest{models, ts});
}

inline std::string csv_of(const mlserve::TimeSeries& ts, const std::string& time_col = "utc_timestamp",
                          const std::string& value_col = "load") {
    std::string out = time_col + "," + value_col + "\n";
    for (std::size_t i = 0; i < ts.size(); ++i) {
        out += mlserve::format_iso8601(ts.timestamps[i]) + "," + mlserve::format_double(ts.values[i]) + "\n";
    }
    return out;
}

// Five disjoint 8x8 squares at 200 on a background of 10 in a 64x64 u8 image.
inline mlserve::Tensor five_squares() {
    std::vector<std::uint8_t> px(64 * 64, 10);
    const std::size_t corners[5][2] = {{2, 2}, {2, 30}, {20, 50}, {40, 10}, {50, 40}};
    for (const auto& c : corners) {
        for (std::size_t y = c[0]; y < c[0] + 8; ++y) {
            for (std::size_t x = c[1]; x < c[1] + 8; ++x) px[y * 64 + x] = 200;
        }
    }
    return mlserve::Tensor{std::move(px), {64, 64}};
}

// Echoes the request after sleeping; records peak concurrency.
class StallingService : public mlserve::Service {
public:
    explicit StallingService(std::chrono::milliseconds stall) : stall_(stall) {}

    mlserve::ServiceInfo info() const override { return {"stall", "0.0.1", "test stub"}; }
    void load_model() override {}
    nlohmann::json process(const nlohmann::json& request) const override {
        const auto now = ++active_;
        auto seen = peak_.load();
        while (now > seen && !peak_.compare_exchange_weak(seen, now)) {
        }
        std::this_thread::sleep_for(stall_);
        --active_;
        order_mutex_.lock();
        order_.push_back(request.value("id", -1));
        order_mutex_.unlock();
        return {{"echo", request}};
    }

    int peak() const { return peak_.load(); }
    std::vector<int> completion_order() const {
        std::lock_guard lock(order_mutex_);
        return order_;
    }

private:
    std::chrono::milliseconds stall_;
    mutable std::atomic<int> active_{0};
    mutable std::atomic<int> peak_{0};
    mutable std::mutex order_mutex_;
    mutable std::vector<int> order_;
};

}  // namespace fixtures
