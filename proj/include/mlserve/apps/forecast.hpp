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

// One-day-ahead hourly load forecasting: models, service, and UI definition.

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mlserve/display.hpp"
#include "mlserve/gateway.hpp"
#include "mlserve/schema.hpp"
#include "mlserve/service.hpp"
#include "mlserve/timeseries.hpp"

namespace mlserve::forecast {

inline constexpr std::size_t kHorizon = 24;
inline constexpr std::array<std::size_t, 3> kLags = {24, 25, 168};
inline constexpr std::size_t kDeepestLag = 168;
inline constexpr std::size_t kMinLinearHistory = kDeepestLag + kHorizon;  // 192
inline constexpr std::size_t kFeatureCount = kLags.size() + 24 + 1;     // lags, hour one-hot, bias
inline constexpr std::size_t kBiasIndex = kFeatureCount - 1;
inline constexpr double kRidgeLambda = 1e-6;

// [y(t-24), y(t-25), y(t-168), onehot(hour(t)) x24, 1]
using FeatureVector = std::array<double, kFeatureCount>;

struct LinearModelWeights {
    FeatureVector coefficients{};
};

// `lagged(L)` returns y(t-L).
template <typename Lagged>
FeatureVector make_features(Lagged&& lagged, Timestamp t) {
    FeatureVector x{};
    for (std::size_t i = 0; i < kLags.size(); ++i) x[i] = lagged(kLags[i]);
    x[kLags.size() + hour_of_day(t)] = 1.0;
    x[kBiasIndex] = 1.0;
    return x;
}

// Throws Error(INSUFFICIENT_HISTORY) below 192 points. Solves
// (X^T X + lambda D) w = X^T y, D = I except 0 for the bias.
LinearModelWeights fit_linear(const TimeSeries& history);

// Recursive multi-step forecast; lags that reach past the end of the
// history read earlier predictions. For horizon <= 24 every lag (>= 24)
// lands inside the history.
std::vector<double> predict_linear(const LinearModelWeights& weights, const TimeSeries& history,
                                   std::size_t horizon = kHorizon);

// Repeats the final observed day. Throws INSUFFICIENT_HISTORY below 24 points.
std::vector<double> seasonal_naive_forecast(const TimeSeries& history);

// 24 copies of the (compensated) mean. Throws INSUFFICIENT_HISTORY when empty.
std::vector<double> mean_forecast(const TimeSeries& history);

const std::vector<std::string>& supported_models();

// Called with every series a model is fit on; lets tests spy on what data
// a model saw.
using FitObserver = std::function<void(std::string_view model, const TimeSeries& training)>;

// Forecast the 24 hours after `history` with the named model. Throws
// ServiceError(UNPROCESSABLE) for unknown names or short history.
ForecastResult run_model(std::string_view model, const TimeSeries& history, const FitObserver& observer = {});

struct BacktestSeries {
    std::string model;
    std::vector<Timestamp> timestamps;
    std::vector<double> absolute_error;
};

// Each model is fit on everything but the final 24 h and scored against
// it. Models without enough remaining history are skipped.
std::vector<BacktestSeries> backtest(const TimeSeries& history, std::span<const std::string> models,
                                     const FitObserver& observer = {});

// ForecastRequest JSON <-> typed form. Throws ServiceError(UNPROCESSABLE).
struct ForecastRequest {
    std::vector<std::string> models;
    TimeSeries history;
};
ForecastRequest parse_forecast_request(const nlohmann::json& request);
nlohmann::json to_json(const ForecastRequest& request);
nlohmann::json to_json(const ForecastResult& result);
ForecastResult result_from_json(const nlohmann::json& j);

class ForecastService : public Service {
public:
    ServiceInfo info() const override;
    void load_model() override;
    nlohmann::json process(const nlohmann::json& request) const override;

    // Names registered by load_model, in registration order.
    std::vector<std::string> registered_models() const;

private:
    using Model = std::function<ForecastResult(const TimeSeries&)>;
    std::map<std::string, Model, std::less<>> models_;
};

std::shared_ptr<Service> make_service();

// UI side.
inline constexpr std::string_view kTimeColumn = "utc_timestamp";
inline constexpr std::string_view kValueColumn = "load";
inline constexpr std::size_t kContextHours = 72;

SchemaDescriptor descriptor();
nlohmann::json prepare_request(const nlohmann::json& inputs);
std::vector<DisplayItem> process_response(const nlohmann::json& request, const nlohmann::json& response,
                                          const FitObserver& observer = {});
UIAppDefinition ui_app(std::string service_url);

}  // namespace mlserve::forecast
