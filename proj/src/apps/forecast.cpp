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
// Eigen first: <resolv.h> (pulled in by httplib) defines a `_res` macro
// that collides with Eigen parameter names.
#include <Eigen/Dense>

#include "mlserve/apps/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "mlserve/base64.hpp"
#include "mlserve/error.hpp"

namespace mlserve::forecast {

using nlohmann::json;

namespace {

[[noreturn]] void insufficient(std::string_view model, std::size_t have, std::size_t need) {
    throw Error("INSUFFICIENT_HISTORY",
                fmt::format("{} needs at least {} hourly points, got {}", model, need, have));
}

ServiceError unprocessable(const std::string& message) {
    return ServiceError(ServiceErrorCode::UNPROCESSABLE, message);
}

std::vector<Timestamp> continuation(const TimeSeries& history, std::size_t horizon) {
    std::vector<Timestamp> out;
    out.reserve(horizon);
    for (std::size_t h = 1; h <= horizon; ++h) out.push_back(history.timestamps.back() + std::chrono::hours(h));
    return out;
}

TimeSeries drop_last(const TimeSeries& ts, std::size_t n) {
    TimeSeries out;
    out.timestamps.assign(ts.timestamps.begin(), ts.timestamps.end() - static_cast<std::ptrdiff_t>(n));
    out.values.assign(ts.values.begin(), ts.values.end() - static_cast<std::ptrdiff_t>(n));
    return out;
}

std::vector<std::string> iso_strings(std::span<const Timestamp> ts) {
    std::vector<std::string> out;
    out.reserve(ts.size());
    for (const auto t : ts) out.push_back(format_iso8601(t));
    return out;
}

}  // namespace

LinearModelWeights fit_linear(const TimeSeries& history) {
    const std::size_t n = history.size();
    if (n < kMinLinearHistory) insufficient("Linear", n, kMinLinearHistory);

    // Solved as least squares on [X; sqrt(lambda) D] w = [y; 0], which has
    // the same minimizer as (X^T X + lambda D) w = X^T y without squaring the
    // condition number. Lag columns of strongly seasonal series are nearly
    // collinear, so lambda alone pins some directions; extended precision
    // keeps them accurate.
    using Real = long double;
    const std::size_t rows = n - kDeepestLag;
    const auto p = static_cast<Eigen::Index>(kFeatureCount);
    Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> a =
        Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>::Zero(static_cast<Eigen::Index>(rows) + p - 1, p);
    Eigen::Matrix<Real, Eigen::Dynamic, 1> b = Eigen::Matrix<Real, Eigen::Dynamic, 1>::Zero(a.rows());
    const auto& y = history.values;
    for (std::size_t t = kDeepestLag; t < n; ++t) {
        const auto r = static_cast<Eigen::Index>(t - kDeepestLag);
        const auto x = make_features([&](std::size_t lag) { return y[t - lag]; }, history.timestamps[t]);
        for (Eigen::Index c = 0; c < p; ++c) a(r, c) = x[static_cast<std::size_t>(c)];
        b(r) = y[t];
    }
    const Real root_lambda = std::sqrt(static_cast<Real>(kRidgeLambda));
    for (Eigen::Index c = 0, r = static_cast<Eigen::Index>(rows); c < p; ++c) {
        if (c != static_cast<Eigen::Index>(kBiasIndex)) a(r++, c) = root_lambda;
    }
    const Eigen::Matrix<Real, Eigen::Dynamic, 1> w = a.colPivHouseholderQr().solve(b);
    LinearModelWeights weights;
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        weights.coefficients[i] = static_cast<double>(w(static_cast<Eigen::Index>(i)));
        if (!std::isfinite(weights.coefficients[i])) throw Error("FIT_FAILED", "linear fit produced non-finite weights");
    }
    return weights;
}

std::vector<double> predict_linear(const LinearModelWeights& weights, const TimeSeries& history, std::size_t horizon) {
    const std::size_t n = history.size();
    if (n < kDeepestLag) insufficient("Linear", n, kDeepestLag);
    std::vector<double> out;
    out.reserve(horizon);
    for (std::size_t h = 0; h < horizon; ++h) {
        const std::size_t target = n + h;
        const auto lagged = [&](std::size_t lag) {
            const std::size_t idx = target - lag;
            return idx < n ? history.values[idx] : out[idx - n];
        };
        const auto x = make_features(lagged, history.timestamps.back() + std::chrono::hours(h + 1));
        double acc = 0.0;
        for (std::size_t i = 0; i < kFeatureCount; ++i) acc += weights.coefficients[i] * x[i];
        out.push_back(acc);
    }
    return out;
}

std::vector<double> seasonal_naive_forecast(const TimeSeries& history) {
    const std::size_t n = history.size();
    if (n < kHorizon) insufficient("SeasonalNaive", n, kHorizon);
    return {history.values.end() - kHorizon, history.values.end()};
}

std::vector<double> mean_forecast(const TimeSeries& history) {
    if (history.size() == 0) insufficient("Mean", 0, 1);
    // Neumaier summation.
    double sum = 0.0;
    double compensation = 0.0;
    for (const double v : history.values) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            compensation += (sum - t) + v;
        } else {
            compensation += (v - t) + sum;
        }
        sum = t;
    }
    const double mean = (sum + compensation) / static_cast<double>(history.size());
    return std::vector<double>(kHorizon, mean);
}

const std::vector<std::string>& supported_models() {
    static const std::vector<std::string> names = {"Linear", "SeasonalNaive", "Mean"};
    return names;
}

ForecastResult run_model(std::string_view model, const TimeSeries& history, const FitObserver& observer) {
    if (observer) observer(model, history);
    ForecastResult result{std::string(model), continuation(history, kHorizon), {}};
    try {
        if (model == "Linear") {
            result.values = predict_linear(fit_linear(history), history);
        } else if (model == "SeasonalNaive") {
            result.values = seasonal_naive_forecast(history);
        } else if (model == "Mean") {
            result.values = mean_forecast(history);
        } else {
            throw unprocessable(fmt::format("unknown model '{}'; supported models: {}", model,
                                            fmt::join(supported_models(), ", ")));
        }
    } catch (const ServiceError&) {
        throw;
    } catch (const Error& e) {
        throw unprocessable(e.what());
    }
    return result;
}

std::vector<BacktestSeries> backtest(const TimeSeries& history, std::span<const std::string> models,
                                     const FitObserver& observer) {
    std::vector<BacktestSeries> out;
    if (history.size() < kHorizon) return out;
    const TimeSeries train = drop_last(history, kHorizon);
    const std::span<const double> actual(history.values.end() - kHorizon, history.values.end());
    for (const auto& model : models) {
        const bool enough = model == "Linear" ? train.size() >= kMinLinearHistory
                            : model == "SeasonalNaive" ? train.size() >= kHorizon
                                                       : train.size() >= 1;
        if (!enough) continue;
        const auto predicted = run_model(model, train, observer);
        BacktestSeries s{model, predicted.timestamps, {}};
        for (std::size_t h = 0; h < kHorizon; ++h) s.absolute_error.push_back(std::abs(predicted.values[h] - actual[h]));
        out.push_back(std::move(s));
    }
    return out;
}

ForecastRequest parse_forecast_request(const json& request) {
    for (const auto& [key, _] : request.items()) {
        if (key != "models" && key != "timestamps" && key != "values") {
            throw unprocessable(fmt::format("unexpected key '{}'; expected models, timestamps, values", key));
        }
    }
    for (const char* key : {"models", "timestamps", "values"}) {
        if (!request.contains(key)) throw unprocessable(fmt::format("missing key '{}'", key));
    }
    const auto& models = request["models"];
    const auto& stamps = request["timestamps"];
    const auto& values = request["values"];
    if (!models.is_array() || !std::all_of(models.begin(), models.end(), [](const json& m) { return m.is_string(); })) {
        throw unprocessable("'models' must be an array of strings");
    }
    if (models.empty()) throw unprocessable("'models' must name at least one model");
    if (!stamps.is_array() || !std::all_of(stamps.begin(), stamps.end(), [](const json& s) { return s.is_string(); })) {
        throw unprocessable("'timestamps' must be an array of ISO-8601 strings");
    }
    if (!values.is_array() || !std::all_of(values.begin(), values.end(), [](const json& v) { return v.is_number(); })) {
        throw unprocessable("'values' must be an array of numbers");
    }
    ForecastRequest out;
    for (const auto& m : models) {
        const auto name = m.get<std::string>();
        const auto& known = supported_models();
        if (std::find(known.begin(), known.end(), name) == known.end()) {
            throw unprocessable(fmt::format("unknown model '{}'; supported models: {}", name, fmt::join(known, ", ")));
        }
        out.models.push_back(name);
    }
    try {
        out.history = make_timeseries(stamps.get<std::vector<std::string>>(), values.get<std::vector<double>>());
    } catch (const CsvError& e) {
        throw ServiceError(ServiceErrorCode::UNPROCESSABLE, e.what(), json{{"cause", e.code()}, {"row", e.row()}});
    }
    if (out.history.size() < kMinLinearHistory) {
        throw unprocessable(fmt::format("history must contain at least {} hourly points, got {}", kMinLinearHistory,
                                        out.history.size()));
    }
    return out;
}

json to_json(const ForecastRequest& request) {
    return {{"models", request.models},
            {"timestamps", iso_strings(request.history.timestamps)},
            {"values", request.history.values}};
}

json to_json(const ForecastResult& result) {
    return {{"model", result.model}, {"timestamps", iso_strings(result.timestamps)}, {"values", result.values}};
}

ForecastResult result_from_json(const json& j) {
    ForecastResult r;
    r.model = j.at("model").get<std::string>();
    for (const auto& s : j.at("timestamps")) {
        const auto t = parse_iso8601(s.get<std::string>());
        if (!t) throw Error("BAD_RESPONSE", "forecast timestamp is not ISO-8601");
        r.timestamps.push_back(*t);
    }
    r.values = j.at("values").get<std::vector<double>>();
    return r;
}

// ---- service ---------------------------------------------------------------

ServiceInfo ForecastService::info() const {
    return {"forecast", "1.0.0", "One-day-ahead hourly load forecasting (Linear, SeasonalNaive, Mean)"};
}

void ForecastService::load_model() {
    for (const auto& name : supported_models()) {
        models_.emplace(name, [name](const TimeSeries& history) { return run_model(name, history); });
    }
}

std::vector<std::string> ForecastService::registered_models() const {
    std::vector<std::string> out;
    for (const auto& name : supported_models()) {
        if (models_.contains(name)) out.push_back(name);
    }
    return out;
}

json ForecastService::process(const json& request) const {
    const auto parsed = parse_forecast_request(request);
    json forecasts = json::array();
    for (const auto& name : parsed.models) {
        const auto it = models_.find(name);
        if (it == models_.end()) throw unprocessable(fmt::format("model '{}' is not loaded", name));
        forecasts.push_back(to_json(it->second(parsed.history)));
    }
    return {{"forecasts", forecasts}};
}

std::shared_ptr<Service> make_service() { return std::make_shared<ForecastService>(); }

// ---- UI --------------------------------------------------------------------

SchemaDescriptor descriptor() {
    SchemaDescriptor d;
    d.app_name = "Load Forecasting";
    d.description = "Upload hourly load history as CSV and get a one-day-ahead forecast per selected model.";
    d.inputs = {
        {"models", ui::MultipleChoice{"Models", supported_models()}},
        {"history", ui::TimeSeriesCSVFile{"Hourly load history (CSV)", std::string(kTimeColumn), std::string(kValueColumn)}},
    };
    d.outputs = {
        {"forecast", ui::Plot{"Forecast", ui::PlotKind::line}},
        {"forecast_error", ui::Plot{"Forecast error (backtest)", ui::PlotKind::line}},
        {"forecast_csv", ui::File{"forecast.csv", std::vector<std::string>{".csv"}}},
    };
    return d;
}

json prepare_request(const json& inputs) {
    const auto d = descriptor();
    const auto& column = std::get<ui::TimeSeriesCSVFile>(d.inputs[1].type);
    const auto file = decode_upload(inputs.at("history"));
    const auto history = parse_timeseries_csv(file.text(), column.time_column, column.value_column);
    ForecastRequest request{inputs.at("models").get<std::vector<std::string>>(), history};
    return to_json(request);
}

std::vector<DisplayItem> process_response(const json& request, const json& response, const FitObserver& observer) {
    const auto parsed = parse_forecast_request(request);
    const auto& history = parsed.history;
    std::vector<ForecastResult> forecasts;
    for (const auto& f : response.at("forecasts")) forecasts.push_back(result_from_json(f));

    display::PlotLine forecast_plot{"Forecast", {}};
    const std::size_t context = std::min(kContextHours, history.size());
    const std::span<const Timestamp> recent_t(history.timestamps.end() - static_cast<std::ptrdiff_t>(context),
                                              history.timestamps.end());
    forecast_plot.series.push_back(
        {"history", iso_strings(recent_t), {history.values.end() - static_cast<std::ptrdiff_t>(context), history.values.end()}});
    for (const auto& f : forecasts) forecast_plot.series.push_back({f.model, iso_strings(f.timestamps), f.values});

    display::PlotLine error_plot{"Forecast error (backtest)", {}};
    for (const auto& s : backtest(history, parsed.models, observer)) {
        error_plot.series.push_back({s.model, iso_strings(s.timestamps), s.absolute_error});
    }

    const auto csv = render_forecast_csv(forecasts);
    return {forecast_plot, error_plot, display::FileDownload{"forecast.csv", base64::encode(csv), "text/csv"}};
}

UIAppDefinition ui_app(std::string service_url) {
    UIAppDefinition app;
    app.descriptor = descriptor();
    app.service_url = std::move(service_url);
    app.prepare_request = [](const json& inputs) { return prepare_request(inputs); };
    app.process_response = [](const json& request, const json& response) { return process_response(request, response); };
    return app;
}

}  // namespace mlserve::forecast
