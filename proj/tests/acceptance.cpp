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
// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <httplib.h>

#include "mlserve/apps/forecast.hpp"
#include "mlserve/apps/segment.hpp"
#include "mlserve/base64.hpp"
#include "mlserve/gateway.hpp"
#include "mlserve/http_util.hpp"
#include "mlserve/rest_server.hpp"
#include "mlserve/schema.hpp"
#include "mlserve/tensor.hpp"
#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "subprocess.hpp"

using namespace mlserve;
using namespace std::chrono_literals;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Collects the first few failure reasons of a criterion.
class Check {
public:
    void expect(bool ok, const std::string& what) {
        if (ok) return;
        ++failures_;
        if (notes_.size() < 5) notes_.push_back(what);
    }
    bool ok() const { return failures_ == 0; }
    std::string summary() const {
        std::string s = fmt::format("{} failure(s)", failures_);
        for (const auto& n : notes_) s += "; " + n;
        return s;
    }

private:
    int failures_ = 0;
    std::vector<std::string> notes_;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// ---------------------------------------------------------------------------

std::string tensor_codec(Check& c) {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(1000);
    std::set<std::pair<int, std::size_t>> covered;
    for (int i = 0; i < 1000; ++i) {
        const auto t = gen::tensor(rng);
        covered.insert({static_cast<int>(t.dtype()), t.shape.size()});
        const auto wire = json::parse(to_json(encode_tensor(t)).dump());
        const auto back = decode_tensor(payload_from_json(wire));
        c.expect(back == t, fmt::format("round trip {} differs", i));
    }
    c.expect(covered.size() == 25, fmt::format("only {} of 25 dtype/rank pairs covered", covered.size()));

    const auto u8 = encode_tensor(Tensor{std::vector<std::uint8_t>{0, 255, 7, 9}, {4}});
    c.expect(u8.data == "AP8HCQ==", "u8 fixture " + u8.data);
    c.expect(u8.data == oracle::openssl_base64({0, 255, 7, 9}), "u8 fixture vs OpenSSL");
    const auto f64 = encode_tensor(Tensor{std::vector<double>{1.0}, {1}});
    c.expect(f64.data == "AAAAAAAA8D8=", "f64 fixture " + f64.data);
    c.expect(f64.data == oracle::openssl_base64(oracle::ieee754_le(1.0)), "f64 fixture vs IEEE-754/OpenSSL");

    const double secs = seconds_since(t0);
    c.expect(secs < 5.0, fmt::format("took {:.2f} s", secs));
    return fmt::format("1000 round trips, 25 dtype/rank pairs, {:.3f} s", secs);
}

std::string schema(Check& c) {
    std::mt19937_64 rng(500);
    for (int i = 0; i < 500; ++i) {
        const auto d = gen::descriptor(rng);
        try {
            c.expect(schema_from_wire(json::parse(schema_to_wire(d).dump())) == d, fmt::format("descriptor {} differs", i));
        } catch (const std::exception& e) {
            c.expect(false, fmt::format("descriptor {} threw {}", i, e.what()));
        }
    }

    const InputSchema fields = {
        {"n", ui::Number{"N", 0.0, 10.0, false}},
        {"c", ui::SingleChoice{"C", {"a", "b"}}},
        {"f", ui::CSVFile{"F"}},
    };
    const json good = {{"n", 1}, {"c", "a"}, {"f", encode_upload("x.csv", "a,b\n")}};
    c.expect(validate_input(fields, good).ok(), "baseline fixture not ok");
    auto with = [&](auto&& edit) {
        json v = good;
        edit(v);
        return validate_input(fields, v);
    };
    const std::vector<std::tuple<std::string, IssueCode, ValidationReport>> fixtures_by_code = {
        {"n", IssueCode::MISSING, with([](json& v) { v.erase("n"); })},
        {"n", IssueCode::TYPE_MISMATCH, with([](json& v) { v["n"] = "one"; })},
        {"n", IssueCode::OUT_OF_RANGE, with([](json& v) { v["n"] = 11; })},
        {"c", IssueCode::UNKNOWN_OPTION, with([](json& v) { v["c"] = "z"; })},
        {"f", IssueCode::BAD_FILE, with([](json& v) { v["f"]["content_base64"] = "@@"; })},
        {"zz", IssueCode::UNKNOWN_FIELD, with([](json& v) { v["zz"] = 1; })},
    };
    for (const auto& [field, code, report] : fixtures_by_code) {
        c.expect(report.has(field, code) && report.issues.size() == 1,
                 fmt::format("{} not triggered cleanly", issue_code_name(code)));
    }
    return "500 random descriptors round-tripped; 6/6 issue codes triggered";
}

std::string linear_model(Check& c) {
    const auto full = fixtures::half_lag_series(31 * 24);
    const std::vector<double> past(full.begin(), full.end() - 24);
    const std::vector<double> future(full.end() - 24, full.end());
    const auto ts = fixtures::hourly(past);
    const auto w = forecast::fit_linear(ts);
    const auto pred = forecast::predict_linear(w, ts);
    double max_err = 0;
    for (std::size_t h = 0; h < 24; ++h) max_err = std::max(max_err, std::fabs(pred[h] - future[h]));
    c.expect(max_err <= 1e-6, fmt::format("max abs error {:.3e}", max_err));

    const auto o = oracle::ridge_lag_model(ts.values, fixtures::unix_seconds(ts), forecast::kRidgeLambda);
    double scale = 0, diff = 0;
    for (std::size_t i = 0; i < forecast::kFeatureCount; ++i) {
        scale = std::max(scale, std::fabs(o[i]));
        diff = std::max(diff, std::fabs(w.coefficients[i] - o[i]));
    }
    const double rel = diff / scale;
    c.expect(rel <= 1e-8, fmt::format("weights relative error {:.3e}", rel));
    return fmt::format("30 days: max abs error {:.3e}, weights rel. error {:.3e} (max-norm)", max_err, rel);
}

std::string seasonal_naive(Check& c) {
    const auto ts = fixtures::hourly(fixtures::daily_sinusoid(14 * 24));
    const auto pred = forecast::seasonal_naive_forecast(ts);
    for (std::size_t h = 0; h < 24; ++h) c.expect(pred[h] == ts.values[ts.size() - 24 + h], fmt::format("hour {}", h));
    const std::vector<std::string> models = {"SeasonalNaive"};
    const auto bt = forecast::backtest(ts, models);
    c.expect(bt.size() == 1 && bt[0].absolute_error.size() == 24, "backtest shape");
    double worst = 0;
    for (const auto& s : bt) {
        for (const double e : s.absolute_error) worst = std::max(worst, e);
    }
    c.expect(worst == 0.0, fmt::format("backtest error {}", worst));
    return fmt::format("forecast equals final day; backtest max error {}", worst);
}

std::string otsu(Check& c) {
    std::mt19937_64 rng(200);
    int separable = 0;
    for (int i = 0; i < 200; ++i) {
        const auto gray = segment::to_grayscale(gen::u8_image(rng, 64, 64));
        const auto r = segment::otsu_threshold(gray);
        const int expected = oracle::exhaustive_otsu(gray.pixels);
        if (expected < 0) {
            c.expect(!r.separable, fmt::format("image {} should be inseparable", i));
        } else {
            ++separable;
            c.expect(r.separable && r.threshold == expected,
                     fmt::format("image {}: t={} expected {}", i, r.threshold, expected));
        }
    }
    return fmt::format("200 images ({} separable) match exhaustive search", separable);
}

std::string labeling(Check& c) {
    std::mt19937_64 rng(100);
    for (int i = 0; i < 100; ++i) {
        const auto m = gen::mask(rng, 32 * 32);
        std::int32_t k = 0;
        const auto expected = oracle::flood_fill_labels(m, 32, 32, &k);
        const auto got = segment::label_components(m, 32, 32);
        c.expect(got.labels == expected && got.count == k, fmt::format("mask {} differs", i));
    }
    const auto stats = segment::instance_stats(segment::segment_image(fixtures::five_squares()));
    c.expect(stats.count == 5, fmt::format("five squares count {}", stats.count));
    c.expect(stats.mean_size_px == 64.0, fmt::format("five squares mean {}", stats.mean_size_px));
    return fmt::format("100 masks match flood fill; five squares count={} mean_size_px={}", stats.count, stats.mean_size_px);
}

std::string end_to_end(Check& c) {
    const auto t0 = Clock::now();
    const int port = proc::free_port();
    const std::string url = fmt::format("http://127.0.0.1:{}", port);
    proc::Child server({MLSERVE_CLI_PATH, "serve", "forecast", "--port", std::to_string(port)});
    const bool ready = proc::wait_healthy(port, 9s);
    c.expect(ready, "service did not become healthy");
    if (!ready) return "no service";

    const auto ts = fixtures::hourly(fixtures::daily_sinusoid(14 * 24));
    const std::vector<std::string> models = {"Linear", "SeasonalNaive", "Mean"};
    const auto dir = fs::temp_directory_path() / fmt::format("mlserve_accept_{}", ::getpid());
    fs::create_directories(dir);
    const auto req = dir / "request.json";
    std::ofstream(req) << fixtures::forecast_request(models, ts).dump();
    const auto call = proc::run({MLSERVE_CLI_PATH, "call", "--service-url", url, "-i", req.string()}, {}, 9s);
    fs::remove_all(dir);
    c.expect(call.exit_code == 0, fmt::format("call exited {}: {}", call.exit_code, call.err));

    const auto body = json::parse(call.out, nullptr, false);
    c.expect(body.is_object() && body.contains("forecasts") && body["forecasts"].size() == models.size(),
             "response does not hold one forecast per model");
    if (c.ok()) {
        for (std::size_t m = 0; m < models.size(); ++m) {
            const auto r = forecast::result_from_json(body["forecasts"][m]);
            c.expect(r.model == models[m], "model order");
            c.expect(r.timestamps.size() == 24 && r.values.size() == 24, "24 points");
            for (std::size_t h = 0; h < r.timestamps.size(); ++h) {
                c.expect(r.timestamps[h] == ts.timestamps.back() + std::chrono::hours(h + 1), "hourly continuation");
            }
        }
    }
    server.signal(SIGINT);
    const auto stopped = server.wait(10s);
    c.expect(stopped.exit_code == 0, fmt::format("serve exited {}", stopped.exit_code));
    const double secs = seconds_since(t0);
    c.expect(secs < 10.0, fmt::format("took {:.2f} s", secs));
    return fmt::format("serve + call, {} models x 24 h, {:.2f} s", models.size(), secs);
}

std::string concurrency(Check& c) {
    {
        auto stub = std::make_shared<fixtures::StallingService>(100ms);
        ServerConfig cfg;
        cfg.bind_port = 0;
        cfg.workers = 1;
        cfg.queue_capacity = 16;
        RestServer server(stub, cfg);
        server.start();
        const int port = server.port();
        std::vector<std::future<std::pair<int, json>>> replies;
        for (int i = 0; i < 16; ++i) {
            replies.push_back(std::async(std::launch::async, [port, i] {
                httplib::Client cli("127.0.0.1", port);
                cli.set_read_timeout(30s);
                auto r = cli.Post("/api/process", json{{"id", i}}.dump(), "application/json");
                return r ? std::pair{r->status, json::parse(r->body, nullptr, false)} : std::pair{-1, json(httplib::to_string(r.error()))};
            }));
        }
        for (int i = 0; i < 16; ++i) {
            const auto [status, body] = replies[static_cast<std::size_t>(i)].get();
            c.expect(status == 200, fmt::format("request {} got {}", i, status));
            c.expect(body == json{{"echo", {{"id", i}}}}, fmt::format("request {} body {}", i, body.dump()));
        }
        c.expect(server.pool().high_water_mark() == 1,
                 fmt::format("high-water mark {}", server.pool().high_water_mark()));
        c.expect(stub->peak() == 1, fmt::format("stub saw {} concurrent", stub->peak()));
        server.shutdown(2s);
    }
    int second_status = 0;
    {
        ServerConfig cfg;
        cfg.bind_port = 0;
        cfg.workers = 1;
        cfg.queue_capacity = 0;
        RestServer server(std::make_shared<fixtures::StallingService>(300ms), cfg);
        server.start();
        const int port = server.port();
        auto first = std::async(std::launch::async, [port] {
            httplib::Client cli("127.0.0.1", port);
            auto r = cli.Post("/api/process", R"({"id":0})", "application/json");
            return r ? r->status : -1;
        });
        for (int i = 0; i < 200 && server.pool().in_flight() == 0; ++i) std::this_thread::sleep_for(1ms);
        httplib::Client cli("127.0.0.1", port);
        auto second = cli.Post("/api/process", R"({"id":1})", "application/json");
        second_status = second ? second->status : -1;
        c.expect(second_status == 503, fmt::format("second request got {}", second_status));
        c.expect(second && http::is_error_envelope(second->body), "503 body is not an envelope");
        c.expect(first.get() == 200, "first request failed");
        server.shutdown(2s);
    }
    return fmt::format("16/16 queued requests ok with high-water mark 1; queue 0 -> second request {}", second_status);
}

class ModeService : public Service {
public:
    ServiceInfo info() const override { return {"modes", "1", ""}; }
    void load_model() override {}
    json process(const json& r) const override {
        const auto mode = r.value("mode", "");
        if (mode == "unprocessable") throw ServiceError(ServiceErrorCode::UNPROCESSABLE, "cannot");
        if (mode == "crash") throw std::runtime_error("boom");
        if (mode == "slow") std::this_thread::sleep_for(1500ms);
        return {{"value", r.value("value", 0)}};
    }
};

std::string error_envelope(Check& c) {
    struct Row {
        std::string where;
        std::string method;
        std::string path;
        std::string body;
        int status;
        std::string code;
    };
    int rows = 0;
    auto run_rows = [&](int port, const std::vector<Row>& table) {
        for (const auto& row : table) {
            httplib::Client cli("127.0.0.1", port);
            cli.set_read_timeout(10s);
            auto r = row.method == "GET" ? cli.Get(row.path) : cli.Post(row.path, row.body, "application/json");
            ++rows;
            const std::string label = fmt::format("{} {} {}", row.where, row.method, row.path);
            if (!r) {
                c.expect(false, label + ": no response");
                continue;
            }
            const auto body = json::parse(r->body, nullptr, false);
            const bool envelope = body.is_object() && body.contains("error") && body["error"].is_object() &&
                                  body["error"].contains("code") && body["error"]["code"].is_string() &&
                                  body["error"].contains("message") && body["error"]["message"].is_string();
            c.expect(r->status == row.status, fmt::format("{}: status {} expected {}", label, r->status, row.status));
            c.expect(envelope, label + ": not an envelope: " + r->body.substr(0, 80));
            if (envelope) c.expect(body["error"]["code"] == row.code, label + ": code " + body["error"]["code"].dump());
        }
    };

    ServerConfig scfg;
    scfg.bind_port = 0;
    scfg.max_body_bytes = 2048;
    scfg.request_timeout_s = 0.5;
    RestServer service(std::make_shared<ModeService>(), scfg);
    service.start();

    run_rows(service.port(), {
                                 {"service", "POST", "/api/process", "{bad", 400, "BAD_REQUEST"},
                                 {"service", "POST", "/api/process", "[]", 400, "BAD_REQUEST"},
                                 {"service", "GET", "/nope", "", 404, "NOT_FOUND"},
                                 {"service", "POST", "/api/process", std::string(4096, ' '), 413, "PAYLOAD_TOO_LARGE"},
                                 {"service", "POST", "/api/process", R"({"mode":"unprocessable"})", 422, "UNPROCESSABLE"},
                                 {"service", "POST", "/api/process", R"({"mode":"crash"})", 500, "INTERNAL"},
                                 {"service", "POST", "/api/process", R"({"mode":"slow"})", 504, "TIMEOUT"},
                             });

    // 503: saturate a one-worker, zero-queue server.
    {
        ServerConfig cfg;
        cfg.bind_port = 0;
        cfg.workers = 1;
        cfg.queue_capacity = 0;
        RestServer busy(std::make_shared<ModeService>(), cfg);
        busy.start();
        const int port = busy.port();
        auto hold = std::async(std::launch::async, [port] {
            httplib::Client cli("127.0.0.1", port);
            cli.Post("/api/process", R"({"mode":"slow"})", "application/json");
        });
        for (int i = 0; i < 500 && busy.pool().in_flight() == 0; ++i) std::this_thread::sleep_for(1ms);
        run_rows(port, {{"service", "POST", "/api/process", "{}", 503, "UNAVAILABLE"}});
        hold.get();
        busy.shutdown(3s);
    }

    const auto dir = fs::temp_directory_path() / fmt::format("mlserve_accept_static_{}", ::getpid());
    fs::create_directories(dir / "site");
    std::ofstream(dir / "site" / "index.html") << "<html></html>";
    std::ofstream(dir / "secret") << "secret";

    auto make_app = [](int port, double timeout) {
        UIAppDefinition app;
        app.descriptor = {"modes",
                          {{"mode", ui::SingleChoice{"Mode", {"ok", "unprocessable", "slow", "reject", "misfit"}}}},
                          {{"value", ui::Number{"Value", std::nullopt, std::nullopt, false}}},
                          ""};
        app.service_url = fmt::format("http://127.0.0.1:{}", port);
        app.relay_timeout_s = timeout;
        app.prepare_request = [](const json& in) {
            if (in["mode"] == "reject") throw Error("REJECTED", "hook refused the input");
            return json{{"mode", in["mode"]}, {"value", 3}};
        };
        app.process_response = [](const json& req, const json& resp) -> std::vector<DisplayItem> {
            if (req["mode"] == "misfit") return {display::TextDisplay{"Value", "three"}};
            return {display::NumberDisplay{"Value", resp["value"].get<double>()}};
        };
        return app;
    };
    UIGateway gw(make_app(service.port(), 1.0), {"127.0.0.1", 0, dir / "site"});
    gw.start();
    run_rows(gw.port(), {
                            {"gateway", "POST", "/ui/submit", "{bad", 400, "BAD_REQUEST"},
                            {"gateway", "GET", "/missing.js", "", 404, "NOT_FOUND"},
                            {"gateway", "GET", "/../secret", "", 404, "NOT_FOUND"},
                            {"gateway", "POST", "/ui/submit", R"({"mode":"nope"})", 422, "VALIDATION_FAILED"},
                            {"gateway", "POST", "/ui/submit", R"({"mode":"reject"})", 422, "UNPROCESSABLE"},
                            {"gateway", "POST", "/ui/submit", R"({"mode":"misfit"})", 500, "OUTPUT_SCHEMA_VIOLATION"},
                            {"gateway", "POST", "/ui/submit", R"({"mode":"unprocessable"})", 502, "UPSTREAM"},
                        });
    UIGateway slow_gw(make_app(service.port(), 0.3), {"127.0.0.1", 0, {}});
    slow_gw.start();
    run_rows(slow_gw.port(), {{"gateway", "POST", "/ui/submit", R"({"mode":"slow"})", 504, "TIMEOUT"}});
    UIGateway dead_gw(make_app(proc::free_port(), 1.0), {"127.0.0.1", 0, {}});
    dead_gw.start();
    run_rows(dead_gw.port(), {{"gateway", "POST", "/ui/submit", R"({"mode":"ok"})", 502, "UPSTREAM"}});

    gw.stop();
    slow_gw.stop();
    dead_gw.stop();
    service.shutdown(3s);
    fs::remove_all(dir);
    return fmt::format("{} non-200 paths, all enveloped with the expected code", rows);
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<std::string(Check&)>>> criteria = {
        {"tensor-codec", tensor_codec},     {"schema", schema},           {"linear-model", linear_model},
        {"seasonal-naive", seasonal_naive}, {"otsu", otsu},               {"labeling", labeling},
        {"end-to-end-http", end_to_end},    {"concurrency", concurrency}, {"error-envelope", error_envelope},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Check c;
        std::string detail;
        try {
            detail = fn(c);
        } catch (const std::exception& e) {
            c.expect(false, std::string("threw: ") + e.what());
        }
        if (c.ok()) {
            std::cout << fmt::format("PASS {:<16} {}\n", name, detail);
        } else {
            ++failed;
            std::cout << fmt::format("FAIL {:<16} {}\n", name, c.summary());
        }
        std::cout.flush();
    }
    std::cout << fmt::format("{}/{} criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
    return failed == 0 ? 0 : 1;
}
