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
#include <doctest.h>

#include <chrono>
#include <future>
#include <thread>

#include <httplib.h>

#include "mlserve/http_util.hpp"
#include "mlserve/rest_server.hpp"
#include "fixtures.hpp"

using namespace mlserve;
using namespace std::chrono_literals;
using nlohmann::json;

namespace {

class ScriptedService : public Service {
public:
    ServiceInfo info() const override { return {"scripted", "2.1.0", ""}; }
    void load_model() override {
        if (fail_load) throw std::runtime_error("no weights");
    }
    json process(const json& request) const override {
        const auto mode = request.value("mode", std::string("ok"));
        if (mode == "unprocessable") throw ServiceError(ServiceErrorCode::UNPROCESSABLE, "nope", json{{"field", "x"}});
        if (mode == "bad") throw ServiceError(ServiceErrorCode::BAD_REQUEST, "malformed");
        if (mode == "crash") throw std::runtime_error("segfault-ish");
        if (mode == "slow") std::this_thread::sleep_for(std::chrono::milliseconds(request.value("ms", 0)));
        return {{"ok", true}, {"echo", request}};
    }
    bool fail_load = false;
};

ServerConfig test_config() {
    ServerConfig cfg;
    cfg.bind_port = 0;
    return cfg;
}

json envelope_of(const httplib::Result& r) {
    REQUIRE(r);
    CHECK(http::is_error_envelope(r->body));
    CHECK(r->get_header_value("Content-Type").starts_with("application/json"));
    return json::parse(r->body)["error"];
}

}  // namespace

TEST_CASE("process and health") {
    RestServer server(std::make_shared<ScriptedService>(), test_config());
    server.start();
    httplib::Client cli("127.0.0.1", server.port());

    auto ok = cli.Post("/api/process", R"({"a":1})", "application/json");
    REQUIRE(ok);
    CHECK(ok->status == 200);
    CHECK(json::parse(ok->body)["echo"]["a"] == 1);

    auto health = cli.Get("/health");
    REQUIRE(health);
    CHECK(health->status == 200);
    CHECK(json::parse(health->body) == json{{"status", "ok"}, {"service", "scripted"}, {"version", "2.1.0"}});
    server.shutdown(1s);
    server.wait();
}

TEST_CASE("every failure is an error envelope") {
    auto cfg = test_config();
    cfg.max_body_bytes = 1024;
    RestServer server(std::make_shared<ScriptedService>(), cfg);
    server.start();
    httplib::Client cli("127.0.0.1", server.port());

    struct Case {
        std::string path;
        std::string body;
        int status;
        std::string code;
    };
    const std::vector<Case> cases = {
        {"/api/process", "{not json", 400, "BAD_REQUEST"},
        {"/api/process", "[1,2]", 400, "BAD_REQUEST"},
        {"/api/process", R"({"mode":"bad"})", 400, "BAD_REQUEST"},
        {"/api/process", R"({"mode":"unprocessable"})", 422, "UNPROCESSABLE"},
        {"/api/process", R"({"mode":"crash"})", 500, "INTERNAL"},
        {"/api/process", std::string(4096, ' '), 413, "PAYLOAD_TOO_LARGE"},
        {"/nowhere", "{}", 404, "NOT_FOUND"},
    };
    for (const auto& c : cases) {
        CAPTURE(c.body.substr(0, 30));
        auto r = cli.Post(c.path, c.body, "application/json");
        REQUIRE(r);
        CHECK(r->status == c.status);
        CHECK(envelope_of(r)["code"] == c.code);
    }
    auto unprocessable = cli.Post("/api/process", R"({"mode":"unprocessable"})", "application/json");
    CHECK(envelope_of(unprocessable)["detail"] == json{{"field", "x"}});

    auto get_process = cli.Get("/api/process");
    REQUIRE(get_process);
    CHECK(get_process->status >= 400);
    envelope_of(get_process);
    server.shutdown(1s);
}

TEST_CASE("timeout answers 504") {
    auto cfg = test_config();
    cfg.request_timeout_s = 0.2;
    RestServer server(std::make_shared<ScriptedService>(), cfg);
    server.start();
    httplib::Client cli("127.0.0.1", server.port());
    auto r = cli.Post("/api/process", R"({"mode":"slow","ms":800})", "application/json");
    REQUIRE(r);
    CHECK(r->status == 504);
    CHECK(envelope_of(r)["code"] == "TIMEOUT");
    server.shutdown(2s);
}

TEST_CASE("saturation answers 503 while health stays up") {
    auto cfg = test_config();
    cfg.workers = 1;
    cfg.queue_capacity = 0;
    RestServer server(std::make_shared<ScriptedService>(), cfg);
    server.start();
    const int port = server.port();

    auto slow = std::async(std::launch::async, [port] {
        httplib::Client c("127.0.0.1", port);
        return c.Post("/api/process", R"({"mode":"slow","ms":600})", "application/json");
    });
    for (int i = 0; i < 100 && server.pool().in_flight() == 0; ++i) std::this_thread::sleep_for(5ms);
    REQUIRE(server.pool().in_flight() == 1);

    httplib::Client cli("127.0.0.1", port);
    auto rejected = cli.Post("/api/process", "{}", "application/json");
    REQUIRE(rejected);
    CHECK(rejected->status == 503);
    CHECK(envelope_of(rejected)["code"] == "UNAVAILABLE");

    const auto t0 = std::chrono::steady_clock::now();
    auto health = cli.Get("/health");
    REQUIRE(health);
    CHECK(health->status == 200);
    CHECK(std::chrono::steady_clock::now() - t0 < 300ms);

    auto first = slow.get();
    REQUIRE(first);
    CHECK(first->status == 200);
    server.shutdown(1s);
}

TEST_CASE("queued requests run one at a time in arrival order") {
    auto stub = std::make_shared<fixtures::StallingService>(20ms);
    auto cfg = test_config();
    cfg.workers = 1;
    cfg.queue_capacity = 8;
    RestServer server(stub, cfg);
    server.start();
    const int port = server.port();
    std::vector<std::future<int>> replies;
    for (int i = 0; i < 6; ++i) {
        replies.push_back(std::async(std::launch::async, [port, i] {
            httplib::Client c("127.0.0.1", port);
            auto r = c.Post("/api/process", json{{"id", i}}.dump(), "application/json");
            return r ? r->status : -1;
        }));
        // Stagger so arrival order is well defined.
        std::this_thread::sleep_for(5ms);
    }
    for (auto& r : replies) CHECK(r.get() == 200);
    CHECK(stub->peak() == 1);
    CHECK(stub->completion_order() == std::vector<int>{0, 1, 2, 3, 4, 5});
    server.shutdown(1s);
}

TEST_CASE("load failure prevents serving") {
    auto svc = std::make_shared<ScriptedService>();
    svc->fail_load = true;
    RestServer server(svc, test_config());
    CHECK_THROWS_AS(server.start(), LoadFailure);
}

TEST_CASE("bind failure is reported") {
    RestServer first(std::make_shared<ScriptedService>(), test_config());
    first.start();
    auto cfg = test_config();
    cfg.bind_port = first.port();
    RestServer second(std::make_shared<ScriptedService>(), cfg);
    CHECK_THROWS_AS(second.start(), BindFailure);
    first.shutdown(1s);
}

TEST_CASE("config validation") {
    ServerConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.bind_port = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    CHECK_NOTHROW(cfg.validate(true));
    cfg.bind_port = 70000;
    CHECK_THROWS_AS(cfg.validate(true), Error);
    cfg = ServerConfig{};
    cfg.workers = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = ServerConfig{};
    cfg.request_timeout_s = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("parse_service_url") {
    auto e = http::parse_service_url("http://127.0.0.1:8000");
    CHECK(e.scheme_host_port == "http://127.0.0.1:8000");
    CHECK(e.path_prefix == "");
    e = http::parse_service_url("http://svc:9/base/");
    CHECK(e.scheme_host_port == "http://svc:9");
    CHECK(e.path_prefix == "/base");
    CHECK_THROWS_AS(http::parse_service_url("ftp://x"), Error);
    CHECK_THROWS_AS(http::parse_service_url(""), Error);
}
