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
#include "mlserve/cli.hpp"

#include <csignal>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <httplib.h>
#include <nlohmann/json.hpp>
#include <pthread.h>

#include "mlserve/http_util.hpp"

#ifndef MLSERVE_DEFAULT_WEB_DIR
#define MLSERVE_DEFAULT_WEB_DIR "web"
#endif

namespace mlserve::cli {

using nlohmann::json;

namespace {

constexpr auto kDrainBudget = std::chrono::milliseconds(8000);

// Blocks SIGINT/SIGTERM for the whole process (must run before any thread
// is spawned) and delivers them to one waiter thread instead.
class ShutdownSignals {
public:
    ShutdownSignals() {
        sigemptyset(&set_);
        sigaddset(&set_, SIGINT);
        sigaddset(&set_, SIGTERM);
        pthread_sigmask(SIG_BLOCK, &set_, nullptr);
    }

    ~ShutdownSignals() {
        if (waiter_.joinable()) waiter_.join();
    }

    template <typename F>
    void on_signal(F&& handler) {
        waiter_ = std::thread([this, handler = std::forward<F>(handler)] {
            int sig = 0;
            sigwait(&set_, &sig);
            std::cerr << fmt::format("mlserve: received {}, shutting down\n", sig == SIGINT ? "SIGINT" : "SIGTERM");
            handler();
        });
    }

private:
    sigset_t set_{};
    std::thread waiter_;
};

std::unique_ptr<httplib::Client> make_client(const std::string& url, double timeout_s, std::string& prefix) {
    const auto endpoint = http::parse_service_url(url);
    prefix = endpoint.path_prefix;
    auto client = std::make_unique<httplib::Client>(endpoint.scheme_host_port);
    const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::duration<double>(timeout_s));
    client->set_connection_timeout(timeout);
    client->set_read_timeout(timeout);
    client->set_write_timeout(timeout);
    return client;
}

std::optional<std::string> read_input(const std::string& path) {
    if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

int cmd_serve(const ServeOptions& options) {
    const auto* app = apps::find_app(options.app);
    if (!app) {
        std::cerr << "mlserve: unknown app '" << options.app << "'\n";
        return kUsage;
    }
    ShutdownSignals signals;
    std::unique_ptr<RestServer> server;
    try {
        server = std::make_unique<RestServer>(app->make_service(options.app_options), options.server);
        server->start();
    } catch (const Error& e) {
        std::cerr << fmt::format("mlserve: {}: {}\n", e.code(), e.what());
        return kFailure;
    }
    signals.on_signal([&server] { server->shutdown(kDrainBudget); });
    server->wait();
    std::cerr << "mlserve: stopped\n";
    return kOk;
}

int cmd_ui(const UiOptions& options) {
    const auto* app = apps::find_app(options.app);
    if (!app) {
        std::cerr << "mlserve: unknown app '" << options.app << "'\n";
        return kUsage;
    }
    ShutdownSignals signals;
    std::unique_ptr<UIGateway> gateway;
    try {
        auto definition = app->make_ui(options.service_url);
        definition.relay_timeout_s = options.relay_timeout_s;
        gateway = std::make_unique<UIGateway>(std::move(definition), options.gateway);
        gateway->start();
    } catch (const Error& e) {
        std::cerr << fmt::format("mlserve: {}: {}\n", e.code(), e.what());
        return e.code() == "BAD_URL" ? kUsage : kFailure;
    }
    signals.on_signal([&gateway] { gateway->stop(); });
    gateway->wait();
    std::cerr << "mlserve: stopped\n";
    return kOk;
}

int cmd_call(const CallOptions& options) {
    const auto text = read_input(options.input_path);
    if (!text) {
        std::cerr << "mlserve: cannot read input file '" << options.input_path << "'\n";
        return kUsage;
    }
    const auto request = json::parse(*text, nullptr, false);
    if (request.is_discarded() || !request.is_object()) {
        std::cerr << "mlserve: input must contain a JSON object\n";
        return kUsage;
    }
    std::string prefix;
    std::unique_ptr<httplib::Client> client;
    try {
        client = make_client(options.service_url, options.timeout_s, prefix);
    } catch (const Error& e) {
        std::cerr << "mlserve: " << e.what() << '\n';
        return kUsage;
    }
    const auto res = client->Post(prefix + "/api/process", request.dump(), "application/json");
    if (!res) {
        std::cerr << fmt::format("mlserve: cannot reach {}: {}\n", options.service_url, httplib::to_string(res.error()));
        return kConnection;
    }
    if (res->status != 200) {
        std::cerr << fmt::format("mlserve: service replied HTTP {}\n{}\n", res->status, res->body);
        return kFailure;
    }
    if (options.output_path == "-") {
        std::cout << res->body << '\n';
        std::cout.flush();
        return kOk;
    }
    std::ofstream out(options.output_path, std::ios::binary);
    out << res->body << '\n';
    if (!out) {
        std::cerr << "mlserve: cannot write output file '" << options.output_path << "'\n";
        return kUsage;
    }
    return kOk;
}

int cmd_health(const HealthOptions& options) {
    std::string prefix;
    std::unique_ptr<httplib::Client> client;
    try {
        client = make_client(options.service_url, options.timeout_s, prefix);
    } catch (const Error& e) {
        std::cerr << "mlserve: " << e.what() << '\n';
        return kUsage;
    }
    const auto res = client->Get(prefix + "/health");
    if (!res) {
        std::cerr << fmt::format("mlserve: cannot reach {}: {}\n", options.service_url, httplib::to_string(res.error()));
        return kFailure;
    }
    const auto body = json::parse(res->body, nullptr, false);
    const bool healthy = res->status == 200 && body.is_object() && body.contains("status") &&
                         body["status"] == "ok" && body.contains("service") && body["service"].is_string();
    if (!healthy) {
        std::cerr << fmt::format("mlserve: unhealthy (HTTP {})\n{}\n", res->status, res->body);
        return kFailure;
    }
    std::cout << res->body << '\n';
    return kOk;
}

int run(int argc, char** argv) {
    CLI::App app{"Serve model-inference services over JSON/HTTP with a generated web UI", "mlserve"};
    app.require_subcommand(1);
    const auto names = apps::app_names();

    ServeOptions serve;
    auto* serve_cmd = app.add_subcommand("serve", "Run an app's inference service (POST /api/process, GET /health)");
    serve_cmd->add_option("app", serve.app, "Application to serve")->required()->check(CLI::IsMember(names))->envname("MLSERVE_APP");
    serve_cmd->add_option("--host", serve.server.bind_host, "Bind address")->capture_default_str()->envname("MLSERVE_HOST");
    serve_cmd->add_option("--port", serve.server.bind_port, "Bind port")->capture_default_str()->check(CLI::Range(1, 65535))->envname("MLSERVE_PORT");
    serve_cmd->add_option("--workers", serve.server.workers, "Concurrent process() invocations")->capture_default_str()->check(CLI::Range(1, 1024))->envname("MLSERVE_WORKERS");
    serve_cmd->add_option("--queue-capacity", serve.server.queue_capacity, "Requests allowed to wait for a worker")->capture_default_str()->envname("MLSERVE_QUEUE_CAPACITY");
    serve_cmd->add_option("--max-body-bytes", serve.server.max_body_bytes, "Largest accepted request body")->capture_default_str()->check(CLI::PositiveNumber)->envname("MLSERVE_MAX_BODY_BYTES");
    serve_cmd->add_option("--request-timeout", serve.server.request_timeout_s, "Seconds before a request answers 504")->capture_default_str()->check(CLI::PositiveNumber)->envname("MLSERVE_REQUEST_TIMEOUT");
    serve_cmd->add_option("--min-cell-px", serve.app_options.min_cell_px, "segment: smallest kept component")->capture_default_str()->envname("MLSERVE_MIN_CELL_PX");

    UiOptions ui;
    ui.gateway.static_dir = MLSERVE_DEFAULT_WEB_DIR;
    std::string static_dir = ui.gateway.static_dir.string();
    auto* ui_cmd = app.add_subcommand("ui", "Run the web UI gateway for an app");
    ui_cmd->add_option("app", ui.app, "Application UI")->required()->check(CLI::IsMember(names))->envname("MLSERVE_APP");
    ui_cmd->add_option("--service-url", ui.service_url, "Base URL of the running service")->required()->envname("MLSERVE_SERVICE_URL");
    ui_cmd->add_option("--host", ui.gateway.bind_host, "Bind address")->capture_default_str()->envname("MLSERVE_HOST");
    ui_cmd->add_option("--port", ui.gateway.bind_port, "Bind port")->capture_default_str()->check(CLI::Range(1, 65535))->envname("MLSERVE_PORT");
    ui_cmd->add_option("--static-dir", static_dir, "Frontend bundle directory")->capture_default_str()->envname("MLSERVE_STATIC_DIR");
    ui_cmd->add_option("--relay-timeout", ui.relay_timeout_s, "Seconds to wait for the service")->capture_default_str()->check(CLI::PositiveNumber)->envname("MLSERVE_RELAY_TIMEOUT");

    CallOptions call;
    auto* call_cmd = app.add_subcommand("call", "POST a JSON request file to a service");
    call_cmd->add_option("--service-url", call.service_url, "Base URL of the service")->required()->envname("MLSERVE_SERVICE_URL");
    call_cmd->add_option("-i,--input", call.input_path, "Request JSON file ('-' for stdin)")->required()->envname("MLSERVE_INPUT");
    call_cmd->add_option("-o,--output", call.output_path, "Response destination ('-' for stdout)")->capture_default_str()->envname("MLSERVE_OUTPUT");
    call_cmd->add_option("--timeout", call.timeout_s, "Seconds to wait for the reply")->capture_default_str()->check(CLI::PositiveNumber)->envname("MLSERVE_TIMEOUT");

    HealthOptions health;
    auto* health_cmd = app.add_subcommand("health", "Check a service's /health endpoint");
    health_cmd->add_option("--service-url", health.service_url, "Base URL of the service")->required()->envname("MLSERVE_SERVICE_URL");
    health_cmd->add_option("--timeout", health.timeout_s, "Seconds to wait for the reply")->capture_default_str()->check(CLI::PositiveNumber)->envname("MLSERVE_TIMEOUT");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "mlserve: " << e.what() << "\n\n" << app.help();
        return kUsage;
    }

    if (serve_cmd->parsed()) return cmd_serve(serve);
    if (ui_cmd->parsed()) {
        ui.gateway.static_dir = static_dir;
        return cmd_ui(ui);
    }
    if (call_cmd->parsed()) return cmd_call(call);
    return cmd_health(health);
}

}  // namespace mlserve::cli
