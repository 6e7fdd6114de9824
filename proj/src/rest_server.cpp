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
#include "mlserve/rest_server.hpp"

#include <iostream>

#include <fmt/format.h>

#include "mlserve/http_util.hpp"

namespace mlserve {

using nlohmann::json;

void ServerConfig::validate(bool allow_ephemeral_port) const {
    auto bad = [](const std::string& m) { return Error("BAD_CONFIG", m); };
    if (bind_host.empty()) throw bad("bind host must not be empty");
    if (bind_port < (allow_ephemeral_port ? 0 : 1) || bind_port > 65535) {
        throw bad(fmt::format("port {} outside 1-65535", bind_port));
    }
    if (workers < 1) throw bad("workers must be >= 1");
    if (max_body_bytes < 1) throw bad("max body bytes must be >= 1");
    if (!(request_timeout_s > 0)) throw bad("request timeout must be > 0");
}

RestServer::RestServer(std::shared_ptr<Service> service, ServerConfig config)
    : config_(std::move(config)), host_(std::move(service)) {
    config_.validate(true);
}

RestServer::~RestServer() {
    server_.stop();
    if (listener_.joinable()) listener_.join();
}

void RestServer::start() {
    host_.load();
    pool_ = std::make_unique<WorkerPool>(config_.workers, config_.queue_capacity);

    // Connection threads only wait on the pool; size them so health checks
    // still find a free thread when every pool slot is occupied.
    const std::size_t http_threads = config_.workers + config_.queue_capacity + 16;
    server_.new_task_queue = [http_threads] { return new httplib::ThreadPool(http_threads); };
    server_.set_payload_max_length(config_.max_body_bytes);
    const auto timeout = std::chrono::duration<double>(config_.request_timeout_s) + std::chrono::seconds(5);
    server_.set_write_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout));
    http::use_exclusive_port(server_);
    http::install_error_envelope(server_);

    server_.Post("/api/process", [this](const httplib::Request& req, httplib::Response& res) { handle_process(req, res); });
    server_.Get("/health", [this](const httplib::Request&, httplib::Response& res) { handle_health(res); });

    if (config_.bind_port == 0) {
        port_ = server_.bind_to_any_port(config_.bind_host);
        if (port_ < 0) throw BindFailure(fmt::format("cannot bind {}:<any>", config_.bind_host));
    } else {
        if (!server_.bind_to_port(config_.bind_host, config_.bind_port)) {
            throw BindFailure(fmt::format("cannot bind {}:{}", config_.bind_host, config_.bind_port));
        }
        port_ = config_.bind_port;
    }
    listener_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    std::cerr << fmt::format("mlserve: service '{}' {} listening on http://{}:{} (workers={}, queue_capacity={})\n",
                             host_.info().name, host_.info().version, config_.bind_host, port_, config_.workers,
                             config_.queue_capacity);
}

void RestServer::wait() {
    if (listener_.joinable()) listener_.join();
}

void RestServer::shutdown(std::chrono::milliseconds drain) {
    if (pool_) {
        pool_->close();
        pool_->wait_idle(drain);
    }
    server_.stop();
}

void RestServer::handle_health(httplib::Response& res) const {
    http::send_json(res, 200, {{"status", "ok"}, {"service", host_.info().name}, {"version", host_.info().version}});
}

void RestServer::handle_process(const httplib::Request& req, httplib::Response& res) {
    if (req.body.size() > config_.max_body_bytes) {
        return http::send_error(res, 413, "PAYLOAD_TOO_LARGE",
                                fmt::format("body exceeds {} bytes", config_.max_body_bytes));
    }
    auto request = json::parse(req.body, nullptr, false);
    if (request.is_discarded()) return http::send_error(res, 400, "BAD_REQUEST", "body is not valid JSON");
    if (!request.is_object()) return http::send_error(res, 400, "BAD_REQUEST", "top-level JSON value must be an object");

    auto future = pool_->try_submit([this, request = std::move(request)] { return host_.process(request); });
    if (!future) {
        return http::send_error(res, 503, "UNAVAILABLE", "all workers busy and the queue is full, retry later");
    }
    if (future->wait_for(std::chrono::duration<double>(config_.request_timeout_s)) != std::future_status::ready) {
        return http::send_error(res, 504, "TIMEOUT",
                                fmt::format("processing exceeded {} s", config_.request_timeout_s));
    }
    try {
        http::send_json(res, 200, future->get());
    } catch (const ServiceError& e) {
        const int status = e.kind() == ServiceErrorCode::BAD_REQUEST     ? 400
                           : e.kind() == ServiceErrorCode::UNPROCESSABLE ? 422
                                                                         : 500;
        http::send_error(res, status, e.code(), e.what(), e.detail());
    } catch (const std::exception& e) {
        http::send_error(res, 500, "INTERNAL", e.what());
    }
}

}  // namespace mlserve
