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
#include <cstddef>
#include <memory>
#include <string>
#include <thread>

#include <httplib.h>

#include "mlserve/service.hpp"
#include "mlserve/worker_pool.hpp"

namespace mlserve {

struct ServerConfig {
    std::string bind_host = "127.0.0.1";
    // 0 asks the OS for an ephemeral port (programmatic use only; the CLI
    // requires 1-65535).
    int bind_port = 8000;
    std::size_t workers = 1;
    std::size_t queue_capacity = 32;
    std::size_t max_body_bytes = std::size_t{64} << 20;
    double request_timeout_s = 300.0;

    // Throws Error(BAD_CONFIG).
    void validate(bool allow_ephemeral_port = false) const;
};

class BindFailure : public Error {
public:
    explicit BindFailure(const std::string& message) : Error("BIND_FAILURE", message) {}
};

// Serves one Service:
//   POST /api/process  JSON object in, JSON object out, through the pool
//   GET  /health       {"status":"ok","service":...,"version":...}, never pooled
class RestServer {
public:
    RestServer(std::shared_ptr<Service> service, ServerConfig config);
    ~RestServer();

    RestServer(const RestServer&) = delete;
    RestServer& operator=(const RestServer&) = delete;

    // Loads the model, binds, and starts accepting on a background thread.
    // Throws LoadFailure or BindFailure; nothing is served on failure.
    void start();
    // Blocks until the listener exits.
    void wait();
    // Rejects new work with 503, waits up to `drain` for admitted work, then
    // stops the listener.
    void shutdown(std::chrono::milliseconds drain);

    int port() const noexcept { return port_; }
    const ServerConfig& config() const noexcept { return config_; }
    const WorkerPool& pool() const noexcept { return *pool_; }
    const ServiceHost& host() const noexcept { return host_; }

private:
    void handle_process(const httplib::Request& req, httplib::Response& res);
    void handle_health(httplib::Response& res) const;

    ServerConfig config_;
    ServiceHost host_;
    std::unique_ptr<WorkerPool> pool_;
    httplib::Server server_;
    std::thread listener_;
    int port_ = 0;
};

}  // namespace mlserve
