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

#include <filesystem>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "mlserve/display.hpp"
#include "mlserve/schema.hpp"

namespace mlserve {

// A web UI for one remote service. Hooks run inside the gateway process.
struct UIAppDefinition {
    SchemaDescriptor descriptor;
    std::string service_url;
    // Validated user inputs -> service request. Throwing mlserve::Error
    // reports 422 to the user.
    std::function<nlohmann::json(const nlohmann::json& inputs)> prepare_request;
    // (request, response) -> one DisplayItem per output slot.
    std::function<std::vector<DisplayItem>(const nlohmann::json& request, const nlohmann::json& response)>
        process_response;
    double relay_timeout_s = 300.0;
};

struct GatewayConfig {
    std::string bind_host = "127.0.0.1";
    int bind_port = 8080;  // 0 = ephemeral
    std::filesystem::path static_dir;
};

struct GatewayReply {
    int status = 200;
    nlohmann::json body;
};

// Routes:
//   GET  /ui/schema  wire schema of the app
//   POST /ui/submit  validate -> prepare_request -> relay -> process_response
//   GET  /{path}     static frontend bundle ("/" serves index.html)
class UIGateway {
public:
    UIGateway(UIAppDefinition app, GatewayConfig config);
    ~UIGateway();

    UIGateway(const UIGateway&) = delete;
    UIGateway& operator=(const UIGateway&) = delete;

    // Throws BindFailure.
    void start();
    void wait();
    // Safe from any thread; wait() returns afterwards.
    void stop();
    int port() const noexcept { return port_; }

    nlohmann::json schema() const;
    // The full submit pipeline without HTTP framing on the inbound side.
    GatewayReply submit(const nlohmann::json& body) const;

private:
    void serve_static(const httplib::Request& req, httplib::Response& res) const;

    UIAppDefinition app_;
    GatewayConfig config_;
    nlohmann::json wire_schema_;
    httplib::Server server_;
    std::thread listener_;
    int port_ = 0;
};

// Content type used for static files, by extension.
std::string_view content_type_for(const std::filesystem::path& path);

}  // namespace mlserve
