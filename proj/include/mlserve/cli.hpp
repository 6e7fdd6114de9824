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
#include <string>

#include "mlserve/apps/registry.hpp"
#include "mlserve/rest_server.hpp"

namespace mlserve::cli {

// Stable exit codes; scripts depend on them.
enum ExitCode : int {
    kOk = 0,
    kFailure = 1,     // non-200 reply, bind/load failure, unhealthy
    kUsage = 2,       // bad flags or unreadable/invalid input
    kConnection = 3,  // call: service unreachable
};

struct ServeOptions {
    std::string app;
    ServerConfig server;
    apps::AppOptions app_options;
};

struct UiOptions {
    std::string app;
    std::string service_url;
    GatewayConfig gateway;
    double relay_timeout_s = 300.0;
};

struct CallOptions {
    std::string service_url;
    std::string input_path;
    std::string output_path = "-";
    double timeout_s = 300.0;
};

struct HealthOptions {
    std::string service_url;
    double timeout_s = 5.0;
};

// Block until SIGINT/SIGTERM, then drain and exit.
int cmd_serve(const ServeOptions& options);
int cmd_ui(const UiOptions& options);
int cmd_call(const CallOptions& options);
int cmd_health(const HealthOptions& options);

// Parses argv (flags win over MLSERVE_* environment variables) and dispatches.
int run(int argc, char** argv);

}  // namespace mlserve::cli
