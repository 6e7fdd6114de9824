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

#include <optional>
#include <string>
#include <string_view>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace mlserve::http {

// {"error": {"code": ..., "message": ..., "detail"?: ...}}
nlohmann::json error_envelope(std::string_view code, std::string_view message,
                              const std::optional<nlohmann::json>& detail = std::nullopt);

// True when `body` parses as an error envelope.
bool is_error_envelope(std::string_view body);

void send_json(httplib::Response& res, int status, const nlohmann::json& body);
void send_error(httplib::Response& res, int status, std::string_view code, std::string_view message,
                const std::optional<nlohmann::json>& detail = std::nullopt);

// Status-derived code for responses produced outside our handlers
// (routing misses, oversized bodies).
std::string_view default_error_code(int status);

// Plain SO_REUSEADDR; httplib's default SO_REUSEPORT would let a second
// server silently share the port.
void use_exclusive_port(httplib::Server& server);

// Fills an envelope into any >= 400 response that has no body yet and turns
// escaped exceptions into 500 INTERNAL.
void install_error_envelope(httplib::Server& server);

// Parses "http://host:port[/prefix]" into a client; throws Error(BAD_URL).
struct Endpoint {
    std::string scheme_host_port;
    std::string path_prefix;
};
Endpoint parse_service_url(std::string_view url);

}  // namespace mlserve::http
