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
#include "mlserve/gateway.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <fmt/format.h>

#include "mlserve/http_util.hpp"
#include "mlserve/rest_server.hpp"

namespace mlserve {

using nlohmann::json;

namespace {

GatewayReply error_reply(int status, std::string_view code, std::string_view message,
                         const std::optional<json>& detail = std::nullopt) {
    return {status, http::error_envelope(code, message, detail)};
}

bool has_dotdot_segment(std::string_view path) {
    std::size_t start = 0;
    while (start <= path.size()) {
        auto end = path.find_first_of("/\\", start);
        if (end == std::string_view::npos) end = path.size();
        if (path.substr(start, end - start) == "..") return true;
        start = end + 1;
    }
    return false;
}

}  // namespace

std::string_view content_type_for(const std::filesystem::path& path) {
    const auto ext = path.extension().string();
    if (ext == ".html" || ext == ".htm") return "text/html; charset=utf-8";
    if (ext == ".js" || ext == ".mjs") return "text/javascript; charset=utf-8";
    if (ext == ".css") return "text/css; charset=utf-8";
    if (ext == ".json" || ext == ".map") return "application/json";
    if (ext == ".svg") return "image/svg+xml";
    if (ext == ".png") return "image/png";
    if (ext == ".ico") return "image/x-icon";
    if (ext == ".wasm") return "application/wasm";
    if (ext == ".txt") return "text/plain; charset=utf-8";
    return "application/octet-stream";
}

UIGateway::UIGateway(UIAppDefinition app, GatewayConfig config) : app_(std::move(app)), config_(std::move(config)) {
    check_descriptor(app_.descriptor);
    if (!app_.prepare_request || !app_.process_response) throw Error("BAD_CONFIG", "both UI hooks are required");
    (void)http::parse_service_url(app_.service_url);
    wire_schema_ = schema_to_wire(app_.descriptor);
}

UIGateway::~UIGateway() {
    stop();
    wait();
}

json UIGateway::schema() const { return wire_schema_; }

GatewayReply UIGateway::submit(const json& body) const {
    const auto report = validate_input(app_.descriptor.inputs, body);
    if (!report.ok()) {
        return error_reply(422, "VALIDATION_FAILED", "inputs do not match the input schema", report.to_json());
    }

    json request;
    try {
        request = app_.prepare_request(body);
    } catch (const Error& e) {
        return error_reply(422, "UNPROCESSABLE", e.what(), json{{"cause", e.code()}});
    } catch (const std::exception& e) {
        return error_reply(500, "INTERNAL", std::string("prepare_request failed: ") + e.what());
    }
    if (!request.is_object()) return error_reply(500, "INTERNAL", "prepare_request must return a JSON object");

    const auto endpoint = http::parse_service_url(app_.service_url);
    httplib::Client client(endpoint.scheme_host_port);
    const auto timeout = std::chrono::duration<double>(app_.relay_timeout_s);
    const auto timeout_us = std::chrono::duration_cast<std::chrono::microseconds>(timeout);
    client.set_connection_timeout(timeout_us);
    client.set_read_timeout(timeout_us);
    client.set_write_timeout(timeout_us);

    const auto started = std::chrono::steady_clock::now();
    const auto upstream = client.Post(endpoint.path_prefix + "/api/process", request.dump(), "application/json");
    if (!upstream) {
        const auto elapsed = std::chrono::steady_clock::now() - started;
        if (upstream.error() == httplib::Error::ConnectionTimeout ||
            (upstream.error() == httplib::Error::Read && elapsed >= timeout * 0.95)) {
            return error_reply(504, "TIMEOUT", fmt::format("service did not answer within {} s", app_.relay_timeout_s));
        }
        return error_reply(502, "UPSTREAM",
                           fmt::format("cannot reach service at {}: {}", app_.service_url,
                                       httplib::to_string(upstream.error())));
    }
    auto response = json::parse(upstream->body, nullptr, false);
    if (upstream->status != 200) {
        json detail = {{"status", upstream->status},
                       {"body", response.is_discarded() ? json(upstream->body) : response}};
        return error_reply(502, "UPSTREAM", fmt::format("service replied with HTTP {}", upstream->status), detail);
    }
    if (response.is_discarded() || !response.is_object()) {
        return error_reply(502, "UPSTREAM", "service replied with a non-object body",
                           json{{"status", upstream->status}, {"body", upstream->body}});
    }

    std::vector<DisplayItem> items;
    try {
        items = app_.process_response(request, response);
    } catch (const std::exception& e) {
        return error_reply(500, "INTERNAL", std::string("process_response failed: ") + e.what());
    }
    const auto& slots = app_.descriptor.outputs;
    if (items.size() != slots.size()) {
        return error_reply(500, "OUTPUT_SCHEMA_VIOLATION",
                           fmt::format("process_response returned {} items for {} output slots", items.size(),
                                       slots.size()));
    }
    json outputs = json::array();
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (!fits_slot(items[i], slots[i].type)) {
            return error_reply(500, "OUTPUT_SCHEMA_VIOLATION",
                               fmt::format("output {} ('{}') is a {}, slot type is {}", i, slots[i].name,
                                           display_kind(items[i]), type_name(slots[i].type)));
        }
        try {
            check_display_item(items[i]);
        } catch (const Error& e) {
            return error_reply(500, "OUTPUT_SCHEMA_VIOLATION", fmt::format("output {}: {}", i, e.what()));
        }
        outputs.push_back(display_to_wire(items[i]));
    }
    return {200, json{{"outputs", outputs}}};
}

void UIGateway::serve_static(const httplib::Request& req, httplib::Response& res) const {
    auto not_found = [&] { http::send_error(res, 404, "NOT_FOUND", "no such file: " + req.path); };
    if (config_.static_dir.empty() || has_dotdot_segment(req.path)) return not_found();
    std::string rel = req.path;
    while (rel.starts_with('/')) rel.erase(0, 1);
    if (rel.empty()) rel = "index.html";
    std::error_code ec;
    const auto root = std::filesystem::weakly_canonical(config_.static_dir, ec);
    if (ec) return not_found();
    const auto file = std::filesystem::weakly_canonical(root / rel, ec);
    if (ec) return not_found();
    const auto [root_end, _] = std::mismatch(root.begin(), root.end(), file.begin(), file.end());
    if (root_end != root.end() || !std::filesystem::is_regular_file(file, ec)) return not_found();
    std::ifstream in(file, std::ios::binary);
    if (!in) return not_found();
    std::ostringstream buf;
    buf << in.rdbuf();
    res.status = 200;
    res.set_content(buf.str(), std::string(content_type_for(file)));
}

void UIGateway::start() {
    server_.new_task_queue = [] { return new httplib::ThreadPool(16); };
    http::use_exclusive_port(server_);
    http::install_error_envelope(server_);
    server_.Get("/ui/schema", [this](const httplib::Request&, httplib::Response& res) {
        http::send_json(res, 200, wire_schema_);
    });
    server_.Post("/ui/submit", [this](const httplib::Request& req, httplib::Response& res) {
        const auto body = json::parse(req.body, nullptr, false);
        if (body.is_discarded()) return http::send_error(res, 400, "BAD_REQUEST", "body is not valid JSON");
        const auto reply = submit(body);
        http::send_json(res, reply.status, reply.body);
    });
    server_.Get(R"(/.*)", [this](const httplib::Request& req, httplib::Response& res) { serve_static(req, res); });

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
    std::cerr << fmt::format("mlserve: UI '{}' on http://{}:{} relaying to {}\n", app_.descriptor.app_name,
                             config_.bind_host, port_, app_.service_url);
}

void UIGateway::wait() {
    if (listener_.joinable()) listener_.join();
}

void UIGateway::stop() { server_.stop(); }

}  // namespace mlserve
