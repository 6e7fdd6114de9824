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
#include "mlserve/http_util.hpp"

#include "mlserve/error.hpp"

namespace mlserve::http {

using nlohmann::json;

json error_envelope(std::string_view code, std::string_view message, const std::optional<json>& detail) {
    json err = {{"code", code}, {"message", message.empty() ? code : message}};
    if (detail) err["detail"] = *detail;
    return {{"error", err}};
}

bool is_error_envelope(std::string_view body) {
    const auto j = json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("error")) return false;
    const auto& e = j["error"];
    return e.is_object() && e.contains("code") && e["code"].is_string() && e.contains("message") &&
           e["message"].is_string();
}

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code, std::string_view message,
                const std::optional<json>& detail) {
    send_json(res, status, error_envelope(code, message, detail));
}

std::string_view default_error_code(int status) {
    switch (status) {
        case 400: return "BAD_REQUEST";
        case 404: return "NOT_FOUND";
        case 405: return "METHOD_NOT_ALLOWED";
        case 413: return "PAYLOAD_TOO_LARGE";
        case 414: return "URI_TOO_LONG";
        case 416: return "RANGE_NOT_SATISFIABLE";
        case 422: return "UNPROCESSABLE";
        case 500: return "INTERNAL";
        case 502: return "UPSTREAM";
        case 503: return "UNAVAILABLE";
        case 504: return "TIMEOUT";
        default: return status < 500 ? "BAD_REQUEST" : "INTERNAL";
    }
}

void use_exclusive_port(httplib::Server& server) {
    server.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
}

void install_error_envelope(httplib::Server& server) {
    server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
        if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
        std::string message = httplib::status_message(res.status);
        if (res.status == 404) message = "no route for " + req.method + " " + req.path;
        send_error(res, res.status, default_error_code(res.status), message);
        return httplib::Server::HandlerResponse::Handled;
    });
    server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string message = "unexpected failure";
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            message = e.what();
        } catch (...) {
        }
        send_error(res, 500, "INTERNAL", message);
    });
}

Endpoint parse_service_url(std::string_view url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string_view::npos || url.substr(0, scheme_end) != "http") {
        throw Error("BAD_URL", "service URL must start with http://: '" + std::string(url) + "'");
    }
    const auto path_start = url.find('/', scheme_end + 3);
    Endpoint ep;
    ep.scheme_host_port = std::string(url.substr(0, path_start));
    if (ep.scheme_host_port.size() <= scheme_end + 3) throw Error("BAD_URL", "service URL has no host");
    if (path_start != std::string_view::npos) {
        ep.path_prefix = std::string(url.substr(path_start));
        while (ep.path_prefix.ends_with('/')) ep.path_prefix.pop_back();
    }
    return ep;
}

}  // namespace mlserve::http
