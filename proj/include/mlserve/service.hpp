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

#include <atomic>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "mlserve/error.hpp"

namespace mlserve {

enum class ServiceErrorCode { BAD_REQUEST, UNPROCESSABLE, INTERNAL };
std::string_view service_error_name(ServiceErrorCode code);

class ServiceError : public Error {
public:
    ServiceError(ServiceErrorCode code, const std::string& message, std::optional<nlohmann::json> detail = std::nullopt);

    ServiceErrorCode kind() const noexcept { return kind_; }
    const std::optional<nlohmann::json>& detail() const noexcept { return detail_; }

private:
    ServiceErrorCode kind_;
    std::optional<nlohmann::json> detail_;
};

// Raised when load_model fails; servers refuse to start.
class LoadFailure : public Error {
public:
    explicit LoadFailure(const std::string& message) : Error("LOAD_FAILURE", message) {}
};

struct ServiceInfo {
    std::string name;
    std::string version;
    std::string description;
};

// What an application implements. process() must be read-only with respect
// to model state so the server can call it from several workers at once.
class Service {
public:
    virtual ~Service() = default;

    virtual ServiceInfo info() const = 0;
    virtual void load_model() = 0;
    virtual nlohmann::json process(const nlohmann::json& request) const = 0;
};

// Enforces the lifecycle around a Service: load exactly once, never process
// before loading, normalize every failure into a ServiceError.
class ServiceHost {
public:
    explicit ServiceHost(std::shared_ptr<Service> service);

    // Throws LoadFailure on any exception from load_model or on a second call.
    void load();
    bool loaded() const noexcept { return loaded_.load(std::memory_order_acquire); }

    // Throws ServiceError only.
    nlohmann::json process(const nlohmann::json& request) const;

    const ServiceInfo& info() const noexcept { return info_; }

private:
    std::shared_ptr<Service> service_;
    ServiceInfo info_;
    std::atomic<bool> loaded_{false};
    std::atomic<bool> load_started_{false};
};

}  // namespace mlserve
