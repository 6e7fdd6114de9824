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
#include "mlserve/service.hpp"

namespace mlserve {

std::string_view service_error_name(ServiceErrorCode code) {
    switch (code) {
        case ServiceErrorCode::BAD_REQUEST: return "BAD_REQUEST";
        case ServiceErrorCode::UNPROCESSABLE: return "UNPROCESSABLE";
        case ServiceErrorCode::INTERNAL: return "INTERNAL";
    }
    return "INTERNAL";
}

ServiceError::ServiceError(ServiceErrorCode code, const std::string& message, std::optional<nlohmann::json> detail)
    : Error(std::string(service_error_name(code)), message.empty() ? std::string(service_error_name(code)) : message),
      kind_(code),
      detail_(std::move(detail)) {}

ServiceHost::ServiceHost(std::shared_ptr<Service> service) : service_(std::move(service)) {
    if (!service_) throw LoadFailure("no service");
    info_ = service_->info();
    if (info_.name.empty()) throw LoadFailure("service name must not be empty");
}

void ServiceHost::load() {
    if (load_started_.exchange(true)) throw LoadFailure("load_model called more than once");
    try {
        service_->load_model();
    } catch (const std::exception& e) {
        throw LoadFailure(std::string("load_model failed: ") + e.what());
    } catch (...) {
        throw LoadFailure("load_model failed with a non-standard exception");
    }
    loaded_.store(true, std::memory_order_release);
}

nlohmann::json ServiceHost::process(const nlohmann::json& request) const {
    if (!loaded()) throw ServiceError(ServiceErrorCode::INTERNAL, "process called before load_model completed");
    if (!request.is_object()) throw ServiceError(ServiceErrorCode::BAD_REQUEST, "request must be a JSON object");
    nlohmann::json response;
    try {
        response = service_->process(request);
    } catch (const ServiceError&) {
        throw;
    } catch (const std::exception& e) {
        throw ServiceError(ServiceErrorCode::INTERNAL, std::string("unexpected failure: ") + e.what());
    } catch (...) {
        throw ServiceError(ServiceErrorCode::INTERNAL, "unexpected non-standard exception");
    }
    if (!response.is_object()) throw ServiceError(ServiceErrorCode::INTERNAL, "service returned a non-object response");
    return response;
}

}  // namespace mlserve
