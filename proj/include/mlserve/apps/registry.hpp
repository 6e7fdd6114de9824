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

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mlserve/gateway.hpp"
#include "mlserve/service.hpp"

namespace mlserve::apps {

struct AppOptions {
    std::size_t min_cell_px = 4;
};

struct AppEntry {
    std::string_view name;
    std::function<std::shared_ptr<Service>(const AppOptions&)> make_service;
    std::function<UIAppDefinition(std::string service_url)> make_ui;
};

// nullptr when unknown.
const AppEntry* find_app(std::string_view name);
std::vector<std::string> app_names();

}  // namespace mlserve::apps
