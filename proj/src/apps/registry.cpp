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
#include "mlserve/apps/registry.hpp"

#include "mlserve/apps/forecast.hpp"
#include "mlserve/apps/segment.hpp"

namespace mlserve::apps {

namespace {

const std::vector<AppEntry>& entries() {
    static const std::vector<AppEntry> table = {
        {"forecast", [](const AppOptions&) { return forecast::make_service(); }, forecast::ui_app},
        {"segment", [](const AppOptions& o) { return segment::make_service(o.min_cell_px); }, segment::ui_app},
    };
    return table;
}

}  // namespace

const AppEntry* find_app(std::string_view name) {
    for (const auto& e : entries()) {
        if (e.name == name) return &e;
    }
    return nullptr;
}

std::vector<std::string> app_names() {
    std::vector<std::string> out;
    for (const auto& e : entries()) out.emplace_back(e.name);
    return out;
}

}  // namespace mlserve::apps
