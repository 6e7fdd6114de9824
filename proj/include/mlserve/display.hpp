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

#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "mlserve/schema.hpp"
#include "mlserve/tensor.hpp"

namespace mlserve {

// Rendered results returned by a UI app's process_response hook, one per
// output-schema slot.
namespace display {

struct LineSeries {
    std::string label;
    // ISO-8601 strings for time axes, plain numbers otherwise.
    std::variant<std::vector<std::string>, std::vector<double>> x;
    std::vector<double> y;
};

struct PlotLine {
    std::string title;
    std::vector<LineSeries> series;
};

// u8 image of shape [H,W] or [H,W,3].
struct PlotImage {
    std::string title;
    TensorPayload image;
};

struct NumberDisplay {
    std::string label;
    double value = 0.0;
};

struct FileDownload {
    std::string filename;
    std::string content_base64;
    std::string mime;
};

struct TextDisplay {
    std::string label;
    std::string text;
};

}  // namespace display

using DisplayItem = std::variant<display::PlotLine, display::PlotImage, display::NumberDisplay, display::FileDownload,
                                 display::TextDisplay>;

std::string_view display_kind(const DisplayItem& item);

// {"type": "PlotLine", ...}
nlohmann::json display_to_wire(const DisplayItem& item);
// Throws Error(BAD_DISPLAY_ITEM).
DisplayItem display_from_wire(const nlohmann::json& wire);

// Whether `item` may fill an output slot of type `slot`.
bool fits_slot(const DisplayItem& item, const UIType& slot);

// Throws Error(OUTPUT_SCHEMA_VIOLATION) on a malformed item (ragged series,
// bad image shape or dtype).
void check_display_item(const DisplayItem& item);

}  // namespace mlserve
