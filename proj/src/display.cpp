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
#include "mlserve/display.hpp"

#include "mlserve/error.hpp"

namespace mlserve {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

[[noreturn]] void violation(const std::string& message) { throw Error("OUTPUT_SCHEMA_VIOLATION", message); }

}  // namespace

std::string_view display_kind(const DisplayItem& item) {
    constexpr std::string_view names[] = {"PlotLine", "PlotImage", "NumberDisplay", "FileDownload", "TextDisplay"};
    return names[item.index()];
}

json display_to_wire(const DisplayItem& item) {
    json j = std::visit(
        overloaded{
            [](const display::PlotLine& p) {
                json series = json::array();
                for (const auto& s : p.series) {
                    json x = std::visit([](const auto& v) { return json(v); }, s.x);
                    series.push_back({{"label", s.label}, {"x", x}, {"y", s.y}});
                }
                return json{{"title", p.title}, {"series", series}};
            },
            [](const display::PlotImage& p) { return json{{"title", p.title}, {"image", to_json(p.image)}}; },
            [](const display::NumberDisplay& n) { return json{{"label", n.label}, {"value", n.value}}; },
            [](const display::FileDownload& f) {
                return json{{"filename", f.filename}, {"content_base64", f.content_base64}, {"mime", f.mime}};
            },
            [](const display::TextDisplay& t) { return json{{"label", t.label}, {"text", t.text}}; },
        },
        item);
    j["type"] = display_kind(item);
    return j;
}

DisplayItem display_from_wire(const json& w) {
    try {
        const auto type = w.at("type").get<std::string>();
        if (type == "PlotLine") {
            display::PlotLine p{w.at("title").get<std::string>(), {}};
            for (const auto& s : w.at("series")) {
                display::LineSeries ls;
                ls.label = s.at("label").get<std::string>();
                const auto& x = s.at("x");
                if (!x.empty() && x.front().is_string()) {
                    ls.x = x.get<std::vector<std::string>>();
                } else {
                    ls.x = x.get<std::vector<double>>();
                }
                ls.y = s.at("y").get<std::vector<double>>();
                p.series.push_back(std::move(ls));
            }
            return p;
        }
        if (type == "PlotImage") return display::PlotImage{w.at("title").get<std::string>(), payload_from_json(w.at("image"))};
        if (type == "NumberDisplay") return display::NumberDisplay{w.at("label").get<std::string>(), w.at("value").get<double>()};
        if (type == "FileDownload") {
            return display::FileDownload{w.at("filename").get<std::string>(), w.at("content_base64").get<std::string>(),
                                         w.at("mime").get<std::string>()};
        }
        if (type == "TextDisplay") return display::TextDisplay{w.at("label").get<std::string>(), w.at("text").get<std::string>()};
        throw Error("BAD_DISPLAY_ITEM", "unknown display type '" + type + "'");
    } catch (const json::exception& e) {
        throw Error("BAD_DISPLAY_ITEM", e.what());
    }
}

bool fits_slot(const DisplayItem& item, const UIType& slot) {
    return std::visit(overloaded{
                          [&](const display::PlotLine&) {
                              const auto* p = std::get_if<ui::Plot>(&slot);
                              return p && p->kind == ui::PlotKind::line;
                          },
                          [&](const display::PlotImage&) {
                              const auto* p = std::get_if<ui::Plot>(&slot);
                              return p && p->kind == ui::PlotKind::image;
                          },
                          [&](const display::NumberDisplay&) { return std::holds_alternative<ui::Number>(slot); },
                          [&](const display::FileDownload&) { return std::holds_alternative<ui::File>(slot); },
                          [&](const display::TextDisplay&) { return std::holds_alternative<ui::Text>(slot); },
                      },
                      item);
}

void check_display_item(const DisplayItem& item) {
    std::visit(overloaded{
                   [](const display::PlotLine& p) {
                       for (const auto& s : p.series) {
                           const auto nx = std::visit([](const auto& v) { return v.size(); }, s.x);
                           if (nx != s.y.size()) violation("series '" + s.label + "' has unequal x and y lengths");
                       }
                   },
                   [](const display::PlotImage& p) {
                       const auto& shape = p.image.shape;
                       if (p.image.dtype != "u8") violation("PlotImage must be u8");
                       if (!(shape.size() == 2 || (shape.size() == 3 && shape[2] == 3))) {
                           violation("PlotImage shape must be [H,W] or [H,W,3]");
                       }
                   },
                   [](const auto&) {},
               },
               item);
}

}  // namespace mlserve
