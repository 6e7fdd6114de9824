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
#include "mlserve/schema.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "mlserve/base64.hpp"
#include "mlserve/error.hpp"

namespace mlserve {

using nlohmann::json;

namespace {

constexpr std::string_view kTypeNames[] = {"Text",           "TextLong", "Number",  "Range",
                                           "SingleChoice",   "MultipleChoice", "File", "ImageFile",
                                           "CSVFile",        "TimeSeriesCSVFile", "Plot"};
static_assert(std::size(kTypeNames) == std::variant_size_v<UIType>);

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

// ---- descriptor invariants -------------------------------------------------

void check_options(const std::vector<std::string>& options, const std::string& path) {
    if (options.empty()) throw SchemaParseError(path + ".options", "must not be empty");
    std::set<std::string_view> seen;
    for (std::size_t i = 0; i < options.size(); ++i) {
        if (options[i].empty()) throw SchemaParseError(fmt::format("{}.options[{}]", path, i), "must not be empty");
        if (!seen.insert(options[i]).second) {
            throw SchemaParseError(fmt::format("{}.options[{}]", path, i), "duplicate option '" + options[i] + "'");
        }
    }
}

void check_type(const UIType& type, const std::string& path) {
    std::visit(overloaded{
                   [&](const ui::Number& n) {
                       if ((n.min && !std::isfinite(*n.min)) || (n.max && !std::isfinite(*n.max))) {
                           throw SchemaParseError(path, "Number bounds must be finite");
                       }
                       if (n.min && n.max && *n.min > *n.max) throw SchemaParseError(path + ".min", "min exceeds max");
                   },
                   [&](const ui::Range& r) {
                       if (!std::isfinite(r.min) || !std::isfinite(r.max) || !std::isfinite(r.step)) {
                           throw SchemaParseError(path, "Range parameters must be finite");
                       }
                       if (!(r.min < r.max)) throw SchemaParseError(path + ".min", "Range requires min < max");
                       if (!(r.step > 0)) throw SchemaParseError(path + ".step", "Range requires step > 0");
                       if (r.step > r.max - r.min) throw SchemaParseError(path + ".step", "Range step exceeds max - min");
                   },
                   [&](const ui::SingleChoice& c) { check_options(c.options, path); },
                   [&](const ui::MultipleChoice& c) { check_options(c.options, path); },
                   [&](const ui::File& f) {
                       if (f.extensions) {
                           for (std::size_t i = 0; i < f.extensions->size(); ++i) {
                               if ((*f.extensions)[i].empty()) {
                                   throw SchemaParseError(fmt::format("{}.extensions[{}]", path, i), "must not be empty");
                               }
                           }
                       }
                   },
                   [&](const ui::TimeSeriesCSVFile& t) {
                       if (t.time_column.empty()) throw SchemaParseError(path + ".time_column", "must not be empty");
                       if (t.value_column.empty()) throw SchemaParseError(path + ".value_column", "must not be empty");
                   },
                   [](const auto&) {},
               },
               type);
}

void check_fields(const std::vector<Field>& fields, std::string_view section, bool output) {
    std::set<std::string_view> names;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const std::string path = fmt::format("{}[{}]", section, i);
        const auto& f = fields[i];
        if (f.name.empty()) throw SchemaParseError(path + ".name", "must not be empty");
        if (!names.insert(f.name).second) throw SchemaParseError(path + ".name", "duplicate name '" + f.name + "'");
        const bool allowed_output = std::holds_alternative<ui::Plot>(f.type) ||
                                    std::holds_alternative<ui::Number>(f.type) ||
                                    std::holds_alternative<ui::File>(f.type) || std::holds_alternative<ui::Text>(f.type);
        if (output && !allowed_output) {
            throw SchemaParseError(path + ".type", fmt::format("{} is not allowed in an output schema", type_name(f.type)));
        }
        if (!output && std::holds_alternative<ui::Plot>(f.type)) {
            throw SchemaParseError(path + ".type", "Plot is not allowed in an input schema");
        }
        check_type(f.type, path);
    }
}

// ---- wire parsing helpers --------------------------------------------------

class Reader {
public:
    Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) throw SchemaParseError(path_, "expected an object");
    }

    const json* find(const char* key) {
        used_.insert(key);
        const auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    const json& require(const char* key) {
        const json* v = find(key);
        if (!v) throw SchemaParseError(at(key), "missing");
        return *v;
    }

    std::string string(const char* key) {
        const json& v = require(key);
        if (!v.is_string()) throw SchemaParseError(at(key), "expected a string");
        return v.get<std::string>();
    }

    double number(const char* key) {
        const json& v = require(key);
        if (!v.is_number()) throw SchemaParseError(at(key), "expected a number");
        return v.get<double>();
    }

    std::optional<double> optional_number(const char* key) {
        const json* v = find(key);
        if (!v || v->is_null()) return std::nullopt;
        if (!v->is_number()) throw SchemaParseError(at(key), "expected a number or null");
        return v->get<double>();
    }

    std::vector<std::string> strings(const json& v, const char* key) {
        if (!v.is_array()) throw SchemaParseError(at(key), "expected an array of strings");
        std::vector<std::string> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_string()) throw SchemaParseError(fmt::format("{}[{}]", at(key), i), "expected a string");
            out.push_back(v[i].get<std::string>());
        }
        return out;
    }

    void reject_unknown() const {
        for (const auto& [key, _] : obj_.items()) {
            if (!used_.contains(key)) throw SchemaParseError(at(key.c_str()), "unknown key");
        }
    }

    std::string at(const char* key) const { return path_.empty() ? std::string(key) : path_ + "." + key; }

private:
    const json& obj_;
    std::string path_;
    std::set<std::string, std::less<>> used_;
};

UIType parse_type(Reader& r, const std::string& tag, const std::string& path) {
    if (std::find(std::begin(kTypeNames), std::end(kTypeNames), tag) == std::end(kTypeNames)) {
        throw SchemaParseError(path + ".type", "unknown UI type '" + tag + "'");
    }
    const std::string label = r.string("label");
    if (tag == "Text") return ui::Text{label};
    if (tag == "TextLong") return ui::TextLong{label};
    if (tag == "Number") {
        ui::Number n{label, r.optional_number("min"), r.optional_number("max"), false};
        if (const json* io = r.find("integer_only")) {
            if (!io->is_boolean()) throw SchemaParseError(r.at("integer_only"), "expected a boolean");
            n.integer_only = io->get<bool>();
        }
        return n;
    }
    if (tag == "Range") return ui::Range{label, r.number("min"), r.number("max"), r.number("step")};
    if (tag == "SingleChoice") return ui::SingleChoice{label, r.strings(r.require("options"), "options")};
    if (tag == "MultipleChoice") return ui::MultipleChoice{label, r.strings(r.require("options"), "options")};
    if (tag == "File") {
        ui::File f{label, std::nullopt};
        if (const json* ext = r.find("extensions"); ext && !ext->is_null()) f.extensions = r.strings(*ext, "extensions");
        return f;
    }
    if (tag == "ImageFile") return ui::ImageFile{label};
    if (tag == "CSVFile") return ui::CSVFile{label};
    if (tag == "TimeSeriesCSVFile") return ui::TimeSeriesCSVFile{label, r.string("time_column"), r.string("value_column")};
    if (tag == "Plot") {
        const std::string kind = r.string("kind");
        if (kind == "line") return ui::Plot{label, ui::PlotKind::line};
        if (kind == "image") return ui::Plot{label, ui::PlotKind::image};
        throw SchemaParseError(r.at("kind"), "expected \"line\" or \"image\"");
    }
    throw SchemaParseError(path + ".type", "unknown UI type '" + tag + "'");
}

std::vector<Field> parse_fields(const json& wire, const char* section) {
    const auto it = wire.find(section);
    if (it == wire.end()) throw SchemaParseError(section, "missing");
    if (!it->is_array()) throw SchemaParseError(section, "expected an array");
    std::vector<Field> out;
    for (std::size_t i = 0; i < it->size(); ++i) {
        const std::string path = fmt::format("{}[{}]", section, i);
        Reader r((*it)[i], path);
        Field f;
        f.name = r.string("name");
        const std::string tag = r.string("type");
        f.type = parse_type(r, tag, path);
        r.reject_unknown();
        out.push_back(std::move(f));
    }
    return out;
}

json type_to_wire(const Field& f) {
    json j = {{"name", f.name}, {"type", type_name(f.type)}, {"label", label_of(f.type)}};
    std::visit(overloaded{
                   [&](const ui::Number& n) {
                       if (n.min) j["min"] = *n.min;
                       if (n.max) j["max"] = *n.max;
                       j["integer_only"] = n.integer_only;
                   },
                   [&](const ui::Range& r) {
                       j["min"] = r.min;
                       j["max"] = r.max;
                       j["step"] = r.step;
                   },
                   [&](const ui::SingleChoice& c) { j["options"] = c.options; },
                   [&](const ui::MultipleChoice& c) { j["options"] = c.options; },
                   [&](const ui::File& file) {
                       if (file.extensions) j["extensions"] = *file.extensions;
                   },
                   [&](const ui::TimeSeriesCSVFile& t) {
                       j["time_column"] = t.time_column;
                       j["value_column"] = t.value_column;
                   },
                   [&](const ui::Plot& p) { j["kind"] = p.kind == ui::PlotKind::line ? "line" : "image"; },
                   [](const auto&) {},
               },
               f.type);
    return j;
}

// ---- input validation -----------------------------------------------------

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

bool has_extension(std::string_view filename, const std::vector<std::string>& extensions) {
    const std::string name = lower(filename);
    return std::any_of(extensions.begin(), extensions.end(), [&](const std::string& ext) {
        std::string e = lower(ext);
        if (!e.starts_with('.')) e.insert(e.begin(), '.');
        return name.size() > e.size() && name.ends_with(e);
    });
}

void validate_value(const Field& field, const json& v, std::vector<ValidationIssue>& issues) {
    auto issue = [&](IssueCode code, std::string message) { issues.push_back({field.name, code, std::move(message)}); };
    auto check_file = [&](const std::vector<std::string>* extensions) {
        if (!v.is_object()) return issue(IssueCode::TYPE_MISMATCH, "expected an object {filename, content_base64}");
        const auto name = v.find("filename");
        const auto content = v.find("content_base64");
        if (v.size() != 2 || name == v.end() || content == v.end() || !name->is_string() || !content->is_string()) {
            return issue(IssueCode::BAD_FILE, "file must be exactly {filename: string, content_base64: string}");
        }
        try {
            (void)base64::decode(content->get_ref<const std::string&>());
        } catch (const Error& e) {
            return issue(IssueCode::BAD_FILE, e.what());
        }
        if (extensions && !has_extension(name->get_ref<const std::string&>(), *extensions)) {
            issue(IssueCode::BAD_FILE, "file extension not accepted");
        }
    };

    std::visit(overloaded{
                   [&](const ui::Text&) {
                       if (!v.is_string()) issue(IssueCode::TYPE_MISMATCH, "expected a string");
                   },
                   [&](const ui::TextLong&) {
                       if (!v.is_string()) issue(IssueCode::TYPE_MISMATCH, "expected a string");
                   },
                   [&](const ui::Number& n) {
                       if (!v.is_number()) return issue(IssueCode::TYPE_MISMATCH, "expected a number");
                       const double x = v.get<double>();
                       if (n.integer_only && x != std::trunc(x)) {
                           return issue(IssueCode::TYPE_MISMATCH, "expected an integer");
                       }
                       if ((n.min && x < *n.min) || (n.max && x > *n.max)) {
                           issue(IssueCode::OUT_OF_RANGE, fmt::format("{} is outside the allowed bounds", x));
                       }
                   },
                   [&](const ui::Range& r) {
                       if (!v.is_number()) return issue(IssueCode::TYPE_MISMATCH, "expected a number");
                       const double x = v.get<double>();
                       if (x < r.min || x > r.max) {
                           return issue(IssueCode::OUT_OF_RANGE, fmt::format("{} is outside [{}, {}]", x, r.min, r.max));
                       }
                       const double k = (x - r.min) / r.step;
                       if (std::abs(k - std::round(k)) > 1e-9 * std::max(1.0, std::abs(k))) {
                           issue(IssueCode::OUT_OF_RANGE, fmt::format("{} is not a multiple of step {}", x, r.step));
                       }
                   },
                   [&](const ui::SingleChoice& c) {
                       if (!v.is_string()) return issue(IssueCode::TYPE_MISMATCH, "expected a string");
                       if (std::find(c.options.begin(), c.options.end(), v.get<std::string>()) == c.options.end()) {
                           issue(IssueCode::UNKNOWN_OPTION, "'" + v.get<std::string>() + "' is not an option");
                       }
                   },
                   [&](const ui::MultipleChoice& c) {
                       if (!v.is_array() || !std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_string(); })) {
                           return issue(IssueCode::TYPE_MISMATCH, "expected an array of strings");
                       }
                       for (const auto& e : v) {
                           if (std::find(c.options.begin(), c.options.end(), e.get<std::string>()) == c.options.end()) {
                               issue(IssueCode::UNKNOWN_OPTION, "'" + e.get<std::string>() + "' is not an option");
                           }
                       }
                   },
                   [&](const ui::File& f) { check_file(f.extensions ? &*f.extensions : nullptr); },
                   [&](const ui::ImageFile&) { check_file(nullptr); },
                   [&](const ui::CSVFile&) { check_file(nullptr); },
                   [&](const ui::TimeSeriesCSVFile&) { check_file(nullptr); },
                   [&](const ui::Plot&) { issue(IssueCode::TYPE_MISMATCH, "Plot fields accept no input"); },
               },
               field.type);
}

}  // namespace

std::string_view type_name(const UIType& type) { return kTypeNames[type.index()]; }

const std::string& label_of(const UIType& type) {
    return std::visit([](const auto& t) -> const std::string& { return t.label; }, type);
}

bool is_file_type(const UIType& type) {
    return std::holds_alternative<ui::File>(type) || std::holds_alternative<ui::ImageFile>(type) ||
           std::holds_alternative<ui::CSVFile>(type) || std::holds_alternative<ui::TimeSeriesCSVFile>(type);
}

void check_descriptor(const SchemaDescriptor& d) {
    check_fields(d.inputs, "inputs", false);
    check_fields(d.outputs, "outputs", true);
}

json schema_to_wire(const SchemaDescriptor& d) {
    json inputs = json::array();
    json outputs = json::array();
    for (const auto& f : d.inputs) inputs.push_back(type_to_wire(f));
    for (const auto& f : d.outputs) outputs.push_back(type_to_wire(f));
    return {{"app_name", d.app_name}, {"description", d.description}, {"inputs", inputs}, {"outputs", outputs}};
}

SchemaDescriptor schema_from_wire(const json& wire) {
    Reader r(wire, "");
    SchemaDescriptor d;
    d.app_name = r.string("app_name");
    d.description = r.string("description");
    r.require("inputs");
    r.require("outputs");
    r.reject_unknown();
    d.inputs = parse_fields(wire, "inputs");
    d.outputs = parse_fields(wire, "outputs");
    check_descriptor(d);
    return d;
}

std::string_view issue_code_name(IssueCode code) {
    switch (code) {
        case IssueCode::MISSING: return "MISSING";
        case IssueCode::TYPE_MISMATCH: return "TYPE_MISMATCH";
        case IssueCode::OUT_OF_RANGE: return "OUT_OF_RANGE";
        case IssueCode::UNKNOWN_OPTION: return "UNKNOWN_OPTION";
        case IssueCode::BAD_FILE: return "BAD_FILE";
        case IssueCode::UNKNOWN_FIELD: return "UNKNOWN_FIELD";
    }
    return "UNKNOWN";
}

bool ValidationReport::has(std::string_view field, IssueCode code) const {
    return std::any_of(issues.begin(), issues.end(),
                       [&](const ValidationIssue& i) { return i.field == field && i.code == code; });
}

json ValidationReport::to_json() const {
    json list = json::array();
    for (const auto& i : issues) {
        list.push_back({{"field_name", i.field}, {"issue_code", issue_code_name(i.code)}, {"message", i.message}});
    }
    return {{"ok", ok()}, {"issues", list}};
}

ValidationReport validate_input(const InputSchema& schema, const json& raw) {
    ValidationReport report;
    if (!raw.is_object()) {
        report.issues.push_back({"", IssueCode::TYPE_MISMATCH, "inputs must be a JSON object"});
        return report;
    }
    for (const auto& field : schema) {
        const auto it = raw.find(field.name);
        if (it == raw.end()) {
            report.issues.push_back({field.name, IssueCode::MISSING, "required field is missing"});
            continue;
        }
        validate_value(field, *it, report.issues);
    }
    for (const auto& [key, _] : raw.items()) {
        const bool known = std::any_of(schema.begin(), schema.end(), [&](const Field& f) { return f.name == key; });
        if (!known) report.issues.push_back({key, IssueCode::UNKNOWN_FIELD, "field is not part of the input schema"});
    }
    return report;
}

UploadedFile decode_upload(const json& value) {
    return {value.at("filename").get<std::string>(), base64::decode(value.at("content_base64").get<std::string>())};
}

json encode_upload(std::string_view filename, std::string_view content) {
    return {{"filename", filename}, {"content_base64", base64::encode(content)}};
}

}  // namespace mlserve
