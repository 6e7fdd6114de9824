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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace mlserve {

// UI control catalog. Each variant serializes under its struct name as the
// "type" tag.
namespace ui {

struct Text {
    std::string label;
    bool operator==(const Text&) const = default;
};
struct TextLong {
    std::string label;
    bool operator==(const TextLong&) const = default;
};
struct Number {
    std::string label;
    std::optional<double> min;
    std::optional<double> max;
    bool integer_only = false;
    bool operator==(const Number&) const = default;
};
struct Range {
    std::string label;
    double min = 0.0;
    double max = 1.0;
    double step = 0.1;
    bool operator==(const Range&) const = default;
};
struct SingleChoice {
    std::string label;
    std::vector<std::string> options;
    bool operator==(const SingleChoice&) const = default;
};
struct MultipleChoice {
    std::string label;
    std::vector<std::string> options;
    bool operator==(const MultipleChoice&) const = default;
};
struct File {
    std::string label;
    std::optional<std::vector<std::string>> extensions;
    bool operator==(const File&) const = default;
};
struct ImageFile {
    std::string label;
    bool operator==(const ImageFile&) const = default;
};
struct CSVFile {
    std::string label;
    bool operator==(const CSVFile&) const = default;
};
struct TimeSeriesCSVFile {
    std::string label;
    std::string time_column;
    std::string value_column;
    bool operator==(const TimeSeriesCSVFile&) const = default;
};
enum class PlotKind { line, image };
struct Plot {
    std::string label;
    PlotKind kind = PlotKind::line;
    bool operator==(const Plot&) const = default;
};

}  // namespace ui

using UIType = std::variant<ui::Text, ui::TextLong, ui::Number, ui::Range, ui::SingleChoice, ui::MultipleChoice,
                            ui::File, ui::ImageFile, ui::CSVFile, ui::TimeSeriesCSVFile, ui::Plot>;

std::string_view type_name(const UIType& type);
const std::string& label_of(const UIType& type);
bool is_file_type(const UIType& type);

struct Field {
    std::string name;
    UIType type;
    bool operator==(const Field&) const = default;
};

using InputSchema = std::vector<Field>;
using OutputSchema = std::vector<Field>;

struct SchemaDescriptor {
    std::string app_name;
    InputSchema inputs;
    OutputSchema outputs;
    std::string description;

    bool operator==(const SchemaDescriptor&) const = default;
};

// Throws SchemaParseError naming the first violated invariant.
void check_descriptor(const SchemaDescriptor& d);

nlohmann::json schema_to_wire(const SchemaDescriptor& d);
// Throws SchemaParseError with the offending path, e.g. "inputs[0].type".
SchemaDescriptor schema_from_wire(const nlohmann::json& wire);

enum class IssueCode { MISSING, TYPE_MISMATCH, OUT_OF_RANGE, UNKNOWN_OPTION, BAD_FILE, UNKNOWN_FIELD };
std::string_view issue_code_name(IssueCode code);

struct ValidationIssue {
    std::string field;
    IssueCode code;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;

    bool ok() const { return issues.empty(); }
    bool has(std::string_view field, IssueCode code) const;
    nlohmann::json to_json() const;
};

// Total over any JSON value; every problem lands in the report.
ValidationReport validate_input(const InputSchema& schema, const nlohmann::json& raw);

// File-family inputs travel as {"filename": ..., "content_base64": ...}.
struct UploadedFile {
    std::string filename;
    std::vector<std::uint8_t> content;

    std::string_view text() const { return {reinterpret_cast<const char*>(content.data()), content.size()}; }
};

// Expects a value that already passed validate_input.
UploadedFile decode_upload(const nlohmann::json& value);
nlohmann::json encode_upload(std::string_view filename, std::string_view content);

}  // namespace mlserve
