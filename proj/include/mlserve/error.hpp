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

#include <stdexcept>
#include <string>
#include <utility>

namespace mlserve {

// Base for every error the library raises. `code()` is a stable
// machine-readable identifier (e.g. "LENGTH_MISMATCH") that callers and
// tests match on; what() carries the human-readable message.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

// Tensor payload and Base64 failures: BAD_BASE64, LENGTH_MISMATCH,
// VALUE_RANGE, UNKNOWN_DTYPE.
class CodecError : public Error {
    using Error::Error;
};

// Time-series CSV failures. `row()` is the 1-based data row (header is
// row 0); -1 when the failure is not tied to a row.
class CsvError : public Error {
public:
    CsvError(std::string code, const std::string& message, long row = -1)
        : Error(std::move(code), message), row_(row) {}

    long row() const noexcept { return row_; }

private:
    long row_;
};

// Always code SCHEMA_PARSE; path() names the offending wire location.
class SchemaParseError : public Error {
public:
    SchemaParseError(std::string path, const std::string& message)
        : Error("SCHEMA_PARSE", path + ": " + message), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace mlserve
