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
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace mlserve {

enum class DType { u8, u16, i32, f32, f64 };

std::string_view dtype_name(DType dtype);
// Throws CodecError(UNKNOWN_DTYPE).
DType parse_dtype(std::string_view name);
std::size_t dtype_size(DType dtype);

using Shape = std::vector<std::size_t>;

// Element count of a shape; the empty shape is a scalar with one element.
// Throws CodecError(LENGTH_MISMATCH) on overflow.
std::size_t element_count(const Shape& shape);

// Typed, row-major n-d array. Elements are kept in their native type so
// f32/f64 bit patterns (NaN payloads included) survive untouched.
struct Tensor {
    using Storage = std::variant<std::vector<std::uint8_t>, std::vector<std::uint16_t>, std::vector<std::int32_t>,
                                 std::vector<float>, std::vector<double>>;

    Storage data;
    Shape shape;

    DType dtype() const { return static_cast<DType>(data.index()); }
    std::size_t size() const;

    template <typename T>
    const std::vector<T>& values() const { return std::get<std::vector<T>>(data); }

    bool operator==(const Tensor& other) const;  // bitwise on element storage
};

// Wire form: {"data": <base64>, "dtype": <name>, "shape": [..]}. dtype stays
// a string here so decode can report UNKNOWN_DTYPE.
struct TensorPayload {
    std::string data;
    std::string dtype;
    Shape shape;

    bool operator==(const TensorPayload&) const = default;
};

// Row-major, little-endian, standard padded Base64.
// Throws CodecError(LENGTH_MISMATCH) when the element count disagrees with shape.
TensorPayload encode_tensor(const Tensor& tensor);

// Numeric-list convenience. Throws LENGTH_MISMATCH, or VALUE_RANGE when an
// element is not exactly representable in `dtype`.
TensorPayload encode_tensor(std::span<const double> elements, DType dtype, const Shape& shape);

// Throws BAD_BASE64, LENGTH_MISMATCH or UNKNOWN_DTYPE.
Tensor decode_tensor(const TensorPayload& payload);

nlohmann::json to_json(const TensorPayload& payload);
// Throws CodecError(BAD_PAYLOAD) when keys are missing or mistyped.
TensorPayload payload_from_json(const nlohmann::json& j);

}  // namespace mlserve
