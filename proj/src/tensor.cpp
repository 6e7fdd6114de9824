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
#include "mlserve/tensor.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>

#include "mlserve/base64.hpp"
#include "mlserve/error.hpp"

namespace mlserve {

static_assert(std::endian::native == std::endian::little, "wire layout assumes a little-endian host");

namespace {

constexpr std::string_view kDTypeNames[] = {"u8", "u16", "i32", "f32", "f64"};

template <typename T>
bool representable(double v) {
    if constexpr (std::is_floating_point_v<T>) {
        if (std::isnan(v)) return true;
        return static_cast<double>(static_cast<T>(v)) == v;
    } else {
        if (!std::isfinite(v) || v != std::trunc(v)) return false;
        return v >= static_cast<double>(std::numeric_limits<T>::min()) &&
               v <= static_cast<double>(std::numeric_limits<T>::max());
    }
}

template <typename T>
std::vector<T> narrow(std::span<const double> elements) {
    std::vector<T> out;
    out.reserve(elements.size());
    for (std::size_t i = 0; i < elements.size(); ++i) {
        if (!representable<T>(elements[i])) {
            throw CodecError("VALUE_RANGE", "element " + std::to_string(i) + " (" + std::to_string(elements[i]) +
                                                ") is not representable in the requested dtype");
        }
        out.push_back(static_cast<T>(elements[i]));
    }
    return out;
}

[[noreturn]] void length_mismatch(std::size_t got, std::size_t want, std::string_view what) {
    throw CodecError("LENGTH_MISMATCH", std::string(what) + ": got " + std::to_string(got) + ", shape requires " +
                                            std::to_string(want));
}

}  // namespace

std::string_view dtype_name(DType dtype) { return kDTypeNames[static_cast<std::size_t>(dtype)]; }

DType parse_dtype(std::string_view name) {
    for (std::size_t i = 0; i < std::size(kDTypeNames); ++i) {
        if (kDTypeNames[i] == name) return static_cast<DType>(i);
    }
    throw CodecError("UNKNOWN_DTYPE", "unknown dtype '" + std::string(name) + "' (expected u8, u16, i32, f32 or f64)");
}

std::size_t dtype_size(DType dtype) {
    switch (dtype) {
        case DType::u8: return 1;
        case DType::u16: return 2;
        case DType::i32: return 4;
        case DType::f32: return 4;
        case DType::f64: return 8;
    }
    return 0;
}

std::size_t element_count(const Shape& shape) {
    std::size_t n = 1;
    for (const auto d : shape) {
        if (d != 0 && n > std::numeric_limits<std::size_t>::max() / d) {
            throw CodecError("LENGTH_MISMATCH", "shape element count overflows");
        }
        n *= d;
    }
    return n;
}

std::size_t Tensor::size() const {
    return std::visit([](const auto& v) { return v.size(); }, data);
}

bool Tensor::operator==(const Tensor& other) const {
    if (shape != other.shape || data.index() != other.data.index()) return false;
    return std::visit(
        [&](const auto& a) {
            using Vec = std::decay_t<decltype(a)>;
            const auto& b = std::get<Vec>(other.data);
            return a.size() == b.size() &&
                   (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(typename Vec::value_type)) == 0);
        },
        data);
}

TensorPayload encode_tensor(const Tensor& tensor) {
    const std::size_t want = element_count(tensor.shape);
    return std::visit(
        [&](const auto& v) {
            if (v.size() != want) length_mismatch(v.size(), want, "element count");
            const auto* bytes = reinterpret_cast<const std::uint8_t*>(v.data());
            using T = typename std::decay_t<decltype(v)>::value_type;
            return TensorPayload{base64::encode(std::span(bytes, v.size() * sizeof(T))),
                                 std::string(dtype_name(tensor.dtype())), tensor.shape};
        },
        tensor.data);
}

TensorPayload encode_tensor(std::span<const double> elements, DType dtype, const Shape& shape) {
    const std::size_t want = element_count(shape);
    if (elements.size() != want) length_mismatch(elements.size(), want, "element count");
    Tensor t;
    t.shape = shape;
    switch (dtype) {
        case DType::u8: t.data = narrow<std::uint8_t>(elements); break;
        case DType::u16: t.data = narrow<std::uint16_t>(elements); break;
        case DType::i32: t.data = narrow<std::int32_t>(elements); break;
        case DType::f32: t.data = narrow<float>(elements); break;
        case DType::f64: t.data = narrow<double>(elements); break;
    }
    return encode_tensor(t);
}

Tensor decode_tensor(const TensorPayload& payload) {
    const DType dtype = parse_dtype(payload.dtype);
    const std::size_t count = element_count(payload.shape);
    const auto bytes = base64::decode(payload.data);
    const std::size_t width = dtype_size(dtype);
    if (count > std::numeric_limits<std::size_t>::max() / width || bytes.size() != count * width) {
        throw CodecError("LENGTH_MISMATCH", "decoded " + std::to_string(bytes.size()) + " bytes, shape and dtype require " +
                                                std::to_string(count * width));
    }
    Tensor t;
    t.shape = payload.shape;
    auto fill = [&]<typename T>(std::vector<T> v) {
        v.resize(count);
        if (count) std::memcpy(v.data(), bytes.data(), bytes.size());
        t.data = std::move(v);
    };
    switch (dtype) {
        case DType::u8: fill(std::vector<std::uint8_t>{}); break;
        case DType::u16: fill(std::vector<std::uint16_t>{}); break;
        case DType::i32: fill(std::vector<std::int32_t>{}); break;
        case DType::f32: fill(std::vector<float>{}); break;
        case DType::f64: fill(std::vector<double>{}); break;
    }
    return t;
}

nlohmann::json to_json(const TensorPayload& payload) {
    return {{"data", payload.data}, {"dtype", payload.dtype}, {"shape", payload.shape}};
}

TensorPayload payload_from_json(const nlohmann::json& j) {
    auto bad = [](const std::string& why) -> CodecError { return CodecError("BAD_PAYLOAD", "tensor payload: " + why); };
    if (!j.is_object()) throw bad("expected an object");
    for (const char* key : {"data", "dtype", "shape"}) {
        if (!j.contains(key)) throw bad(std::string("missing key '") + key + "'");
    }
    if (!j["data"].is_string()) throw bad("'data' must be a string");
    if (!j["dtype"].is_string()) throw bad("'dtype' must be a string");
    if (!j["shape"].is_array()) throw bad("'shape' must be an array");
    TensorPayload p;
    p.data = j["data"].get<std::string>();
    p.dtype = j["dtype"].get<std::string>();
    for (const auto& d : j["shape"]) {
        if (!d.is_number_unsigned()) throw bad("'shape' entries must be non-negative integers");
        p.shape.push_back(d.get<std::size_t>());
    }
    return p;
}

}  // namespace mlserve
