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
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mlserve::base64 {

// RFC 4648 standard alphabet with '=' padding.
std::string encode(std::span<const std::uint8_t> bytes);

// Strict decoding: length must be a multiple of 4, padding only at the end,
// and unused trailing bits must be zero. Throws CodecError(BAD_BASE64).
std::vector<std::uint8_t> decode(std::string_view text);

inline std::string encode(std::string_view text) {
    return encode(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace mlserve::base64
