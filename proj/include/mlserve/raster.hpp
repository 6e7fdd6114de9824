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
#include <vector>

#include "mlserve/tensor.hpp"

namespace mlserve::raster {

// PNG (8/16-bit grayscale, 8/16-bit RGB; palette and low bit depths are
// expanded, alpha is dropped) or binary PGM (P5). Result is u8 or u16 with
// shape [H,W] or [H,W,3]. Throws Error(BAD_IMAGE).
Tensor decode_image(std::span<const std::uint8_t> bytes);

// u8/u16 tensor of shape [H,W] or [H,W,3]. Throws Error(BAD_IMAGE).
std::vector<std::uint8_t> encode_png(const Tensor& image);
// u8/u16 tensor of shape [H,W].
std::vector<std::uint8_t> encode_pgm(const Tensor& image);

}  // namespace mlserve::raster
