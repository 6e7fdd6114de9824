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

// Data-parallel image kernels used by the segmentation pipeline. Every kernel
// exists twice: `serial` is the plain reference, `parallel` is the OpenMP
// version the service runs. Both produce identical results (all kernels are
// elementwise or integer reductions), which the unit tests check and the
// benchmark target times.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mlserve/tensor.hpp"

namespace mlserve::kernels {

using Histogram = std::array<std::uint64_t, 256>;

// 256 uniform bins over [0,1]; 1.0 lands in the last bin.
inline int intensity_bin(double g) {
    const double scaled = std::floor(g * 256.0);
    if (scaled <= 0.0) return 0;
    return scaled >= 255.0 ? 255 : static_cast<int>(scaled);
}

// Luma weights for RGB input.
inline constexpr double kLumaR = 0.299;
inline constexpr double kLumaG = 0.587;
inline constexpr double kLumaB = 0.114;

namespace serial {

// `image` is u8 or u16 with shape [H,W] or [H,W,3]; output has H*W values in [0,1].
std::vector<double> to_grayscale(const Tensor& image);
Histogram histogram(std::span<const double> gray);
// mask[i] = bin(gray[i]) > threshold
std::vector<std::uint8_t> threshold_mask(std::span<const double> gray, int threshold);
// sizes[k] = number of pixels labeled k, for k in 0..max_label.
std::vector<std::size_t> label_sizes(std::span<const std::int32_t> labels, std::int32_t max_label);

}  // namespace serial

namespace parallel {

std::vector<double> to_grayscale(const Tensor& image);
Histogram histogram(std::span<const double> gray);
std::vector<std::uint8_t> threshold_mask(std::span<const double> gray, int threshold);
std::vector<std::size_t> label_sizes(std::span<const std::int32_t> labels, std::int32_t max_label);

}  // namespace parallel

}  // namespace mlserve::kernels
