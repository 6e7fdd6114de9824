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
#include <stdexcept>

#include "mlserve/kernels.hpp"

namespace mlserve::kernels::serial {

namespace {

template <typename T>
std::vector<double> gray_from(const std::vector<T>& px, std::size_t pixels, bool rgb, double scale) {
    std::vector<double> out(pixels);
    for (std::size_t i = 0; i < pixels; ++i) {
        if (rgb) {
            out[i] = (kLumaR * px[3 * i] + kLumaG * px[3 * i + 1] + kLumaB * px[3 * i + 2]) / scale;
        } else {
            out[i] = px[i] / scale;
        }
    }
    return out;
}

}  // namespace

std::vector<double> to_grayscale(const Tensor& image) {
    const bool rgb = image.shape.size() == 3;
    const std::size_t pixels = image.shape.at(0) * image.shape.at(1);
    switch (image.dtype()) {
        case DType::u8: return gray_from(image.values<std::uint8_t>(), pixels, rgb, 255.0);
        case DType::u16: return gray_from(image.values<std::uint16_t>(), pixels, rgb, 65535.0);
        default: throw std::invalid_argument("to_grayscale expects u8 or u16");
    }
}

Histogram histogram(std::span<const double> gray) {
    Histogram h{};
    for (const double g : gray) ++h[intensity_bin(g)];
    return h;
}

std::vector<std::uint8_t> threshold_mask(std::span<const double> gray, int threshold) {
    std::vector<std::uint8_t> mask(gray.size());
    for (std::size_t i = 0; i < gray.size(); ++i) mask[i] = intensity_bin(gray[i]) > threshold ? 1 : 0;
    return mask;
}

std::vector<std::size_t> label_sizes(std::span<const std::int32_t> labels, std::int32_t max_label) {
    std::vector<std::size_t> sizes(static_cast<std::size_t>(max_label) + 1, 0);
    for (const auto l : labels) ++sizes[static_cast<std::size_t>(l)];
    return sizes;
}

}  // namespace mlserve::kernels::serial
