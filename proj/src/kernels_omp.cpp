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

#include <omp.h>

#include "mlserve/kernels.hpp"

namespace mlserve::kernels::parallel {

namespace {

template <typename T>
std::vector<double> gray_from(const std::vector<T>& px, std::size_t pixels, bool rgb, double scale) {
    std::vector<double> out(pixels);
    const auto n = static_cast<std::ptrdiff_t>(pixels);
    const T* src = px.data();
    double* dst = out.data();
    if (rgb) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            dst[i] = (kLumaR * src[3 * i] + kLumaG * src[3 * i + 1] + kLumaB * src[3 * i + 2]) / scale;
        }
    } else {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) dst[i] = src[i] / scale;
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
    Histogram total{};
    const auto n = static_cast<std::ptrdiff_t>(gray.size());
    const double* src = gray.data();
#pragma omp parallel
    {
        Histogram local{};
#pragma omp for schedule(static) nowait
        for (std::ptrdiff_t i = 0; i < n; ++i) ++local[intensity_bin(src[i])];
#pragma omp critical(mlserve_histogram_merge)
        for (std::size_t b = 0; b < local.size(); ++b) total[b] += local[b];
    }
    return total;
}

std::vector<std::uint8_t> threshold_mask(std::span<const double> gray, int threshold) {
    std::vector<std::uint8_t> mask(gray.size());
    const auto n = static_cast<std::ptrdiff_t>(gray.size());
    const double* src = gray.data();
    std::uint8_t* dst = mask.data();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) dst[i] = intensity_bin(src[i]) > threshold ? 1 : 0;
    return mask;
}

std::vector<std::size_t> label_sizes(std::span<const std::int32_t> labels, std::int32_t max_label) {
    const std::size_t bins = static_cast<std::size_t>(max_label) + 1;
    std::vector<std::size_t> total(bins, 0);
    const auto n = static_cast<std::ptrdiff_t>(labels.size());
    const std::int32_t* src = labels.data();
#pragma omp parallel
    {
        std::vector<std::size_t> local(bins, 0);
#pragma omp for schedule(static) nowait
        for (std::ptrdiff_t i = 0; i < n; ++i) ++local[static_cast<std::size_t>(src[i])];
#pragma omp critical(mlserve_label_sizes_merge)
        for (std::size_t b = 0; b < bins; ++b) total[b] += local[b];
    }
    return total;
}

}  // namespace mlserve::kernels::parallel
