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

// Cell instance segmentation: Otsu threshold, 4-connected labeling, small
// component suppression; plus the service and its UI definition.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "mlserve/display.hpp"
#include "mlserve/gateway.hpp"
#include "mlserve/kernels.hpp"
#include "mlserve/service.hpp"
#include "mlserve/tensor.hpp"

namespace mlserve::segment {

inline constexpr std::size_t kDefaultMinPixels = 4;

struct GrayImage {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<double> pixels;  // row-major, values in [0,1]
};

struct OtsuResult {
    int threshold = 0;                    // bin 0..254; foreground is bin > threshold
    double between_class_variance = 0.0;  // in bin units squared
    bool separable = false;               // false when every split leaves a class empty
};

struct LabelMap {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<std::int32_t> labels;  // 0 = background, 1..count
    std::int32_t count = 0;

    bool operator==(const LabelMap&) const = default;
};

struct InstanceStats {
    std::int64_t count = 0;
    double mean_size_px = 0.0;
    std::int64_t foreground_px = 0;
};

// Throws ServiceError(UNPROCESSABLE) unless `image` is u8/u16 with shape
// [H,W] or [H,W,3], H,W >= 1.
void check_image(const Tensor& image);

GrayImage to_grayscale(const Tensor& image);

// Maximizes w0*w1*(mu0-mu1)^2 over t in 0..254; smallest t wins ties.
OtsuResult otsu_threshold(const kernels::Histogram& histogram);
OtsuResult otsu_threshold(const GrayImage& gray);

// Empty when the histogram has no separating threshold.
std::vector<std::uint8_t> foreground_mask(const GrayImage& gray, const OtsuResult& otsu);

// 4-connected components, numbered 1..K in raster order of each
// component's first pixel.
LabelMap label_components(std::span<const std::uint8_t> mask, std::size_t height, std::size_t width);

// Drops components smaller than `min_px` and renumbers the rest in raster order.
LabelMap min_size_filter(const LabelMap& labels, std::size_t min_px = kDefaultMinPixels);

InstanceStats instance_stats(const LabelMap& labels);

// to_grayscale -> otsu_threshold -> label_components -> min_size_filter
LabelMap segment_image(const Tensor& image, std::size_t min_px = kDefaultMinPixels);

Tensor to_tensor(const LabelMap& labels);
// Throws ServiceError(UNPROCESSABLE) unless an i32 [H,W] label map.
LabelMap label_map_from_tensor(const Tensor& tensor);

// Background black, labels cycle through a fixed 12-color palette.
Tensor colorize(const LabelMap& labels);

class SegmentService : public Service {
public:
    explicit SegmentService(std::size_t min_px = kDefaultMinPixels) : min_px_(min_px) {}

    ServiceInfo info() const override;
    void load_model() override {}
    nlohmann::json process(const nlohmann::json& request) const override;

private:
    std::size_t min_px_;
};

std::shared_ptr<Service> make_service(std::size_t min_px = kDefaultMinPixels);

SchemaDescriptor descriptor();
nlohmann::json prepare_request(const nlohmann::json& inputs);
std::vector<DisplayItem> process_response(const nlohmann::json& request, const nlohmann::json& response);
UIAppDefinition ui_app(std::string service_url);

}  // namespace mlserve::segment
