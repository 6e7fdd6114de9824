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
#include "mlserve/apps/segment.hpp"

#include <array>
#include <numeric>

#include <fmt/format.h>

#include "mlserve/base64.hpp"
#include "mlserve/error.hpp"
#include "mlserve/raster.hpp"

namespace mlserve::segment {

using nlohmann::json;

namespace {

ServiceError unprocessable(const std::string& message) { return ServiceError(ServiceErrorCode::UNPROCESSABLE, message); }

constexpr std::array<std::array<std::uint8_t, 3>, 12> kPalette = {{
    {230, 25, 75},
    {60, 180, 75},
    {255, 225, 25},
    {0, 130, 200},
    {245, 130, 48},
    {145, 30, 180},
    {70, 240, 240},
    {240, 50, 230},
    {210, 245, 60},
    {250, 190, 212},
    {0, 128, 128},
    {170, 110, 40},
}};

// Union-find over provisional labels; parent[i] <= i always holds.
struct DisjointSet {
    std::vector<std::int32_t> parent{0};

    std::int32_t make() {
        parent.push_back(static_cast<std::int32_t>(parent.size()));
        return parent.back();
    }
    std::int32_t find(std::int32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a < b) std::swap(a, b);
        parent[a] = b;
    }
};

// Renumbers nonzero labels by first raster appearance, dropping any label
// whose keep flag is false.
LabelMap renumber(const LabelMap& in, const std::vector<bool>& keep) {
    LabelMap out{in.height, in.width, std::vector<std::int32_t>(in.labels.size(), 0), 0};
    std::vector<std::int32_t> mapping(keep.size(), 0);
    for (std::size_t i = 0; i < in.labels.size(); ++i) {
        const auto l = in.labels[i];
        if (l == 0 || !keep[l]) continue;
        if (mapping[l] == 0) mapping[l] = ++out.count;
        out.labels[i] = mapping[l];
    }
    return out;
}

}  // namespace

void check_image(const Tensor& image) {
    if (image.dtype() != DType::u8 && image.dtype() != DType::u16) {
        throw unprocessable(fmt::format("image dtype must be u8 or u16, got {}", dtype_name(image.dtype())));
    }
    const auto& s = image.shape;
    if (s.size() != 2 && s.size() != 3) throw unprocessable("image shape must be [H,W] or [H,W,3]");
    if (s.size() == 3 && s[2] != 3) {
        throw unprocessable(fmt::format("image shape [H,W,C] must have C = 3, got C = {}", s[2]));
    }
    if (s[0] < 1 || s[1] < 1) throw unprocessable("image height and width must be at least 1");
}

GrayImage to_grayscale(const Tensor& image) {
    check_image(image);
    return {image.shape[0], image.shape[1], kernels::parallel::to_grayscale(image)};
}

OtsuResult otsu_threshold(const kernels::Histogram& histogram) {
    std::uint64_t total = 0;
    std::uint64_t weighted_total = 0;
    for (std::size_t b = 0; b < histogram.size(); ++b) {
        total += histogram[b];
        weighted_total += b * histogram[b];
    }
    OtsuResult best;
    std::uint64_t below = 0;
    std::uint64_t weighted_below = 0;
    for (int t = 0; t < 255; ++t) {
        below += histogram[t];
        weighted_below += static_cast<std::uint64_t>(t) * histogram[t];
        const std::uint64_t above = total - below;
        if (below == 0 || above == 0) continue;
        const double w0 = static_cast<double>(below) / static_cast<double>(total);
        const double w1 = static_cast<double>(above) / static_cast<double>(total);
        const double mu0 = static_cast<double>(weighted_below) / static_cast<double>(below);
        const double mu1 = static_cast<double>(weighted_total - weighted_below) / static_cast<double>(above);
        const double sigma = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if (sigma > best.between_class_variance) {
            best.between_class_variance = sigma;
            best.threshold = t;
        }
    }
    best.separable = best.between_class_variance > 0.0;
    return best;
}

OtsuResult otsu_threshold(const GrayImage& gray) { return otsu_threshold(kernels::parallel::histogram(gray.pixels)); }

std::vector<std::uint8_t> foreground_mask(const GrayImage& gray, const OtsuResult& otsu) {
    if (!otsu.separable) return std::vector<std::uint8_t>(gray.pixels.size(), 0);
    return kernels::parallel::threshold_mask(gray.pixels, otsu.threshold);
}

LabelMap label_components(std::span<const std::uint8_t> mask, std::size_t height, std::size_t width) {
    if (mask.size() != height * width) throw std::invalid_argument("mask size does not match height * width");
    LabelMap provisional{height, width, std::vector<std::int32_t>(mask.size(), 0), 0};
    DisjointSet sets;
    for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < width; ++x) {
            const std::size_t i = y * width + x;
            if (!mask[i]) continue;
            const std::int32_t up = y > 0 ? provisional.labels[i - width] : 0;
            const std::int32_t left = x > 0 ? provisional.labels[i - 1] : 0;
            if (up && left) {
                provisional.labels[i] = std::min(up, left);
                sets.unite(up, left);
            } else if (up || left) {
                provisional.labels[i] = up ? up : left;
            } else {
                provisional.labels[i] = sets.make();
            }
        }
    }
    for (auto& l : provisional.labels) {
        if (l) l = sets.find(l);
    }
    return renumber(provisional, std::vector<bool>(sets.parent.size(), true));
}

LabelMap min_size_filter(const LabelMap& labels, std::size_t min_px) {
    const auto sizes = kernels::parallel::label_sizes(labels.labels, labels.count);
    std::vector<bool> keep(sizes.size(), false);
    for (std::size_t l = 1; l < sizes.size(); ++l) keep[l] = sizes[l] >= min_px;
    return renumber(labels, keep);
}

InstanceStats instance_stats(const LabelMap& labels) {
    const auto sizes = kernels::parallel::label_sizes(labels.labels, labels.count);
    InstanceStats stats;
    stats.count = labels.count;
    stats.foreground_px = static_cast<std::int64_t>(std::accumulate(sizes.begin() + 1, sizes.end(), std::size_t{0}));
    stats.mean_size_px = stats.count ? static_cast<double>(stats.foreground_px) / static_cast<double>(stats.count) : 0.0;
    return stats;
}

LabelMap segment_image(const Tensor& image, std::size_t min_px) {
    const auto gray = to_grayscale(image);
    const auto otsu = otsu_threshold(gray);
    const auto mask = foreground_mask(gray, otsu);
    return min_size_filter(label_components(mask, gray.height, gray.width), min_px);
}

Tensor to_tensor(const LabelMap& labels) { return Tensor{labels.labels, {labels.height, labels.width}}; }

LabelMap label_map_from_tensor(const Tensor& tensor) {
    if (tensor.dtype() != DType::i32 || tensor.shape.size() != 2) throw unprocessable("label map must be i32 [H,W]");
    LabelMap out{tensor.shape[0], tensor.shape[1], tensor.values<std::int32_t>(), 0};
    for (const auto l : out.labels) {
        if (l < 0) throw unprocessable("label map contains negative labels");
        out.count = std::max(out.count, l);
    }
    return out;
}

Tensor colorize(const LabelMap& labels) {
    std::vector<std::uint8_t> rgb(labels.labels.size() * 3, 0);
    for (std::size_t i = 0; i < labels.labels.size(); ++i) {
        const auto l = labels.labels[i];
        if (l == 0) continue;
        const auto& c = kPalette[static_cast<std::size_t>(l - 1) % kPalette.size()];
        rgb[3 * i] = c[0];
        rgb[3 * i + 1] = c[1];
        rgb[3 * i + 2] = c[2];
    }
    return Tensor{std::move(rgb), {labels.height, labels.width, 3}};
}

// ---- service ---------------------------------------------------------------

ServiceInfo SegmentService::info() const {
    return {"segment", "1.0.0", "Cell instance segmentation (Otsu threshold + 4-connected components)"};
}

json SegmentService::process(const json& request) const {
    for (const auto& [key, _] : request.items()) {
        if (key != "image") throw unprocessable(fmt::format("unexpected key '{}'; expected only 'image'", key));
    }
    if (!request.contains("image")) throw unprocessable("missing key 'image'");
    Tensor image;
    try {
        image = decode_tensor(payload_from_json(request["image"]));
    } catch (const Error& e) {
        throw ServiceError(ServiceErrorCode::UNPROCESSABLE, e.what(), json{{"cause", e.code()}});
    }
    check_image(image);
    const auto labels = segment_image(image, min_px_);
    return {{"image", to_json(encode_tensor(to_tensor(labels)))}};
}

std::shared_ptr<Service> make_service(std::size_t min_px) { return std::make_shared<SegmentService>(min_px); }

// ---- UI --------------------------------------------------------------------

SchemaDescriptor descriptor() {
    SchemaDescriptor d;
    d.app_name = "Cell Segmentation";
    d.description = "Upload a microscopy image (PNG or PGM) to detect cell instances.";
    d.inputs = {{"image", ui::ImageFile{"Image (PNG or PGM)"}}};
    d.outputs = {
        {"instances", ui::Plot{"Instances", ui::PlotKind::image}},
        {"cell_count", ui::Number{"Number of cells", 0.0, std::nullopt, true}},
        {"mean_cell_size", ui::Number{"Mean cell size (px)", 0.0, std::nullopt, false}},
        {"response_json", ui::File{"response.json", std::vector<std::string>{".json"}}},
    };
    return d;
}

json prepare_request(const json& inputs) {
    const auto file = decode_upload(inputs.at("image"));
    const auto image = raster::decode_image(file.content);
    return {{"image", to_json(encode_tensor(image))}};
}

std::vector<DisplayItem> process_response(const json&, const json& response) {
    const auto labels = label_map_from_tensor(decode_tensor(payload_from_json(response.at("image"))));
    const auto stats = instance_stats(labels);
    return {
        display::PlotImage{"Instances", encode_tensor(colorize(labels))},
        display::NumberDisplay{"Number of cells", static_cast<double>(stats.count)},
        display::NumberDisplay{"Mean cell size (px)", stats.mean_size_px},
        display::FileDownload{"response.json", base64::encode(response.dump(2)), "application/json"},
    };
}

UIAppDefinition ui_app(std::string service_url) {
    UIAppDefinition app;
    app.descriptor = descriptor();
    app.service_url = std::move(service_url);
    app.prepare_request = [](const json& inputs) { return prepare_request(inputs); };
    app.process_response = [](const json& request, const json& response) { return process_response(request, response); };
    return app;
}

}  // namespace mlserve::segment
