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
// Serial reference kernels vs their OpenMP counterparts.
//
//   ./build/bench/mlserve_bench --benchmark_filter=Histogram

#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <vector>

#include "mlserve/kernels.hpp"
#include "mlserve/tensor.hpp"

namespace {

using namespace mlserve;

Tensor rgb_image(std::size_t side) {
    std::mt19937_64 rng(side);
    std::vector<std::uint8_t> px(side * side * 3);
    for (auto& p : px) p = static_cast<std::uint8_t>(rng());
    return Tensor{std::move(px), {side, side, 3}};
}

std::vector<std::int32_t> label_image(std::size_t side, std::int32_t labels) {
    std::mt19937_64 rng(side + 1);
    std::vector<std::int32_t> out(side * side);
    for (auto& l : out) l = static_cast<std::int32_t>(rng() % static_cast<std::uint64_t>(labels + 1));
    return out;
}

template <auto Kernel>
void BM_Grayscale(benchmark::State& state) {
    const auto image = rgb_image(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(image));
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

template <auto Kernel>
void BM_Histogram(benchmark::State& state) {
    const auto gray = kernels::serial::to_grayscale(rgb_image(static_cast<std::size_t>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(gray));
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

template <auto Kernel>
void BM_ThresholdMask(benchmark::State& state) {
    const auto gray = kernels::serial::to_grayscale(rgb_image(static_cast<std::size_t>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(gray, 127));
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

template <auto Kernel>
void BM_LabelSizes(benchmark::State& state) {
    const auto labels = label_image(static_cast<std::size_t>(state.range(0)), 500);
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(labels, 500));
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

#define MLSERVE_BENCH_PAIR(name, fn)                                                        \
    BENCHMARK_TEMPLATE(name, kernels::serial::fn)->Name(#name "/serial")->Range(64, 2048);  \
    BENCHMARK_TEMPLATE(name, kernels::parallel::fn)->Name(#name "/openmp")->Range(64, 2048)

MLSERVE_BENCH_PAIR(BM_Grayscale, to_grayscale);
MLSERVE_BENCH_PAIR(BM_Histogram, histogram);
MLSERVE_BENCH_PAIR(BM_ThresholdMask, threshold_mask);
MLSERVE_BENCH_PAIR(BM_LabelSizes, label_sizes);

}  // namespace

BENCHMARK_MAIN();
