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
#include <doctest.h>

#include <random>

#include "mlserve/error.hpp"
#include "mlserve/raster.hpp"

using namespace mlserve;

namespace {

template <typename T>
Tensor random_image(std::mt19937_64& rng, Shape shape) {
    std::vector<T> px(element_count(shape));
    for (auto& p : px) p = static_cast<T>(rng());
    return Tensor{std::move(px), std::move(shape)};
}

}  // namespace

TEST_CASE("PNG round trips") {
    std::mt19937_64 rng(8);
    for (const auto& shape : {Shape{1, 1}, Shape{17, 31}, Shape{9, 4, 3}}) {
        const auto a = random_image<std::uint8_t>(rng, shape);
        CHECK(raster::decode_image(raster::encode_png(a)) == a);
        const auto b = random_image<std::uint16_t>(rng, shape);
        CHECK(raster::decode_image(raster::encode_png(b)) == b);
    }
}

TEST_CASE("PGM round trips") {
    std::mt19937_64 rng(9);
    const auto a = random_image<std::uint8_t>(rng, {12, 5});
    CHECK(raster::decode_image(raster::encode_pgm(a)) == a);
    const auto b = random_image<std::uint16_t>(rng, {3, 40});
    CHECK(raster::decode_image(raster::encode_pgm(b)) == b);
}

TEST_CASE("PGM header parsing") {
    const std::string text = "P5\n# comment\n2 1\n255\n\x07\xff";
    const auto t = raster::decode_image({reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
    CHECK(t == Tensor{std::vector<std::uint8_t>{7, 255}, {1, 2}});
}

TEST_CASE("bad images are rejected") {
    auto code = [](std::string_view bytes) {
        try {
            raster::decode_image({reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()});
        } catch (const Error& e) {
            return e.code();
        }
        return std::string("none");
    };
    CHECK(code("") == "BAD_IMAGE");
    CHECK(code("GIF89a....") == "BAD_IMAGE");
    CHECK(code("\x89PNG\r\n\x1a\n garbage") == "BAD_IMAGE");
    CHECK(code("P5\n2 2\n255\n\x01") == "BAD_IMAGE");
    CHECK(code("P5\n0 2\n255\n") == "BAD_IMAGE");
    CHECK_THROWS_AS(raster::encode_png(Tensor{std::vector<float>(4), {2, 2}}), Error);
    CHECK_THROWS_AS(raster::encode_pgm(Tensor{std::vector<std::uint8_t>(12), {2, 2, 3}}), Error);
}
