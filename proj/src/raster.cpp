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
#include "mlserve/raster.hpp"

#include <cctype>
#include <csetjmp>
#include <cstring>
#include <memory>
#include <string>

#include <png.h>

#include "mlserve/error.hpp"

namespace mlserve::raster {

namespace {

[[noreturn]] void bad_image(const std::string& why) { throw Error("BAD_IMAGE", "cannot decode image: " + why); }

// libpng reports errors through longjmp, so everything that must survive the
// jump lives behind this pointer rather than in locals of the jumping frame.
struct PngState {
    std::span<const std::uint8_t> input;
    std::size_t offset = 0;
    std::vector<std::uint8_t> output;
    std::vector<std::uint8_t> pixels;
    std::vector<png_bytep> rows;
    png_uint_32 width = 0;
    png_uint_32 height = 0;
    int channels = 0;
    int depth = 0;
    char error[256] = {};
};

void on_error(png_structp png, png_const_charp message) {
    auto* state = static_cast<PngState*>(png_get_error_ptr(png));
    std::strncpy(state->error, message, sizeof(state->error) - 1);
    png_longjmp(png, 1);
}

void on_warning(png_structp, png_const_charp) {}

void read_bytes(png_structp png, png_bytep out, png_size_t length) {
    auto* state = static_cast<PngState*>(png_get_io_ptr(png));
    if (state->offset + length > state->input.size()) png_error(png, "truncated PNG data");
    std::memcpy(out, state->input.data() + state->offset, length);
    state->offset += length;
}

void write_bytes(png_structp png, png_bytep data, png_size_t length) {
    auto* state = static_cast<PngState*>(png_get_io_ptr(png));
    try {
        state->output.insert(state->output.end(), data, data + length);
    } catch (...) {
        png_error(png, "out of memory");
    }
}

void flush_bytes(png_structp) {}

bool decode_png(PngState* state) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, state, on_error, on_warning);
    if (!png) return false;
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        return false;
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        return false;
    }
    png_set_read_fn(png, state, read_bytes);
    png_read_info(png, info);

    const int color = png_get_color_type(png, info);
    int depth = png_get_bit_depth(png, info);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    if (depth == 16) png_set_swap(png);
    png_read_update_info(png, info);

    state->width = png_get_image_width(png, info);
    state->height = png_get_image_height(png, info);
    state->channels = png_get_channels(png, info);
    state->depth = png_get_bit_depth(png, info);
    const std::size_t row_bytes = png_get_rowbytes(png, info);
    state->pixels.resize(row_bytes * state->height);
    state->rows.resize(state->height);
    for (png_uint_32 y = 0; y < state->height; ++y) state->rows[y] = state->pixels.data() + y * row_bytes;
    png_read_image(png, state->rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return true;
}

bool encode_png_into(PngState* state) {
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, state, on_error, on_warning);
    if (!png) return false;
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        return false;
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        return false;
    }
    png_set_write_fn(png, state, write_bytes, flush_bytes);
    png_set_IHDR(png, info, state->width, state->height, state->depth,
                 state->channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    if (state->depth == 16) png_set_swap(png);
    png_write_image(png, state->rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return true;
}

Tensor png_to_tensor(std::span<const std::uint8_t> bytes) {
    auto state = std::make_unique<PngState>();
    state->input = bytes;
    if (!decode_png(state.get())) bad_image(state->error[0] ? state->error : "libpng failure");
    if (state->channels != 1 && state->channels != 3) bad_image("unsupported channel count");
    Tensor t;
    t.shape = {state->height, state->width};
    if (state->channels == 3) t.shape.push_back(3);
    const std::size_t count = element_count(t.shape);
    if (state->depth == 16) {
        std::vector<std::uint16_t> v(count);
        std::memcpy(v.data(), state->pixels.data(), count * 2);
        t.data = std::move(v);
    } else {
        state->pixels.resize(count);
        t.data = std::move(state->pixels);
    }
    return t;
}

// Next whitespace-delimited header token; '#' starts a comment to end of line.
std::string pgm_token(std::span<const std::uint8_t> b, std::size_t& pos) {
    while (pos < b.size()) {
        if (b[pos] == '#') {
            while (pos < b.size() && b[pos] != '\n') ++pos;
        } else if (std::isspace(b[pos])) {
            ++pos;
        } else {
            break;
        }
    }
    std::string tok;
    while (pos < b.size() && !std::isspace(b[pos]) && b[pos] != '#') tok += static_cast<char>(b[pos++]);
    return tok;
}

std::size_t pgm_number(const std::string& tok, const char* what) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos || tok.size() > 9) {
        bad_image(std::string("bad PGM ") + what);
    }
    return std::stoul(tok);
}

Tensor pgm_to_tensor(std::span<const std::uint8_t> b) {
    std::size_t pos = 2;
    const std::size_t width = pgm_number(pgm_token(b, pos), "width");
    const std::size_t height = pgm_number(pgm_token(b, pos), "height");
    const std::size_t maxval = pgm_number(pgm_token(b, pos), "maxval");
    if (width == 0 || height == 0) bad_image("PGM dimensions must be positive");
    if (maxval == 0 || maxval > 65535) bad_image("PGM maxval must be in 1..65535");
    if (pos >= b.size() || !std::isspace(b[pos])) bad_image("PGM header not terminated");
    ++pos;
    const std::size_t count = width * height;
    const std::size_t sample = maxval > 255 ? 2 : 1;
    if (b.size() - pos < count * sample) bad_image("PGM pixel data truncated");
    Tensor t;
    t.shape = {height, width};
    if (sample == 1) {
        t.data = std::vector<std::uint8_t>(b.begin() + static_cast<std::ptrdiff_t>(pos),
                                           b.begin() + static_cast<std::ptrdiff_t>(pos + count));
    } else {
        std::vector<std::uint16_t> v(count);
        for (std::size_t i = 0; i < count; ++i) {
            v[i] = static_cast<std::uint16_t>((b[pos + 2 * i] << 8) | b[pos + 2 * i + 1]);
        }
        t.data = std::move(v);
    }
    return t;
}

}  // namespace

Tensor decode_image(std::span<const std::uint8_t> bytes) {
    if (bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0) return png_to_tensor(bytes);
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') return pgm_to_tensor(bytes);
    bad_image("not a PNG or binary PGM (P5) file");
}

std::vector<std::uint8_t> encode_png(const Tensor& image) {
    const auto& shape = image.shape;
    if (!(shape.size() == 2 || (shape.size() == 3 && shape[2] == 3))) bad_image("PNG needs shape [H,W] or [H,W,3]");
    if (image.dtype() != DType::u8 && image.dtype() != DType::u16) bad_image("PNG needs u8 or u16 samples");
    if (shape[0] == 0 || shape[1] == 0) bad_image("PNG dimensions must be positive");
    auto state = std::make_unique<PngState>();
    state->height = static_cast<png_uint_32>(shape[0]);
    state->width = static_cast<png_uint_32>(shape[1]);
    state->channels = shape.size() == 3 ? 3 : 1;
    state->depth = image.dtype() == DType::u8 ? 8 : 16;
    const std::size_t bytes = element_count(shape) * dtype_size(image.dtype());
    state->pixels.resize(bytes);
    std::visit([&](const auto& v) { std::memcpy(state->pixels.data(), v.data(), bytes); }, image.data);
    const std::size_t row_bytes = bytes / shape[0];
    state->rows.resize(shape[0]);
    for (std::size_t y = 0; y < shape[0]; ++y) state->rows[y] = state->pixels.data() + y * row_bytes;
    if (!encode_png_into(state.get())) bad_image(state->error[0] ? state->error : "libpng failure");
    return std::move(state->output);
}

std::vector<std::uint8_t> encode_pgm(const Tensor& image) {
    if (image.shape.size() != 2) bad_image("PGM needs shape [H,W]");
    const bool wide = image.dtype() == DType::u16;
    if (!wide && image.dtype() != DType::u8) bad_image("PGM needs u8 or u16 samples");
    const std::string header =
        "P5\n" + std::to_string(image.shape[1]) + " " + std::to_string(image.shape[0]) + "\n" + (wide ? "65535" : "255") + "\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    if (wide) {
        for (const auto v : image.values<std::uint16_t>()) {
            out.push_back(static_cast<std::uint8_t>(v >> 8));
            out.push_back(static_cast<std::uint8_t>(v & 0xFF));
        }
    } else {
        const auto& v = image.values<std::uint8_t>();
        out.insert(out.end(), v.begin(), v.end());
    }
    return out;
}

}  // namespace mlserve::raster
