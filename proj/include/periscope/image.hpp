#pragma once

#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <png.h>

#include "periscope/types.hpp"

namespace periscope {

/// Decoded 8-bit image, row-major interleaved, 1 or 3 channels.
struct ImageBuffer {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<std::uint8_t> pixels;

    static ImageBuffer make(int w, int h, int c, std::uint8_t fill = 0) {
        ImageBuffer img;
        img.width = w;
        img.height = h;
        img.channels = c;
        img.pixels.assign(static_cast<std::size_t>(w) * h * c, fill);
        return img;
    }

    std::uint8_t at(int x, int y, int c) const {
        return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    void set(int x, int y, int c, std::uint8_t v) {
        pixels[(static_cast<std::size_t>(y) * width + x) * channels + c] = v;
    }
};

namespace detail {

struct PngReadCtx {
    const std::uint8_t* data;
    std::size_t size;
    std::size_t offset;
};

inline void png_mem_read(png_structp png, png_bytep out, png_size_t len) {
    auto* ctx = static_cast<PngReadCtx*>(png_get_io_ptr(png));
    if (ctx->offset + len > ctx->size) png_error(png, "truncated PNG stream");
    std::memcpy(out, ctx->data + ctx->offset, len);
    ctx->offset += len;
}

inline void png_str_write(png_structp png, png_bytep data, png_size_t len) {
    auto* out = static_cast<std::string*>(png_get_io_ptr(png));
    out->append(reinterpret_cast<const char*>(data), len);
}

inline void png_noop_flush(png_structp) {}

}  // namespace detail

/// Decodes a PNG byte stream. Palette/16-bit/alpha inputs are folded to
/// 8-bit gray or RGB.
inline ImageBuffer decode_png(std::string_view bytes) {
    if (bytes.size() < 8 || png_sig_cmp(reinterpret_cast<png_const_bytep>(bytes.data()), 0, 8))
        throw DataError("not a PNG stream");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw DataError("png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw DataError("png_create_info_struct failed");
    }
    detail::PngReadCtx ctx{reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size(), 0};
    ImageBuffer img;
    std::vector<png_bytep> rows;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DataError("PNG decode failed");
    }
    png_set_read_fn(png, &ctx, detail::png_mem_read);
    png_read_info(png, info);

    png_uint_32 w = png_get_image_width(png, info);
    png_uint_32 h = png_get_image_height(png, info);
    int color = png_get_color_type(png, info);
    int depth = png_get_bit_depth(png, info);

    if (depth == 16) png_set_strip_16(png);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    png_read_update_info(png, info);

    int channels = png_get_channels(png, info);
    if (channels != 1 && channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DataError("unsupported PNG channel count " + std::to_string(channels));
    }

    img = ImageBuffer::make(static_cast<int>(w), static_cast<int>(h), channels);
    rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y)
        rows[y] = img.pixels.data() + static_cast<std::size_t>(y) * w * channels;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

inline std::string encode_png(const ImageBuffer& img) {
    if (img.channels != 1 && img.channels != 3)
        throw DataError("encode_png: channels must be 1 or 3");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw DataError("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw DataError("png_create_info_struct failed");
    }
    std::string out;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw DataError("PNG encode failed");
    }
    png_set_write_fn(png, &out, detail::png_str_write, detail::png_noop_flush);
    png_set_IHDR(png, info, img.width, img.height, 8,
                 img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_bytep> rows(img.height);
    for (int y = 0; y < img.height; ++y)
        rows[y] = const_cast<png_bytep>(img.pixels.data() +
                                        static_cast<std::size_t>(y) * img.width * img.channels);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

// ---------------------------------------------------------------------------
// PNM (binary P5/P6), kept for dependency-free fixtures
// ---------------------------------------------------------------------------

inline ImageBuffer decode_pnm(std::string_view bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6'))
        throw DataError("not a binary PNM stream");
    int channels = bytes[1] == '5' ? 1 : 3;
    std::size_t pos = 2;
    auto next_int = [&]() -> int {
        while (pos < bytes.size()) {
            if (std::isspace(static_cast<unsigned char>(bytes[pos]))) { ++pos; continue; }
            if (bytes[pos] == '#') {           // comment to end of line
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
                continue;
            }
            break;
        }
        int v = 0;
        bool any = false;
        while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
            v = v * 10 + (bytes[pos] - '0');
            ++pos;
            any = true;
        }
        if (!any) throw DataError("malformed PNM header");
        return v;
    };
    int w = next_int();
    int h = next_int();
    int maxval = next_int();
    if (w <= 0 || h <= 0 || maxval != 255) throw DataError("unsupported PNM geometry or maxval");
    ++pos;  // single whitespace after maxval
    std::size_t need = static_cast<std::size_t>(w) * h * channels;
    if (bytes.size() - pos < need) throw DataError("truncated PNM pixel data");
    ImageBuffer img = ImageBuffer::make(w, h, channels);
    std::memcpy(img.pixels.data(), bytes.data() + pos, need);
    return img;
}

inline std::string encode_pnm(const ImageBuffer& img) {
    if (img.channels != 1 && img.channels != 3)
        throw DataError("encode_pnm: channels must be 1 or 3");
    std::string out = img.channels == 1 ? "P5\n" : "P6\n";
    out += std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    out.append(reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size());
    return out;
}

// ---------------------------------------------------------------------------
// File helpers
// ---------------------------------------------------------------------------

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw DataError("error reading " + path.string());
    return data;
}

inline void write_file(const std::filesystem::path& path, std::string_view data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open " + path.string() + " for writing");
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw DataError("error writing " + path.string());
}

/// Dispatches on magic bytes: PNG or binary PNM.
inline ImageBuffer load_image(const std::filesystem::path& path) {
    std::string bytes = read_file(path);
    if (bytes.size() >= 8 && !png_sig_cmp(reinterpret_cast<png_const_bytep>(bytes.data()), 0, 8))
        return decode_png(bytes);
    return decode_pnm(bytes);
}

}  // namespace periscope
