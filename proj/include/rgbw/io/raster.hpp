#pragma once

// 8/16-bit lossless rasters: PNG (libpng) and binary PNM (P5 grey / P6 RGB).
// Integer codes map to [0, 1] by division by 2^depth - 1; saving clamps to
// [0, 1] and rounds half away from zero.

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "rgbw/error.hpp"
#include "rgbw/image.hpp"
#include "rgbw/tensor.hpp"

namespace rgbw::io {

class UnsupportedFormat : public Error {
public:
    using Error::Error;
};

/// Decoded raster: 1 (grey) or 3 (RGB) channels scaled to [0, 1].
struct Raster {
    Tensor values;
    int bit_depth = 8;
};

inline std::uint32_t max_code(int bit_depth) { return (1u << bit_depth) - 1u; }

inline std::uint32_t quantize(double v, int bit_depth) {
    const double c = std::clamp(v, 0.0, 1.0);
    return static_cast<std::uint32_t>(std::round(c * max_code(bit_depth)));
}

namespace detail {

inline std::string lower_extension(const std::filesystem::path& p) {
    std::string e = p.extension().string();
    std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return e;
}

struct FileCloser {
    void operator()(std::FILE* f) const noexcept {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct PngErrorState {
    std::jmp_buf jump;
    char message[256] = {};
};

inline void png_error_handler(png_structp png, png_const_charp msg) {
    auto* state = static_cast<PngErrorState*>(png_get_error_ptr(png));
    std::snprintf(state->message, sizeof state->message, "%s", msg);
    std::longjmp(state->jump, 1);
}

inline void png_warning_handler(png_structp, png_const_charp) {}

inline Raster read_png(const std::filesystem::path& path) {
    FilePtr file(std::fopen(path.c_str(), "rb"));
    if (!file) throw IoError("cannot open " + path.string());
    unsigned char sig[8];
    if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
        throw UnsupportedFormat(path.string() + " is not a PNG file");

    PngErrorState state;
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &state, png_error_handler, png_warning_handler);
    if (!png) throw IoError("libpng initialisation failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("libpng initialisation failed");
    }

    // Heap buffers owned outside the setjmp region so a longjmp cannot leak them.
    auto rows_buf = std::make_unique<std::vector<png_byte>>();
    auto row_ptrs = std::make_unique<std::vector<png_bytep>>();
    png_uint_32 width = 0, height = 0;
    int depth = 0, channels = 0;

    if (setjmp(state.jump)) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("cannot decode " + path.string() + ": " + state.message);
    }

    png_init_io(png, file.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);
    const int color_type = png_get_color_type(png, info);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    width = png_get_image_width(png, info);
    height = png_get_image_height(png, info);
    depth = png_get_bit_depth(png, info);
    channels = png_get_channels(png, info);
    const std::size_t stride = png_get_rowbytes(png, info);
    rows_buf->resize(stride * height);
    row_ptrs->resize(height);
    for (png_uint_32 r = 0; r < height; ++r) (*row_ptrs)[r] = rows_buf->data() + r * stride;
    png_read_image(png, row_ptrs->data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    if (channels != 1 && channels != 3) throw UnsupportedFormat(path.string() + ": unsupported channel layout");
    if (depth != 8 && depth != 16) throw UnsupportedFormat(path.string() + ": unsupported bit depth");

    Raster out{Tensor(height, width, static_cast<std::size_t>(channels)), depth};
    const double maxval = max_code(depth);
    const std::size_t bytes_per_sample = depth / 8;
    for (std::size_t r = 0; r < height; ++r) {
        const png_byte* row = (*row_ptrs)[r];
        for (std::size_t c = 0; c < width; ++c)
            for (std::size_t k = 0; k < static_cast<std::size_t>(channels); ++k) {
                const png_byte* s = row + (c * channels + k) * bytes_per_sample;
                const std::uint32_t code = depth == 16 ? (static_cast<std::uint32_t>(s[0]) << 8) | s[1] : s[0];
                out.values(r, c, k) = code / maxval;
            }
    }
    return out;
}

inline void write_png(const std::filesystem::path& path, const Tensor& img, int depth) {
    FilePtr file(std::fopen(path.c_str(), "wb"));
    if (!file) throw IoError("cannot open " + path.string() + " for writing");

    const std::size_t chans = img.channels();
    const std::size_t bytes_per_sample = depth / 8;
    const std::size_t stride = img.cols() * chans * bytes_per_sample;
    auto buf = std::make_unique<std::vector<png_byte>>(stride * img.rows());
    auto ptrs = std::make_unique<std::vector<png_bytep>>(img.rows());
    for (std::size_t r = 0; r < img.rows(); ++r) {
        (*ptrs)[r] = buf->data() + r * stride;
        for (std::size_t c = 0; c < img.cols(); ++c)
            for (std::size_t k = 0; k < chans; ++k) {
                const std::uint32_t code = quantize(img(r, c, k), depth);
                png_byte* s = (*ptrs)[r] + (c * chans + k) * bytes_per_sample;
                if (depth == 16) {
                    s[0] = static_cast<png_byte>(code >> 8);
                    s[1] = static_cast<png_byte>(code & 0xff);
                } else {
                    s[0] = static_cast<png_byte>(code);
                }
            }
    }

    PngErrorState state;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &state, png_error_handler, png_warning_handler);
    if (!png) throw IoError("libpng initialisation failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("libpng initialisation failed");
    }
    if (setjmp(state.jump)) {
        png_destroy_write_struct(&png, &info);
        throw IoError("cannot encode " + path.string() + ": " + state.message);
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.cols()), static_cast<png_uint_32>(img.rows()), depth,
                 chans == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, ptrs->data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    if (std::fflush(file.get()) != 0) throw IoError("failed writing " + path.string());
}

inline Raster read_pnm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    auto next_token = [&]() -> std::string {
        std::string tok;
        int ch;
        while ((ch = in.get()) != EOF) {
            if (ch == '#') {
                while ((ch = in.get()) != EOF && ch != '\n') {}
                continue;
            }
            if (std::isspace(ch)) {
                if (!tok.empty()) break;
                continue;
            }
            tok.push_back(static_cast<char>(ch));
        }
        return tok;
    };
    const std::string magic = next_token();
    if (magic != "P5" && magic != "P6") throw UnsupportedFormat(path.string() + ": only binary P5/P6 PNM is supported");
    std::size_t width = 0, height = 0;
    unsigned long maxval = 0;
    try {
        width = std::stoul(next_token());
        height = std::stoul(next_token());
        maxval = std::stoul(next_token());
    } catch (const std::exception&) {
        throw UnsupportedFormat(path.string() + ": malformed PNM header");
    }
    if (width == 0 || height == 0 || maxval == 0 || maxval > 65535)
        throw UnsupportedFormat(path.string() + ": malformed PNM header");

    const std::size_t chans = magic == "P6" ? 3 : 1;
    const std::size_t bps = maxval > 255 ? 2 : 1;
    const auto body_start = in.tellg();
    in.seekg(0, std::ios::end);
    const auto body_bytes = static_cast<std::uint64_t>(in.tellg() - body_start);
    in.seekg(body_start);
    if (width > body_bytes || height > body_bytes / width || chans * bps > body_bytes / (width * height))
        throw IoError(path.string() + ": truncated PNM data");
    std::vector<unsigned char> data(width * height * chans * bps);
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (static_cast<std::size_t>(in.gcount()) != data.size()) throw IoError(path.string() + ": truncated PNM data");

    Raster out{Tensor(height, width, chans), maxval > 255 ? 16 : 8};
    const double denom = static_cast<double>(maxval);
    auto v = out.values.values();
    for (std::size_t n = 0; n < v.size(); ++n)
        v[n] = (bps == 2 ? (data[2 * n] << 8) | data[2 * n + 1] : data[n]) / denom;
    return out;
}

inline void write_pnm(const std::filesystem::path& path, const Tensor& img, int depth) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << (img.channels() == 3 ? "P6" : "P5") << "\n" << img.cols() << " " << img.rows() << "\n" << max_code(depth) << "\n";
    for (double v : img.values()) {
        const std::uint32_t code = quantize(v, depth);
        if (depth == 16) out.put(static_cast<char>(code >> 8));
        out.put(static_cast<char>(code & 0xff));
    }
    if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace detail

inline Raster load_raster(const std::filesystem::path& path) {
    const std::string ext = detail::lower_extension(path);
    if (ext == ".png") return detail::read_png(path);
    if (ext == ".ppm" || ext == ".pgm" || ext == ".pnm") return detail::read_pnm(path);
    throw UnsupportedFormat("unsupported raster format '" + ext + "' for " + path.string());
}

/// Saves a 1- or 3-channel tensor as an 8- or 16-bit raster chosen by extension.
inline void save_raster(const Tensor& img, const std::filesystem::path& path, int bit_depth = 8) {
    if (bit_depth != 8 && bit_depth != 16) throw InvalidArgument("bit depth must be 8 or 16");
    if (img.channels() != 1 && img.channels() != 3) throw ShapeError("rasters hold 1 or 3 channels");
    const std::string ext = detail::lower_extension(path);
    if (ext == ".png") return detail::write_png(path, img, bit_depth);
    if (ext == ".ppm" || ext == ".pgm" || ext == ".pnm") {
        if ((ext == ".ppm") != (img.channels() == 3)) throw UnsupportedFormat(".ppm holds RGB, .pgm holds grey");
        return detail::write_pnm(path, img, bit_depth);
    }
    throw UnsupportedFormat("unsupported raster format '" + ext + "' for " + path.string());
}

/**
 * Loads an RGB image; grey rasters are replicated into three channels.
 * A non-zero `bit_depth` must match the file's depth.
 */
inline RgbImage load_image(const std::filesystem::path& path, int bit_depth = 0) {
    Raster r = load_raster(path);
    if (bit_depth != 0 && bit_depth != r.bit_depth)
        throw UnsupportedFormat(path.string() + " is " + std::to_string(r.bit_depth) + "-bit, expected " +
                                std::to_string(bit_depth));
    if (r.values.channels() == 3) return RgbImage(std::move(r.values));
    Tensor rgb(r.values.rows(), r.values.cols(), 3);
    for (std::size_t i = 0; i < rgb.rows(); ++i)
        for (std::size_t j = 0; j < rgb.cols(); ++j)
            for (std::size_t k = 0; k < 3; ++k) rgb(i, j, k) = r.values(i, j, 0);
    return RgbImage(std::move(rgb));
}

/// Loads a single grey plane (e.g. a panchromatic band) as rows x cols x 1.
inline Tensor load_plane(const std::filesystem::path& path) {
    Raster r = load_raster(path);
    if (r.values.channels() != 1) throw UnsupportedFormat(path.string() + " is not a single-channel raster");
    return std::move(r.values);
}

inline void save_image(const RgbImage& img, const std::filesystem::path& path, int bit_depth = 8) {
    save_raster(img.tensor(), path, bit_depth);
}

}  // namespace rgbw::io
