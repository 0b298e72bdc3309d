#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gv/core/kernels.hpp"

namespace gv::imagery {

constexpr size_t kTensorSide = 299;
constexpr size_t kTensorChannels = 3;
constexpr size_t kTensorValues = kTensorSide * kTensorSide * kTensorChannels;

/// 299 x 299 x 3 image, channel-last, values in [0, 1].
struct ImageTensor {
    std::vector<float> data;  // kTensorValues floats

    float at(size_t y, size_t x, size_t c) const {
        return data[(y * kTensorSide + x) * kTensorChannels + c];
    }
    void validate() const;
};

/// 8-bit RGB raster, row-major, no padding.
struct RgbImage {
    size_t width = 0;
    size_t height = 0;
    std::vector<uint8_t> pixels;  // width*height*3

    uint8_t at(size_t y, size_t x, size_t c) const {
        return pixels[(y * width + x) * 3 + c];
    }
};

/// Decodes PNG, JPEG or binary PPM (P6) bytes to RGB, discarding alpha.
/// Throws DataError for undecodable bytes.
RgbImage decode_image(const std::vector<uint8_t>& bytes);

/// Serializes an RGB image as binary PPM (P6, maxval 255).
std::vector<uint8_t> encode_ppm(const RgbImage& img);

/// Writes an RGB image as a PNG file.
void write_png(const std::string& path, const RgbImage& img);

/// Bilinear resize with half-pixel-center sampling and edge clamping.
/// Output rows are independent, so Serial and Parallel agree bit for bit.
RgbImage resize_bilinear(const RgbImage& src, size_t out_w, size_t out_h,
                         kernels::Exec exec = kernels::default_exec());

/// decode -> RGB -> bilinear resize to 299x299 -> scale by 1/255.
ImageTensor decode_preprocess(const std::vector<uint8_t>& bytes,
                              kernels::Exec exec = kernels::default_exec());

}  // namespace gv::imagery
