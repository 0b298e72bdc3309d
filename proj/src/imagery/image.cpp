#include "gv/imagery/image.hpp"

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>

#include <jpeglib.h>
#include <png.h>

#include "gv/core/error.hpp"

namespace gv::imagery {

void ImageTensor::validate() const {
    if (data.size() != kTensorValues)
        throw ContractError("image tensor: expected 299x299x3 values");
    for (float v : data)
        if (!(v >= 0.0f && v <= 1.0f))
            throw ContractError("image tensor: value outside [0,1]");
}

namespace {

RgbImage decode_png(const std::vector<uint8_t>& bytes) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()))
        throw DataError(std::string("image: png decode failed: ") + image.message);
    image.format = PNG_FORMAT_RGB;  // alpha discarded, palette expanded
    RgbImage out;
    out.width = image.width;
    out.height = image.height;
    out.pixels.resize(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, out.pixels.data(), 0, nullptr)) {
        png_image_free(&image);
        throw DataError(std::string("image: png decode failed: ") + image.message);
    }
    return out;
}

struct JpegErrorMgr {
    jpeg_error_mgr pub;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    std::longjmp(err->jump, 1);
}

RgbImage decode_jpeg(const std::vector<uint8_t>& bytes) {
    jpeg_decompress_struct cinfo;
    JpegErrorMgr jerr;
    cinfo.err = jpeg_std_error(&jerr.pub);
    jerr.pub.error_exit = jpeg_error_exit;
    if (setjmp(jerr.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw DataError(std::string("image: jpeg decode failed: ") + jerr.message);
    }
    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, bytes.data(), bytes.size());
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);
    RgbImage out;
    out.width = cinfo.output_width;
    out.height = cinfo.output_height;
    out.pixels.resize(out.width * out.height * 3);
    while (cinfo.output_scanline < cinfo.output_height) {
        uint8_t* row = out.pixels.data() + size_t(cinfo.output_scanline) * out.width * 3;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return out;
}

RgbImage decode_ppm(const std::vector<uint8_t>& bytes) {
    size_t at = 2;  // past "P6"
    auto skip_space = [&] {
        while (at < bytes.size()) {
            if (bytes[at] == '#') {
                while (at < bytes.size() && bytes[at] != '\n') ++at;
            } else if (std::isspace(bytes[at])) {
                ++at;
            } else {
                break;
            }
        }
    };
    auto read_int = [&]() -> size_t {
        skip_space();
        size_t v = 0;
        bool any = false;
        while (at < bytes.size() && bytes[at] >= '0' && bytes[at] <= '9') {
            v = v * 10 + (bytes[at] - '0');
            ++at;
            any = true;
        }
        if (!any) throw DataError("image: malformed ppm header");
        return v;
    };
    RgbImage out;
    out.width = read_int();
    out.height = read_int();
    size_t maxval = read_int();
    if (maxval != 255) throw DataError("image: only maxval 255 ppm supported");
    ++at;  // single whitespace after maxval
    size_t need = out.width * out.height * 3;
    if (bytes.size() - at < need) throw DataError("image: truncated ppm payload");
    out.pixels.assign(bytes.begin() + at, bytes.begin() + at + need);
    return out;
}

}  // namespace

RgbImage decode_image(const std::vector<uint8_t>& bytes) {
    if (bytes.size() >= 8 && bytes[0] == 0x89 && bytes[1] == 'P' && bytes[2] == 'N' &&
        bytes[3] == 'G')
        return decode_png(bytes);
    if (bytes.size() >= 3 && bytes[0] == 0xff && bytes[1] == 0xd8)
        return decode_jpeg(bytes);
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6')
        return decode_ppm(bytes);
    throw DataError("image: unrecognized format (expected png, jpeg or ppm)");
}

std::vector<uint8_t> encode_ppm(const RgbImage& img) {
    char header[64];
    int len = std::snprintf(header, sizeof(header), "P6\n%zu %zu\n255\n", img.width,
                            img.height);
    std::vector<uint8_t> out(header, header + len);
    out.insert(out.end(), img.pixels.begin(), img.pixels.end());
    return out;
}

void write_png(const std::string& path, const RgbImage& img) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width);
    image.height = static_cast<png_uint_32>(img.height);
    image.format = PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&image, path.c_str(), 0, img.pixels.data(), 0, nullptr))
        throw DataError(std::string("image: png write failed: ") + image.message);
}

namespace {

struct SamplePoint {
    size_t i0, i1;
    double frac;
};

SamplePoint sample_point(size_t out_i, size_t out_n, size_t in_n) {
    double scale = static_cast<double>(in_n) / static_cast<double>(out_n);
    double s = (static_cast<double>(out_i) + 0.5) * scale - 0.5;
    if (s < 0.0) s = 0.0;
    double max_s = static_cast<double>(in_n - 1);
    if (s > max_s) s = max_s;
    size_t i0 = static_cast<size_t>(s);
    size_t i1 = std::min(i0 + 1, in_n - 1);
    return {i0, i1, s - static_cast<double>(i0)};
}

[[gnu::noinline]] void resize_row_u8(const RgbImage& src, size_t out_w, size_t out_h,
                                     size_t oy, uint8_t* dst) {
    SamplePoint sy = sample_point(oy, out_h, src.height);
    for (size_t ox = 0; ox < out_w; ++ox) {
        SamplePoint sx = sample_point(ox, out_w, src.width);
        for (size_t c = 0; c < 3; ++c) {
            double top = (1.0 - sx.frac) * src.at(sy.i0, sx.i0, c) +
                         sx.frac * src.at(sy.i0, sx.i1, c);
            double bot = (1.0 - sx.frac) * src.at(sy.i1, sx.i0, c) +
                         sx.frac * src.at(sy.i1, sx.i1, c);
            double v = (1.0 - sy.frac) * top + sy.frac * bot;
            dst[ox * 3 + c] = static_cast<uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
        }
    }
}

[[gnu::noinline]] void resize_row_tensor(const RgbImage& src, size_t oy, float* dst) {
    SamplePoint sy = sample_point(oy, kTensorSide, src.height);
    for (size_t ox = 0; ox < kTensorSide; ++ox) {
        SamplePoint sx = sample_point(ox, kTensorSide, src.width);
        for (size_t c = 0; c < 3; ++c) {
            double top = (1.0 - sx.frac) * src.at(sy.i0, sx.i0, c) +
                         sx.frac * src.at(sy.i0, sx.i1, c);
            double bot = (1.0 - sx.frac) * src.at(sy.i1, sx.i0, c) +
                         sx.frac * src.at(sy.i1, sx.i1, c);
            double v = (1.0 - sy.frac) * top + sy.frac * bot;
            dst[ox * 3 + c] = static_cast<float>(v / 255.0);
        }
    }
}

}  // namespace

RgbImage resize_bilinear(const RgbImage& src, size_t out_w, size_t out_h,
                         kernels::Exec exec) {
    if (src.width == 0 || src.height == 0)
        throw ContractError("image: cannot resize an empty image");
    RgbImage out;
    out.width = out_w;
    out.height = out_h;
    out.pixels.resize(out_w * out_h * 3);
    if (exec == kernels::Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (size_t oy = 0; oy < out_h; ++oy)
            resize_row_u8(src, out_w, out_h, oy, out.pixels.data() + oy * out_w * 3);
    } else {
        for (size_t oy = 0; oy < out_h; ++oy)
            resize_row_u8(src, out_w, out_h, oy, out.pixels.data() + oy * out_w * 3);
    }
    return out;
}

ImageTensor decode_preprocess(const std::vector<uint8_t>& bytes, kernels::Exec exec) {
    RgbImage rgb = decode_image(bytes);
    if (rgb.width == 0 || rgb.height == 0)
        throw DataError("image: decoded image is empty");
    ImageTensor tensor;
    tensor.data.resize(kTensorValues);
    if (exec == kernels::Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (size_t oy = 0; oy < kTensorSide; ++oy)
            resize_row_tensor(rgb, oy, tensor.data.data() + oy * kTensorSide * 3);
    } else {
        for (size_t oy = 0; oy < kTensorSide; ++oy)
            resize_row_tensor(rgb, oy, tensor.data.data() + oy * kTensorSide * 3);
    }
    return tensor;
}

}  // namespace gv::imagery
