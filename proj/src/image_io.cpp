#include "fpkit/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <jpeglib.h>
#include <png.h>

namespace fpkit {

namespace {

std::uint8_t to_byte(double v) {
    v = std::clamp(v, 0.0, 1.0);
    return static_cast<std::uint8_t>(std::lround(v * 255.0));
}

ImageBuffer from_bytes(const std::vector<std::uint8_t>& px, int h, int w, int c) {
    ImageBuffer img(h, w, c);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        img.data[i] = px[i] / 255.0;
    return img;
}

bool has_suffix(const std::string& s, const std::string& suf) {
    if (s.size() < suf.size()) return false;
    std::string tail = s.substr(s.size() - suf.size());
    std::transform(tail.begin(), tail.end(), tail.begin(),
                   [](unsigned char ch) { return std::tolower(ch); });
    return tail == suf;
}

struct JpegErrorMgr {
    jpeg_error_mgr pub;
    std::jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    std::longjmp(err->jump, 1);
}

ImageBuffer load_png_file(const std::string& path) {
    png_image pimg;
    std::memset(&pimg, 0, sizeof(pimg));
    pimg.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&pimg, path.c_str()))
        throw std::runtime_error("cannot read PNG: " + path);
    const bool color = (pimg.format & PNG_FORMAT_FLAG_COLOR) != 0;
    pimg.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    const int c = color ? 3 : 1;
    std::vector<std::uint8_t> px(PNG_IMAGE_SIZE(pimg));
    if (!png_image_finish_read(&pimg, nullptr, px.data(), 0, nullptr)) {
        png_image_free(&pimg);
        throw std::runtime_error("PNG decode failed: " + path);
    }
    return from_bytes(px, static_cast<int>(pimg.height),
                      static_cast<int>(pimg.width), c);
}

ImageBuffer load_jpeg_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return decode_jpeg(bytes);
}

} // namespace

ImageBuffer load_image(const std::string& path) {
    if (has_suffix(path, ".png")) return load_png_file(path);
    if (has_suffix(path, ".jpg") || has_suffix(path, ".jpeg"))
        return load_jpeg_file(path);
    throw std::runtime_error("unsupported image format: " + path);
}

void save_png(const ImageBuffer& img, const std::string& path) {
    png_image pimg;
    std::memset(&pimg, 0, sizeof(pimg));
    pimg.version = PNG_IMAGE_VERSION;
    pimg.width = static_cast<png_uint_32>(img.width);
    pimg.height = static_cast<png_uint_32>(img.height);
    pimg.format = img.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    std::vector<std::uint8_t> px(img.data.size());
    for (std::size_t i = 0; i < img.data.size(); ++i) px[i] = to_byte(img.data[i]);
    if (!png_image_write_to_file(&pimg, path.c_str(), 0, px.data(), 0, nullptr))
        throw std::runtime_error("cannot write PNG: " + path);
}

std::vector<std::uint8_t> encode_jpeg(const ImageBuffer& img, int quality) {
    if (quality < 1 || quality > 100)
        throw std::invalid_argument("JPEG quality must be in [1,100]");
    jpeg_compress_struct cinfo;
    JpegErrorMgr jerr;
    cinfo.err = jpeg_std_error(&jerr.pub);
    jerr.pub.error_exit = jpeg_error_exit;
    unsigned char* buf = nullptr;
    unsigned long buf_size = 0;
    if (setjmp(jerr.jump)) {
        jpeg_destroy_compress(&cinfo);
        if (buf) free(buf);
        throw std::runtime_error("JPEG encode failed");
    }
    jpeg_create_compress(&cinfo);
    jpeg_mem_dest(&cinfo, &buf, &buf_size);
    cinfo.image_width = static_cast<JDIMENSION>(img.width);
    cinfo.image_height = static_cast<JDIMENSION>(img.height);
    cinfo.input_components = img.channels;
    cinfo.in_color_space = img.channels == 3 ? JCS_RGB : JCS_GRAYSCALE;
    jpeg_set_defaults(&cinfo);
    jpeg_set_quality(&cinfo, quality, TRUE); // TRUE forces baseline tables
    jpeg_start_compress(&cinfo, TRUE);
    std::vector<std::uint8_t> row(static_cast<std::size_t>(img.width) * img.channels);
    while (cinfo.next_scanline < cinfo.image_height) {
        const int y = static_cast<int>(cinfo.next_scanline);
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < img.channels; ++c)
                row[static_cast<std::size_t>(x) * img.channels + c] = to_byte(img.at(y, x, c));
        JSAMPROW rp = row.data();
        jpeg_write_scanlines(&cinfo, &rp, 1);
    }
    jpeg_finish_compress(&cinfo);
    jpeg_destroy_compress(&cinfo);
    std::vector<std::uint8_t> out(buf, buf + buf_size);
    free(buf);
    return out;
}

ImageBuffer decode_jpeg(const std::vector<std::uint8_t>& bytes) {
    jpeg_decompress_struct cinfo;
    JpegErrorMgr jerr;
    cinfo.err = jpeg_std_error(&jerr.pub);
    jerr.pub.error_exit = jpeg_error_exit;
    if (setjmp(jerr.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw std::runtime_error("JPEG decode failed");
    }
    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
    jpeg_read_header(&cinfo, TRUE);
    jpeg_start_decompress(&cinfo);
    const int w = static_cast<int>(cinfo.output_width);
    const int h = static_cast<int>(cinfo.output_height);
    const int c = static_cast<int>(cinfo.output_components);
    if (c != 1 && c != 3) {
        jpeg_destroy_decompress(&cinfo);
        throw std::runtime_error("unsupported JPEG channel count");
    }
    std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h * c);
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW rp = px.data() + static_cast<std::size_t>(cinfo.output_scanline) * w * c;
        jpeg_read_scanlines(&cinfo, &rp, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return from_bytes(px, h, w, c);
}

void write_bytes(const std::vector<std::uint8_t>& bytes, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for write: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace fpkit
