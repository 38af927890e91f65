#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fpkit/image.hpp"

namespace fpkit {

// PNG / baseline JPEG, 8 bit per channel; samples mapped to [0,1] by v/255.
ImageBuffer load_image(const std::string& path);

// Writes 8-bit PNG; samples clamped to [0,1] and mapped by round(v*255).
void save_png(const ImageBuffer& img, const std::string& path);

// Baseline sequential JPEG, 4:2:0 subsampling for color, standard
// quantization tables scaled by quality (libjpeg semantics).
std::vector<std::uint8_t> encode_jpeg(const ImageBuffer& img, int quality);
ImageBuffer decode_jpeg(const std::vector<std::uint8_t>& bytes);

void write_bytes(const std::vector<std::uint8_t>& bytes, const std::string& path);

} // namespace fpkit
