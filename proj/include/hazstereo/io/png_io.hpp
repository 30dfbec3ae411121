#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hazstereo/core/image.hpp"

namespace hazstereo {

// 8-bit gray or RGB. Palette/gray inputs expand, alpha is stripped.
std::vector<uint8_t> encode_png8(const ImageU8& image);
ImageU8 decode_png8(const std::vector<uint8_t>& bytes);

// 16-bit single-channel grayscale.
std::vector<uint8_t> encode_png16(const ImageU16& image);
ImageU16 decode_png16(const std::vector<uint8_t>& bytes);

// Fixed-point disparity carrier: stored = round(d * 256), stored 0 = invalid.
// Negative or non-finite disparities encode as invalid.
std::vector<uint8_t> write_disp_png16(const ImageF& disp);
ImageF read_disp_png16(const std::vector<uint8_t>& bytes);

void write_png8_file(const std::string& path, const ImageU8& image);
ImageU8 read_png8_file(const std::string& path);
void write_png16_file(const std::string& path, const ImageU16& image);
ImageU16 read_png16_file(const std::string& path);

// 0/255 mask carrier on top of 8-bit gray PNG.
void write_mask_file(const std::string& path, const Mask& mask);
Mask read_mask_file(const std::string& path);

} // namespace hazstereo
