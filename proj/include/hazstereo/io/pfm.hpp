#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hazstereo/core/image.hpp"

namespace hazstereo {

// Portable float map: "PF" (3-channel) / "Pf" (1-channel), rows bottom-up,
// scale sign encodes byte order (negative = little-endian).
struct PfmImage {
    ImageF image;
    float scale = 1.f; // magnitude only; sign is consumed by the codec
};

std::vector<uint8_t> write_pfm(const ImageF& image, float scale = 1.f);
PfmImage read_pfm(const std::vector<uint8_t>& bytes);

void write_pfm_file(const std::string& path, const ImageF& image, float scale = 1.f);
ImageF read_pfm_file(const std::string& path);

std::vector<uint8_t> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, const std::vector<uint8_t>& bytes);

} // namespace hazstereo
