#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hazstereo/core/image.hpp"

namespace hazstereo {

struct ColorKey {
    std::string name;
    uint8_t r = 0, g = 0, b = 0;
};

// Red marks specular, green marks textureless in imported annotations.
std::vector<ColorKey> default_annotation_keys();

struct AnnotationMasks {
    std::vector<ColorKey> keys;
    std::vector<Mask> masks;          // one per key, same order
    size_t unknown_color_count = 0;   // neither a key nor background; reported, not fatal

    const Mask& mask_for(const std::string& name) const;
};

// Exact color match by default; `tolerance` (max per-channel distance) admits
// anti-aliased imports. Grayscale pixels (r = g = b) count as background.
AnnotationMasks read_annotation_masks(const ImageU8& rgb,
                                      const std::vector<ColorKey>& keys = default_annotation_keys(),
                                      int tolerance = 0);
AnnotationMasks read_annotation_masks(const std::vector<uint8_t>& png_bytes,
                                      const std::vector<ColorKey>& keys = default_annotation_keys(),
                                      int tolerance = 0);

} // namespace hazstereo
