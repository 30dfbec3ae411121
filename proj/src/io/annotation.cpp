#include "hazstereo/io/annotation.hpp"

#include <cstdlib>

#include "hazstereo/core/error.hpp"
#include "hazstereo/io/png_io.hpp"

namespace hazstereo {

std::vector<ColorKey> default_annotation_keys() {
    return {{"specular", 255, 0, 0}, {"textureless", 0, 255, 0}};
}

const Mask& AnnotationMasks::mask_for(const std::string& name) const {
    for (size_t i = 0; i < keys.size(); ++i)
        if (keys[i].name == name) return masks[i];
    raise(Errc::InvalidConfig, "no annotation key named " + name);
}

AnnotationMasks read_annotation_masks(const ImageU8& rgb, const std::vector<ColorKey>& keys,
                                      int tolerance) {
    if (rgb.channels() != 3) raise(Errc::ShapeMismatch, "annotation image must be rgb");
    if (keys.empty()) raise(Errc::InvalidConfig, "at least one color key required");
    if (tolerance < 0) raise(Errc::InvalidConfig, "tolerance must be >= 0");

    AnnotationMasks out;
    out.keys = keys;
    out.masks.assign(keys.size(), Mask(rgb.width(), rgb.height(), 1));

    for (int y = 0; y < rgb.height(); ++y) {
        for (int x = 0; x < rgb.width(); ++x) {
            const int r = rgb.at(x, y, 0), g = rgb.at(x, y, 1), b = rgb.at(x, y, 2);
            bool matched = false;
            for (size_t k = 0; k < keys.size(); ++k) {
                if (std::abs(r - keys[k].r) <= tolerance && std::abs(g - keys[k].g) <= tolerance &&
                    std::abs(b - keys[k].b) <= tolerance) {
                    out.masks[k].at(x, y) = 1;
                    matched = true;
                    break; // one color per pixel: first matching key wins
                }
            }
            if (!matched && !(r == g && g == b)) ++out.unknown_color_count;
        }
    }
    return out;
}

AnnotationMasks read_annotation_masks(const std::vector<uint8_t>& png_bytes,
                                      const std::vector<ColorKey>& keys, int tolerance) {
    return read_annotation_masks(decode_png8(png_bytes), keys, tolerance);
}

} // namespace hazstereo
