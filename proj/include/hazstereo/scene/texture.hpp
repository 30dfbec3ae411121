#pragma once

#include <cstdint>

#include "hazstereo/core/vec.hpp"

namespace hazstereo {

enum class TextureKind { Solid, Checker, ValueNoise };

const char* texture_kind_name(TextureKind k);
TextureKind texture_kind_from_name(const char* name);

// Procedural albedo. `scale` is a spatial frequency multiplier on the
// surface (u,v) coordinates; scale -> 0 degenerates to a solid color.
struct Texture {
    TextureKind kind = TextureKind::Solid;
    Vec3 color_a{0.7f, 0.7f, 0.7f};
    Vec3 color_b{0.3f, 0.3f, 0.3f};
    float scale = 1.0f;
    int octaves = 3;      // ValueNoise only
    uint32_t seed = 0;    // ValueNoise only

    Vec3 sample(float u, float v) const;
};

// Smooth value noise in [0,1], C1 across lattice cells.
float value_noise(float x, float y, uint32_t seed);
float fbm_noise(float x, float y, int octaves, uint32_t seed);

} // namespace hazstereo
