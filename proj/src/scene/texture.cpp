#include "hazstereo/scene/texture.hpp"

#include <cmath>
#include <cstring>

#include "hazstereo/core/error.hpp"
#include "hazstereo/core/rng.hpp"

namespace hazstereo {

const char* texture_kind_name(TextureKind k) {
    switch (k) {
        case TextureKind::Solid: return "solid";
        case TextureKind::Checker: return "checker";
        case TextureKind::ValueNoise: return "value_noise";
    }
    return "solid";
}

TextureKind texture_kind_from_name(const char* name) {
    if (std::strcmp(name, "solid") == 0) return TextureKind::Solid;
    if (std::strcmp(name, "checker") == 0) return TextureKind::Checker;
    if (std::strcmp(name, "value_noise") == 0) return TextureKind::ValueNoise;
    raise(Errc::ParseError, std::string("unknown texture kind '") + name + "'");
}

static float lattice_value(int ix, int iy, uint32_t seed) {
    return hash_to_unit_float(hash_mix(static_cast<uint64_t>(static_cast<int64_t>(ix)),
                                       static_cast<uint64_t>(static_cast<int64_t>(iy)), seed));
}

static float smoothstep(float t) { return t * t * (3.f - 2.f * t); }

float value_noise(float x, float y, uint32_t seed) {
    const float fx = std::floor(x), fy = std::floor(y);
    const int ix = static_cast<int>(fx), iy = static_cast<int>(fy);
    const float tx = smoothstep(x - fx), ty = smoothstep(y - fy);
    const float v00 = lattice_value(ix, iy, seed);
    const float v10 = lattice_value(ix + 1, iy, seed);
    const float v01 = lattice_value(ix, iy + 1, seed);
    const float v11 = lattice_value(ix + 1, iy + 1, seed);
    const float a = v00 + (v10 - v00) * tx;
    const float b = v01 + (v11 - v01) * tx;
    return a + (b - a) * ty;
}

float fbm_noise(float x, float y, int octaves, uint32_t seed) {
    float sum = 0.f, amp = 1.f, norm = 0.f, freq = 1.f;
    for (int o = 0; o < octaves; ++o) {
        sum += amp * value_noise(x * freq, y * freq, seed + static_cast<uint32_t>(o) * 0x9e37u);
        norm += amp;
        amp *= 0.5f;
        freq *= 2.f;
    }
    return sum / norm;
}

Vec3 Texture::sample(float u, float v) const {
    switch (kind) {
        case TextureKind::Solid:
            return color_a;
        case TextureKind::Checker: {
            const float su = u * scale, sv = v * scale;
            const int pu = static_cast<int>(std::floor(su));
            const int pv = static_cast<int>(std::floor(sv));
            return ((pu + pv) & 1) == 0 ? color_a : color_b;
        }
        case TextureKind::ValueNoise: {
            const float t = fbm_noise(u * scale, v * scale, octaves, seed);
            return lerp(color_a, color_b, t);
        }
    }
    return color_a;
}

} // namespace hazstereo
