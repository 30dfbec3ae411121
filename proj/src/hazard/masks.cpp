#include "hazstereo/hazard/masks.hpp"

#include <cmath>

#include "hazstereo/core/color.hpp"
#include "hazstereo/render/warp.hpp"

namespace hazstereo {

namespace {

Mask flag_mask(const FrameBundle& bundle, uint16_t bit) {
    const auto& flags = bundle.left.flags;
    Mask out(flags.width(), flags.height(), 1);
    for (size_t i = 0; i < flags.size(); ++i)
        out.data()[i] = (flags.data()[i] & bit) ? 1 : 0;
    return out;
}

// Chebyshev dilation by `r` via separable max passes.
Mask dilate(const Mask& in, int r) {
    if (r <= 0) return in;
    const int w = in.width(), h = in.height();
    Mask tmp(w, h, 1), out(w, h, 1);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            uint8_t v = 0;
            for (int dx = -r; dx <= r && !v; ++dx) {
                const int xx = x + dx;
                if (xx >= 0 && xx < w) v = in.at(xx, y);
            }
            tmp.at(x, y) = v;
        }
    }
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            uint8_t v = 0;
            for (int dy = -r; dy <= r && !v; ++dy) {
                const int yy = y + dy;
                if (yy >= 0 && yy < h) v = tmp.at(x, yy);
            }
            out.at(x, y) = v;
        }
    }
    return out;
}

// Marks both endpoint pixels of every crack the predicate flags, then dilates
// by radius-1; a single straight crack yields a band 2*radius wide.
template <typename Img, typename Pred>
Mask crack_band(const Img& img, int radius, Pred differs) {
    const int w = img.width(), h = img.height();
    Mask edges(w, h, 1);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (x + 1 < w && differs(img.at(x, y), img.at(x + 1, y))) {
                edges.at(x, y) = 1;
                edges.at(x + 1, y) = 1;
            }
            if (y + 1 < h && differs(img.at(x, y), img.at(x, y + 1))) {
                edges.at(x, y) = 1;
                edges.at(x, y + 1) = 1;
            }
        }
    }
    return dilate(edges, radius - 1);
}

} // namespace

Mask specular_mask(const FrameBundle& bundle) { return flag_mask(bundle, kFlagSpecular); }

Mask transparent_mask(const FrameBundle& bundle) { return flag_mask(bundle, kFlagTransparent); }

Mask textureless_mask(const ImageF& rgb, int window, float grad_thresh) {
    if (window < 3 || window % 2 == 0)
        raise(Errc::InvalidConfig, "textureless window must be odd and >= 3");
    if (window > rgb.width() || window > rgb.height())
        raise(Errc::WindowTooLarge, "textureless window exceeds image size");

    const ImageF luma = luminance(rgb);
    const int w = luma.width(), h = luma.height();

    // forward differences; last column/row have no forward neighbor
    ImageF grad(w, h, 1);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const float gx = x + 1 < w ? luma.at(x + 1, y) - luma.at(x, y) : 0.f;
            const float gy = y + 1 < h ? luma.at(x, y + 1) - luma.at(x, y) : 0.f;
            grad.at(x, y) = std::sqrt(gx * gx + gy * gy);
        }
    }

    const int r = window / 2;
    Mask out(w, h, 1);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double sum = 0.0;
            int n = 0;
            for (int dy = -r; dy <= r; ++dy) {
                const int yy = y + dy;
                if (yy < 0 || yy >= h) continue;
                for (int dx = -r; dx <= r; ++dx) {
                    const int xx = x + dx;
                    if (xx < 0 || xx >= w) continue;
                    sum += grad.at(xx, yy);
                    ++n;
                }
            }
            out.at(x, y) = (sum / n < grad_thresh) ? 1 : 0;
        }
    }
    return out;
}

Mask disparity_jump_mask(const ImageF& gt_disp, float jump_thresh, int radius) {
    if (!(jump_thresh > 0.f)) raise(Errc::InvalidConfig, "jump_thresh must be positive");
    if (radius < 1) raise(Errc::InvalidConfig, "radius must be >= 1");
    return crack_band(gt_disp, radius,
                      [&](float a, float b) { return std::fabs(a - b) > jump_thresh; });
}

Mask boundary_mask(const Image<uint16_t>& instance, int radius) {
    if (radius < 1) raise(Errc::InvalidConfig, "radius must be >= 1");
    return crack_band(instance, radius, [](uint16_t a, uint16_t b) { return a != b; });
}

HazardMasks derive_all(const FrameBundle& bundle, const MaskParams& params) {
    HazardMasks m;
    m.params = params;
    m.specular = specular_mask(bundle);
    m.transparent = transparent_mask(bundle);
    m.textureless = textureless_mask(to_float01(bundle.left.display), params.window, params.grad_thresh);
    m.disparity_jump = disparity_jump_mask(bundle.left.disparity, params.jump_thresh, params.radius);
    m.boundary = boundary_mask(bundle.left.instance, params.radius);
    m.nonoccluded = occlusion_mask(bundle.left.disparity, bundle.right.disparity, params.occlusion_tol);
    return m;
}

const Mask& factor_mask(const HazardMasks& masks, HazardFactor factor) {
    switch (factor) {
        case HazardFactor::Specularity: return masks.specular;
        case HazardFactor::Texturelessness: return masks.textureless;
        case HazardFactor::Transparency: return masks.transparent;
        case HazardFactor::DisparityJumps: return masks.disparity_jump;
    }
    return masks.disparity_jump;
}

} // namespace hazstereo
