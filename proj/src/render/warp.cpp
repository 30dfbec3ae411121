#include "hazstereo/render/warp.hpp"

#include <cmath>

#include "hazstereo/core/error.hpp"

namespace hazstereo {

Mask occlusion_mask(const ImageF& disp_left, const ImageF& disp_right, float tol) {
    require_same_shape(disp_left, disp_right, "occlusion_mask: disparity maps");
    if (disp_left.channels() != 1 || disp_right.channels() != 1)
        raise(Errc::ShapeMismatch, "occlusion_mask: disparity maps must be single channel");
    if (!(tol > 0.f)) raise(Errc::InvalidConfig, "occlusion cross-check tol must be positive");

    const int w = disp_left.width(), h = disp_left.height();
    Mask out(w, h, 1);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const float dl = disp_left.at(x, y);
            const int xr = static_cast<int>(std::lround(x - dl));
            if (xr < 0 || xr >= w) continue;
            if (std::fabs(dl - disp_right.at(xr, y)) <= tol) out.at(x, y) = 1;
        }
    }
    return out;
}

namespace {

// bilinear fetch of one channel at (xf, y); xf must be in [0, w-1]
float sample_row(const ImageF& img, float xf, int y, int ch) {
    const int w = img.width();
    int x0 = static_cast<int>(std::floor(xf));
    if (x0 > w - 2) x0 = w - 2;
    if (x0 < 0) x0 = 0;
    const float fx = xf - static_cast<float>(x0);
    return img.at(x0, y, ch) * (1.f - fx) + img.at(x0 + 1, y, ch) * fx;
}

} // namespace

WarpReport verify_by_warp(const FrameBundle& bundle, const Mask& nonoccluded) {
    const ImageF& left = bundle.left.rgb;
    const ImageF& right = bundle.right.rgb;
    require_same_shape(left, nonoccluded, "verify_by_warp: mask");
    if (count_nonzero(nonoccluded) == 0)
        raise(Errc::EmptyMask, "verify_by_warp: non-occluded mask is empty");

    const int w = left.width(), h = left.height();
    struct Acc {
        double sum_sq = 0.0;
        size_t samples = 0; // pixel count, 3 channels each
    };
    Acc total;
    std::map<std::string, Acc> groups;
    size_t requested = 0, in_bounds = 0;

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!nonoccluded.at(x, y)) continue;
            ++requested;
            const float d = bundle.left.disparity.at(x, y);
            const float xf = static_cast<float>(x) - d;
            if (xf < 0.f || xf > static_cast<float>(w - 1)) continue;
            ++in_bounds;
            double sq = 0.0;
            for (int ch = 0; ch < 3; ++ch) {
                const float diff = left.at(x, y, ch) - sample_row(right, xf, y, ch);
                sq += static_cast<double>(diff) * diff;
            }
            const uint16_t f = bundle.left.flags.at(x, y);
            const char* key = (f & kFlagSpecular) ? "specular"
                              : (f & kFlagTransparent) ? "transparent"
                                                       : "other";
            total.sum_sq += sq;
            total.samples += 1;
            Acc& g = groups[key];
            g.sum_sq += sq;
            g.samples += 1;
        }
    }

    WarpReport rep;
    rep.coverage = requested ? static_cast<float>(in_bounds) / static_cast<float>(requested) : 0.f;
    rep.rmse = total.samples
                   ? static_cast<float>(std::sqrt(total.sum_sq / (3.0 * static_cast<double>(total.samples))))
                   : 0.f;
    for (const auto& [key, acc] : groups) {
        rep.per_mask_rmse[key] =
            static_cast<float>(std::sqrt(acc.sum_sq / (3.0 * static_cast<double>(acc.samples))));
        rep.per_mask_count[key] = acc.samples;
    }
    return rep;
}

} // namespace hazstereo
