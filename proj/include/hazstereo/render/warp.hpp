#pragma once

#include <map>
#include <string>

#include "hazstereo/core/image.hpp"
#include "hazstereo/render/renderer.hpp"

namespace hazstereo {

struct WarpReport {
    float rmse = 0.f;      // photometric RMSE over in-bounds samples, [0,1]
    float coverage = 0.f;  // fraction of requested pixels warped in-bounds
    // keyed "specular" / "transparent" / "other", from the material-flag map
    std::map<std::string, float> per_mask_rmse;
    std::map<std::string, size_t> per_mask_count;
};

// Left pixel is non-occluded iff x - d_L lands in bounds and the right map
// agrees within tol there (nearest-neighbor lookup).
Mask occlusion_mask(const ImageF& disp_left, const ImageF& disp_right, float tol = 1.0f);

// Samples the right image at (x - d, y) with bilinear interpolation for every
// non-occluded left pixel and reports the color RMSE.
WarpReport verify_by_warp(const FrameBundle& bundle, const Mask& nonoccluded);

} // namespace hazstereo
