#pragma once

#include "hazstereo/core/image.hpp"
#include "hazstereo/render/renderer.hpp"

namespace hazstereo {

struct MaskParams {
    int window = 9;             // textureless: mean-gradient window, odd
    float grad_thresh = 0.01f;  // textureless: luminance units per px
    float jump_thresh = 2.0f;   // disparity_jump: px
    int radius = 2;             // jump/boundary band half-width
    float occlusion_tol = 1.0f; // cross-check tolerance, px
};

// All masks are left-camera referenced. specular/transparent come from the
// material-flag map, textureless from the display image, jump/boundary from
// ground truth; params are kept as provenance.
struct HazardMasks {
    Mask specular;
    Mask transparent;
    Mask textureless;
    Mask disparity_jump;
    Mask boundary;
    Mask nonoccluded;
    MaskParams params;
};

Mask specular_mask(const FrameBundle& bundle);
Mask transparent_mask(const FrameBundle& bundle);

// Textureless iff the mean forward-difference gradient magnitude of luminance
// over the window is below grad_thresh.
Mask textureless_mask(const ImageF& rgb, int window = 9, float grad_thresh = 0.01f);

// True within `radius` of any 4-neighbor disparity difference > jump_thresh
// (a band dilated around each discontinuity crack, 2*radius wide for a step).
Mask disparity_jump_mask(const ImageF& gt_disp, float jump_thresh = 2.0f, int radius = 2);

// True within `radius` of any instance-id change.
Mask boundary_mask(const Image<uint16_t>& instance, int radius = 2);

HazardMasks derive_all(const FrameBundle& bundle, const MaskParams& params = {});

// Which mask carries a given hazard factor.
const Mask& factor_mask(const HazardMasks& masks, HazardFactor factor);

} // namespace hazstereo
