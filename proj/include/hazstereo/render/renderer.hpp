#pragma once

#include <cstdint>

#include "hazstereo/core/image.hpp"
#include "hazstereo/render/intersect.hpp"
#include "hazstereo/scene/scene.hpp"

namespace hazstereo {

struct RenderSettings {
    int samples_per_pixel = 1;
    int max_bounce_depth = 4;       // secondary-ray recursion cap
    float metallic_threshold = 0.5f;
    float roughness_threshold = 0.6f;
    float gamma = 2.2f;             // display encode exponent
    uint64_t seed = 0;

    void validate() const; // throws InvalidConfig
};

// material-flag map bits
constexpr uint16_t kFlagSpecular = 1u << 0;
constexpr uint16_t kFlagTransparent = 1u << 1;

// One camera's worth of images and dense ground truth. Ground truth is taken
// from the first surface hit of the center ray, transparent surfaces included.
struct CameraView {
    ImageF rgb;                 // W x H x 3, linear, clamped to [0,1]
    ImageU8 display;            // gamma-encoded 8-bit, what matchers consume
    ImageF depth;               // camera-z in meters, +inf where no surface
    ImageF disparity;           // = depth_to_disparity(depth), single source
    Image<uint16_t> instance;   // 0 = background
    Image<uint16_t> flags;      // kFlagSpecular / kFlagTransparent
    Mask budget_exceeded;       // pixels whose shading hit the bounce cap
    int budget_exceeded_count = 0;
};

struct FrameBundle {
    CameraView left;   // reference
    CameraView right;  // target
    StereoRig rig;
    CameraPose pose;   // left camera
    CaseInfo case_info;
    uint64_t seed = 0;
};

// d = focal_px * baseline_m / z; +inf depth -> 0. Throws NonPositiveDepth.
ImageF depth_to_disparity(const ImageF& depth, const StereoRig& rig);

float encode_gamma(float linear, float gamma);
ImageU8 encode_display(const ImageF& rgb, float gamma);

FrameBundle render_stereo(const SceneGraph& scene, const StereoRig& rig, const CameraPose& pose,
                          const RenderSettings& settings);

CameraView render_view(const SceneGraph& scene, const StereoRig& rig, const CameraPose& pose,
                       const RenderSettings& settings, int camera_index);

namespace ref {
// Plain serial implementation, kept as the comparison oracle for the
// parallel renderer. Same arithmetic, no worker sharding.
CameraView render_view(const SceneGraph& scene, const StereoRig& rig, const CameraPose& pose,
                       const RenderSettings& settings, int camera_index);
FrameBundle render_stereo(const SceneGraph& scene, const StereoRig& rig, const CameraPose& pose,
                          const RenderSettings& settings);
} // namespace ref

} // namespace hazstereo
