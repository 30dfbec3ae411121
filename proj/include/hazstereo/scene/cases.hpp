#pragma once

#include <cstdint>
#include <vector>

#include "hazstereo/scene/scene.hpp"

namespace hazstereo {

// Deterministic construction of the four designed hazard scenes. Each scene
// is a small room with one hazard carrier:
//   Specularity     -> metallic screen panel on the back wall
//   Texturelessness -> wall and ceiling share one scalable noise texture
//   Transparency    -> glass slab between the camera and background objects
//   DisparityJumps  -> field of thin rods at varied depths (no level knob)
SceneGraph build_case(HazardFactor factor, uint64_t seed);

// Maps a normalized hazard level onto the controlling material parameter:
//   Specularity:     roughness      = 0.6 * (1 - level)
//   Texturelessness: texture_scale  = s0 * (1 - level) + eps
//   Transparency:    opacity        = 1 - level
// Everything else in the scene is left untouched.
SceneGraph set_hazard_level(const SceneGraph& scene, HazardFactor factor, float level);

// Camera poses orbiting the scene's hazard object. Pose 0 is fronto-parallel;
// pose 1 (when count >= 2) is slanted at least 20 degrees off-normal; the rest
// vary azimuth/elevation/distance deterministically from the seed. Every pose
// looks at the hazard center, so it projects to the principal point.
std::vector<CameraPose> viewpoint_ring(const SceneGraph& scene, int count, uint64_t seed);

} // namespace hazstereo
