#pragma once

#include <string>

#include "hazstereo/hazard/masks.hpp"
#include "hazstereo/match/matchers.hpp"
#include "hazstereo/render/renderer.hpp"

namespace hazstereo {

// Directory layout (see docs/FORMATS.md): display images as 8-bit PNG, depth
// and disparity as PFM, instance/flag maps as 16-bit PNG, meta.json for the
// rest. Linear rgb is reconstructed from the display PNG on load.
void save_bundle(const FrameBundle& bundle, const std::string& dir);
FrameBundle load_bundle(const std::string& dir);

void save_masks(const HazardMasks& masks, const std::string& dir);
HazardMasks load_masks(const std::string& dir);

// Writes <prefix>.pfm, <prefix>_valid.png, <prefix>.json.
void save_estimate(const DisparityEstimate& est, const std::string& prefix);
DisparityEstimate load_estimate(const std::string& prefix);

} // namespace hazstereo
