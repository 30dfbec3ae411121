#pragma once

#include "hazstereo/core/image.hpp"

namespace hazstereo {

// Both require dimensions divisible by the factor.
ImageF downsample_nearest(const ImageF& img, int factor);
ImageF downsample_area(const ImageF& img, int factor);

// Disparity-aware: output values are divided by the factor so they stay in
// output-pixel units. Area mode averages only valid (>= 0, finite) samples;
// cells with none become the invalid sentinel.
ImageF downsample_disparity(const ImageF& disp, int factor, bool area);

} // namespace hazstereo
