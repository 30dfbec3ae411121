#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hazstereo/core/image.hpp"

namespace hazstereo {

enum class CostKind { CensusHamming, AbsoluteDifference };

const char* cost_kind_name(CostKind k);
CostKind cost_kind_from_name(const char* name);

// W x H x (d_max+1) matching costs; d indexes the leftward shift of the
// right image. Out-of-bounds correspondences carry border_cost, the maximum
// attainable cost of the kind, so WTA stays well-defined at borders.
struct CostVolume {
    int width = 0;
    int height = 0;
    int d_max = 0;
    CostKind kind = CostKind::CensusHamming;
    float border_cost = 0.f;
    std::vector<float> costs;

    float& at(int x, int y, int d) {
        return costs[(static_cast<size_t>(y) * width + x) * (d_max + 1) + d];
    }
    const float& at(int x, int y, int d) const {
        return costs[(static_cast<size_t>(y) * width + x) * (d_max + 1) + d];
    }
};

struct EnergyParams {
    float lambda_smooth = 1.f; // multiplies both penalties
    float p1 = 10.f;           // |Δd| = 1 penalty
    float p2 = 120.f;          // larger jumps
    int path_count = 8;        // 4 axis-aligned or 8 incl. diagonals

    void validate() const; // InvalidConfig
};

constexpr float kInvalidDisparity = -1.f;

struct DisparityEstimate {
    ImageF disparity; // kInvalidDisparity where validity = 0
    Mask validity;
    std::string method;
};

// Per pixel, bit i is set iff the i-th row-major window neighbor (center
// excluded) has greater luminance than the center; borders clamp. Window is
// limited to 7 (48 neighbor bits) by the 64-bit descriptor.
Image<uint64_t> census_transform(const ImageU8& image, int window);

CostVolume build_cost_volume(const ImageU8& left, const ImageU8& right, int d_max, CostKind kind,
                             int census_window = 5);

// Box aggregation (mean over the in-bounds window), winner-take-all with ties
// to the smallest disparity, parabola subpixel except at d in {0, d_max}.
DisparityEstimate block_match(const CostVolume& volume, int agg_window = 9);

// Scanline dynamic programming over path_count directions with truncated
// linear penalties {0, p1, p2}; path sums are corrected so the data term
// counts once, making the result the exact 1D energy minimizer per scanline.
DisparityEstimate sgm(const CostVolume& volume, const EnergyParams& params = {});

// The path-summed volume sgm() takes its winner-take-all over; exposed so the
// selected integer labeling can be inspected before subpixel refinement.
CostVolume sgm_aggregated_costs(const CostVolume& volume, const EnergyParams& params = {});

// Invalidates left pixels whose probe x - round(dL) is out of bounds or
// disagrees with the right estimate by more than tol.
DisparityEstimate lr_consistency(const DisparityEstimate& left, const DisparityEstimate& right,
                                 float tol = 1.0f);

enum class ValidityConvention {
    NegativeOrNonFinite, // float maps: d < 0 or non-finite marks invalid
    ZeroStored,          // 16-bit fixed point: stored 0 marks invalid
};

// Loads a .pfm or 16-bit .png disparity file produced elsewhere.
DisparityEstimate ingest_external(const std::string& path);
DisparityEstimate ingest_external(const std::string& path, ValidityConvention convention);

// Total scanline energy of a labeling on one row of the volume: data costs
// plus lambda-scaled {0,p1,p2} transition penalties. Shared by tests and the
// optimality property.
double scanline_energy(const CostVolume& volume, const EnergyParams& params, int y,
                       const std::vector<int>& labels);

namespace ref {
// Serial comparison implementations with straightforward loops.
CostVolume build_cost_volume(const ImageU8& left, const ImageU8& right, int d_max, CostKind kind,
                             int census_window = 5);
DisparityEstimate block_match(const CostVolume& volume, int agg_window = 9);
DisparityEstimate sgm(const CostVolume& volume, const EnergyParams& params = {});
} // namespace ref

} // namespace hazstereo
