#pragma once

#include <string>
#include <vector>

#include "hazstereo/hazard/masks.hpp"
#include "hazstereo/io/csv.hpp"
#include "hazstereo/match/matchers.hpp"
#include "hazstereo/render/renderer.hpp"

namespace hazstereo {

enum class InvalidPolicy { Exclude, CountAsBad };

const char* invalid_policy_name(InvalidPolicy p);
InvalidPolicy invalid_policy_from_name(const std::string& name);

// Ground-truth pixels with finite non-negative disparity count as gt-valid;
// callers fold scene-level validity (background exclusion) into the mask.

// Mean |d_est - d_gt| over mask ∩ est-valid ∩ gt-valid. EmptyRegion if none.
float epe(const DisparityEstimate& est, const ImageF& gt, const Mask& mask);

// Percent of evaluated pixels with |d_est - d_gt| > tau. Under CountAsBad the
// evaluated set is mask ∩ gt-valid and invalid estimates are bad; under
// Exclude it shrinks to est-valid pixels.
float badpix(const DisparityEstimate& est, const ImageF& gt, const Mask& mask, float tau = 3.f,
             InvalidPolicy policy = InvalidPolicy::CountAsBad);

struct RegionMetrics {
    std::string region;
    size_t pixel_count = 0; // |mask ∩ nonoccluded ∩ gt-valid|
    size_t epe_count = 0;   // est-valid subset that fed the EPE mean
    bool epe_present = false;
    bool badpix_present = false;
    float epe_px = 0.f;
    float badpix_pct = 0.f;
};

struct EvalReport {
    std::string method;
    float tau = 3.f;
    InvalidPolicy epe_policy = InvalidPolicy::Exclude;
    InvalidPolicy badpix_policy = InvalidPolicy::CountAsBad;
    // full, nonoccluded, specular, textureless, transparent, disparity_jump, boundary
    std::vector<RegionMetrics> regions;

    const RegionMetrics& region(const std::string& name) const;
};

// Evaluates every region with hazard regions pre-intersected with the
// non-occluded mask; empty regions report absent metrics instead of NaN.
EvalReport region_report(const DisparityEstimate& est, const FrameBundle& bundle,
                         const HazardMasks& masks, float tau = 3.f,
                         InvalidPolicy badpix_policy = InvalidPolicy::CountAsBad);

// Sample Pearson correlation. DegenerateInput on length < 2, length mismatch,
// or zero variance.
double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

struct SweepRecord {
    std::string method;
    float level = 0.f;
    int viewpoint = 0;
    EvalReport report;
};

struct SweepCell {
    bool epe_present = false;
    bool badpix_present = false;
    float epe = 0.f;
    float badpix = 0.f;
    int epe_n = 0;    // viewpoints contributing
    int badpix_n = 0;
};

struct SweepResult {
    std::string region;
    std::vector<std::string> methods; // sorted
    std::vector<float> levels;        // ascending
    int viewpoint_count = 0;
    std::vector<SweepCell> cells;     // methods-major

    SweepCell& cell(size_t method_idx, size_t level_idx) {
        return cells[method_idx * levels.size() + level_idx];
    }
    const SweepCell& cell(size_t method_idx, size_t level_idx) const {
        return cells[method_idx * levels.size() + level_idx];
    }
};

// Unweighted mean over viewpoints per (method, level); the grid must be
// complete (every method x level covering the same viewpoint set).
SweepResult aggregate_sweep(const std::vector<SweepRecord>& records, const std::string& region);

std::string report_to_csv(const EvalReport& report);
// Inverse of report_to_csv; ParseError on missing columns or bad numbers.
EvalReport report_from_csv(const CsvTable& table);
std::string sweep_to_csv(const SweepResult& result, const std::string& factor_name);
// Per-method collapse of a sweep: unweighted mean over levels of the
// viewpoint means, one row per method. Used as a correlation axis.
std::string sweep_methods_csv(const std::vector<SweepResult>& regions);

} // namespace hazstereo
