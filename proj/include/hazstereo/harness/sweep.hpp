#pragma once

#include <string>
#include <vector>

#include "hazstereo/eval/metrics.hpp"
#include "hazstereo/harness/config.hpp"

namespace hazstereo {

struct CellStatus {
    float level = 0.f;
    int viewpoint = 0;
    std::string matcher; // empty for render/mask stages
    bool ok = true;
    bool skipped = false; // artifacts already on disk from an earlier run
    std::string error;
};

struct SweepRunResult {
    bool all_ok = true;
    std::vector<CellStatus> cells;
    std::vector<SweepResult> regions; // aggregated per region, factor region first
    std::string manifest_path;
};

// Renders, masks, matches and evaluates every level x viewpoint x matcher
// cell under cfg.out_dir, then aggregates the persisted per-cell reports.
// Cells already on disk are not recomputed, so an interrupted run resumes
// where it stopped. Cell failures are recorded and do not stop other cells;
// all_ok is false if any cell or the aggregation failed. Outputs depend only
// on the config, not on thread counts or which cells were resumed.
SweepRunResult run_sweep(const SweepConfig& cfg);

// The per-cell report CSVs under out_dir, reloaded as sweep records. Raises
// IncompleteGrid (via aggregate_sweep) when cells are missing.
std::vector<SweepRecord> collect_records(const SweepConfig& cfg);

// One matcher spec applied to a bundle's display pair, including the optional
// mirrored-pass cross-check. The estimate's method is the spec name.
DisparityEstimate run_matcher(const MatcherSpec& spec, const FrameBundle& bundle);

// Region name carrying a factor's own hazard mask.
const char* factor_region_name(HazardFactor factor);

// 64-bit FNV-1a over a byte string; manifest fingerprints.
uint64_t fnv1a64(const std::string& bytes);
std::string fnv1a64_hex(const std::string& bytes);

// Line chart of metric vs level, one polyline per method. metric is "epe"
// or "badpix"; absent cells break the line.
std::string sweep_curves_svg(const SweepResult& result, const std::string& metric);

} // namespace hazstereo
