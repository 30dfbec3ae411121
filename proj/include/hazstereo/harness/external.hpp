#pragma once

#include <string>
#include <vector>

#include "hazstereo/eval/metrics.hpp"
#include "hazstereo/io/annotation.hpp"

namespace hazstereo {

struct ExternalEvalParams {
    float tau = 3.f;
    InvalidPolicy badpix_policy = InvalidPolicy::CountAsBad;
    std::vector<ColorKey> keys; // empty -> default red/green keys
    int color_tolerance = 0;
};

struct ExternalSceneNote {
    std::string scene;
    std::string note; // why the scene or a method was skipped
};

struct ExternalRow {
    std::string scene; // empty in the per-method summary
    std::string method;
    std::string region;
    size_t pixel_count = 0;
    bool epe_present = false;
    bool badpix_present = false;
    float epe = 0.f;
    float badpix = 0.f;
};

struct ExternalEvalResult {
    std::vector<ExternalRow> scene_rows;   // scene x method x region
    std::vector<ExternalRow> summary_rows; // method x region, mean over scenes
    std::vector<ExternalSceneNote> notes;
};

// Walks root/<scene>/ directories, each holding ground truth (gt.pfm or
// gt.png), annotation.png with the color-keyed hazard regions, an optional
// nonoccluded.png mask, and estimates/<method>.{pfm,png}. Regions evaluated:
// full plus one per color key, all intersected with the non-occluded mask.
// Scenes without usable ground truth or annotation are skipped with a note;
// per-method load failures are noted without stopping the rest.
ExternalEvalResult run_external_eval(const std::string& root, const ExternalEvalParams& params = {});

std::string external_rows_csv(const std::vector<ExternalRow>& rows, bool with_scene);

// Pearson correlation between two score tables across their shared method
// axis. Each CSV needs method, region and the metric column ("epe" and
// "badpix" accept *_mean aliases); rows are filtered to `region`, methods
// present in both tables are paired in sorted order. DegenerateInput when
// fewer than two methods are shared.
double correlate_tables(const CsvTable& a, const CsvTable& b, const std::string& region,
                        const std::string& metric);

} // namespace hazstereo
