#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "hazstereo/eval/metrics.hpp"
#include "hazstereo/hazard/masks.hpp"
#include "hazstereo/match/matchers.hpp"
#include "hazstereo/render/renderer.hpp"
#include "hazstereo/scene/scene.hpp"

namespace hazstereo {

enum class MatcherAlgo { Block, Sgm };

const char* matcher_algo_name(MatcherAlgo algo);
MatcherAlgo matcher_algo_from_name(const std::string& name);

struct MatcherSpec {
    std::string name;  // unique, filesystem-safe; becomes the method axis in results
    MatcherAlgo algo = MatcherAlgo::Block;
    CostKind kind = CostKind::CensusHamming;
    int census_window = 5;
    int d_max = 64;
    int agg_window = 9;   // block matcher only
    EnergyParams energy;  // sgm only
    bool lr_check = false;
    float lr_tol = 1.f;
};

struct SweepConfig {
    HazardFactor factor = HazardFactor::Texturelessness;
    std::vector<float> levels{0.f, 0.25f, 0.5f, 0.75f, 1.f};
    int viewpoints = 4;
    uint64_t seed = 7;
    std::string out_dir;
    StereoRig rig;
    RenderSettings render;
    MaskParams mask_params;
    std::vector<MatcherSpec> matchers;
    float tau = 3.f;
    InvalidPolicy badpix_policy = InvalidPolicy::CountAsBad;
    bool emit_svg = false;

    // Raises InvalidConfig on any violation. The config alone determines every
    // artifact a run produces.
    void validate() const;
};

nlohmann::json sweep_config_to_json(const SweepConfig& cfg);
SweepConfig sweep_config_from_json(const nlohmann::json& j);
SweepConfig load_sweep_config(const std::string& path);

} // namespace hazstereo
