#include "hazstereo/harness/config.hpp"

#include <fstream>
#include <set>

#include "hazstereo/core/error.hpp"
#include "hazstereo/scene/scene_json.hpp"

namespace hazstereo {

using nlohmann::json;

const char* matcher_algo_name(MatcherAlgo algo) {
    return algo == MatcherAlgo::Block ? "block_match" : "sgm";
}

MatcherAlgo matcher_algo_from_name(const std::string& name) {
    if (name == "block_match") return MatcherAlgo::Block;
    if (name == "sgm") return MatcherAlgo::Sgm;
    raise(Errc::ParseError, "unknown matcher algorithm: " + name);
}

namespace {

bool filesystem_safe(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                        c == '_' || c == '-';
        if (!ok) return false;
    }
    return true;
}

json matcher_to_json(const MatcherSpec& m) {
    json j{{"name", m.name},
           {"algo", matcher_algo_name(m.algo)},
           {"cost", cost_kind_name(m.kind)},
           {"census_window", m.census_window},
           {"d_max", m.d_max},
           {"lr_check", m.lr_check},
           {"lr_tol", m.lr_tol}};
    if (m.algo == MatcherAlgo::Block) {
        j["agg_window"] = m.agg_window;
    } else {
        j["lambda"] = m.energy.lambda_smooth;
        j["p1"] = m.energy.p1;
        j["p2"] = m.energy.p2;
        j["paths"] = m.energy.path_count;
    }
    return j;
}

MatcherSpec matcher_from_json(const json& j) {
    MatcherSpec m;
    m.name = j.at("name").get<std::string>();
    m.algo = matcher_algo_from_name(j.at("algo").get<std::string>());
    if (j.contains("cost")) m.kind = cost_kind_from_name(j.at("cost").get<std::string>().c_str());
    if (j.contains("census_window")) m.census_window = j.at("census_window").get<int>();
    if (j.contains("d_max")) m.d_max = j.at("d_max").get<int>();
    if (j.contains("lr_check")) m.lr_check = j.at("lr_check").get<bool>();
    if (j.contains("lr_tol")) m.lr_tol = j.at("lr_tol").get<float>();
    if (j.contains("agg_window")) m.agg_window = j.at("agg_window").get<int>();
    if (j.contains("lambda")) m.energy.lambda_smooth = j.at("lambda").get<float>();
    if (j.contains("p1")) m.energy.p1 = j.at("p1").get<float>();
    if (j.contains("p2")) m.energy.p2 = j.at("p2").get<float>();
    if (j.contains("paths")) m.energy.path_count = j.at("paths").get<int>();
    return m;
}

json render_to_json(const RenderSettings& s) {
    return json{{"samples_per_pixel", s.samples_per_pixel},
                {"max_bounce_depth", s.max_bounce_depth},
                {"metallic_threshold", s.metallic_threshold},
                {"roughness_threshold", s.roughness_threshold},
                {"gamma", s.gamma}};
}

RenderSettings render_from_json(const json& j) {
    RenderSettings s;
    if (j.contains("samples_per_pixel")) s.samples_per_pixel = j.at("samples_per_pixel").get<int>();
    if (j.contains("max_bounce_depth")) s.max_bounce_depth = j.at("max_bounce_depth").get<int>();
    if (j.contains("metallic_threshold"))
        s.metallic_threshold = j.at("metallic_threshold").get<float>();
    if (j.contains("roughness_threshold"))
        s.roughness_threshold = j.at("roughness_threshold").get<float>();
    if (j.contains("gamma")) s.gamma = j.at("gamma").get<float>();
    return s;
}

json mask_params_to_json(const MaskParams& p) {
    return json{{"window", p.window},
                {"grad_thresh", p.grad_thresh},
                {"jump_thresh", p.jump_thresh},
                {"radius", p.radius},
                {"occlusion_tol", p.occlusion_tol}};
}

MaskParams mask_params_from_json(const json& j) {
    MaskParams p;
    if (j.contains("window")) p.window = j.at("window").get<int>();
    if (j.contains("grad_thresh")) p.grad_thresh = j.at("grad_thresh").get<float>();
    if (j.contains("jump_thresh")) p.jump_thresh = j.at("jump_thresh").get<float>();
    if (j.contains("radius")) p.radius = j.at("radius").get<int>();
    if (j.contains("occlusion_tol")) p.occlusion_tol = j.at("occlusion_tol").get<float>();
    return p;
}

} // namespace

void SweepConfig::validate() const {
    if (levels.empty()) raise(Errc::InvalidConfig, "sweep needs at least one level");
    for (float l : levels)
        if (!(l >= 0.f && l <= 1.f)) raise(Errc::InvalidConfig, "sweep levels must lie in [0,1]");
    for (size_t i = 1; i < levels.size(); ++i)
        if (!(levels[i] > levels[i - 1]))
            raise(Errc::InvalidConfig, "sweep levels must be strictly increasing");
    if (factor == HazardFactor::DisparityJumps && levels.size() != 1)
        raise(Errc::InvalidConfig, "disparity_jumps has no level knob; give exactly one level");
    if (viewpoints < 1) raise(Errc::InvalidConfig, "sweep needs at least one viewpoint");
    if (out_dir.empty()) raise(Errc::InvalidConfig, "sweep needs an output directory");
    if (matchers.empty()) raise(Errc::InvalidConfig, "sweep needs at least one matcher");
    std::set<std::string> names;
    for (const MatcherSpec& m : matchers) {
        if (!filesystem_safe(m.name))
            raise(Errc::InvalidConfig, "matcher name must be nonempty [A-Za-z0-9_-]: '" + m.name + "'");
        if (!names.insert(m.name).second)
            raise(Errc::InvalidConfig, "duplicate matcher name: " + m.name);
        if (m.d_max < 1) raise(Errc::InvalidConfig, "matcher d_max must be >= 1");
        if (m.algo == MatcherAlgo::Sgm) m.energy.validate();
    }
    if (!(tau >= 0.f)) raise(Errc::InvalidConfig, "tau must be >= 0");
    rig.validate();
    render.validate();
}

json sweep_config_to_json(const SweepConfig& cfg) {
    json matchers = json::array();
    for (const MatcherSpec& m : cfg.matchers) matchers.push_back(matcher_to_json(m));
    return json{{"factor", hazard_factor_name(cfg.factor)},
                {"levels", cfg.levels},
                {"viewpoints", cfg.viewpoints},
                {"seed", cfg.seed},
                {"out_dir", cfg.out_dir},
                {"rig", rig_to_json(cfg.rig)},
                {"render", render_to_json(cfg.render)},
                {"mask_params", mask_params_to_json(cfg.mask_params)},
                {"matchers", matchers},
                {"tau", cfg.tau},
                {"badpix_policy", invalid_policy_name(cfg.badpix_policy)},
                {"emit_svg", cfg.emit_svg}};
}

SweepConfig sweep_config_from_json(const json& j) {
    SweepConfig cfg;
    cfg.factor = hazard_factor_from_name(j.at("factor").get<std::string>().c_str());
    cfg.levels = j.at("levels").get<std::vector<float>>();
    cfg.viewpoints = j.at("viewpoints").get<int>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<uint64_t>();
    cfg.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("rig")) cfg.rig = rig_from_json(j.at("rig"));
    if (j.contains("render")) cfg.render = render_from_json(j.at("render"));
    if (j.contains("mask_params")) cfg.mask_params = mask_params_from_json(j.at("mask_params"));
    for (const json& m : j.at("matchers")) cfg.matchers.push_back(matcher_from_json(m));
    if (j.contains("tau")) cfg.tau = j.at("tau").get<float>();
    if (j.contains("badpix_policy"))
        cfg.badpix_policy = invalid_policy_from_name(j.at("badpix_policy").get<std::string>());
    if (j.contains("emit_svg")) cfg.emit_svg = j.at("emit_svg").get<bool>();
    cfg.validate();
    return cfg;
}

SweepConfig load_sweep_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::IoError, "cannot open config " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        raise(Errc::ParseError, std::string("config json: ") + e.what());
    }
    return sweep_config_from_json(j);
}

} // namespace hazstereo
