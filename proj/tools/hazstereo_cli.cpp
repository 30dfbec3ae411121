#include <cstdio>
#include <filesystem>
#include <string>

#include <CLI11.hpp>
#include <omp.h>

#include "hazstereo/core/error.hpp"
#include "hazstereo/harness/external.hpp"
#include "hazstereo/harness/sweep.hpp"
#include "hazstereo/hazard/masks.hpp"
#include "hazstereo/io/bundle_io.hpp"
#include "hazstereo/io/csv.hpp"
#include "hazstereo/scene/cases.hpp"
#include "hazstereo/scene/scene_json.hpp"

using namespace hazstereo;

namespace {

struct RenderArgs {
    std::string factor = "texturelessness";
    double level = 0.0;
    uint64_t seed = 7;
    int viewpoint = 0;
    int viewpoints = 4;
    std::string scene_path;
    std::string out_dir;
    StereoRig rig;
    RenderSettings settings;
};

int cmd_render(const RenderArgs& a) {
    SceneGraph scene;
    if (!a.scene_path.empty()) {
        scene = load_scene(a.scene_path);
    } else {
        const HazardFactor factor = hazard_factor_from_name(a.factor.c_str());
        scene = build_case(factor, a.seed);
        if (factor != HazardFactor::DisparityJumps)
            scene = set_hazard_level(scene, factor, static_cast<float>(a.level));
    }
    if (a.viewpoint < 0 || a.viewpoint >= a.viewpoints)
        raise(Errc::InvalidConfig, "viewpoint index out of range");
    const std::vector<CameraPose> poses = viewpoint_ring(scene, a.viewpoints, a.seed);
    RenderSettings settings = a.settings;
    settings.seed = a.seed;
    const FrameBundle bundle = render_stereo(scene, a.rig, poses[a.viewpoint], settings);
    save_bundle(bundle, a.out_dir);
    printf("bundle %s: %dx%d, budget_exceeded L=%d R=%d\n", a.out_dir.c_str(), a.rig.width,
           a.rig.height, bundle.left.budget_exceeded_count, bundle.right.budget_exceeded_count);
    return 0;
}

struct MasksArgs {
    std::string bundle_dir;
    std::string out_dir;
    MaskParams params;
};

int cmd_masks(const MasksArgs& a) {
    const FrameBundle bundle = load_bundle(a.bundle_dir);
    const HazardMasks masks = derive_all(bundle, a.params);
    save_masks(masks, a.out_dir);
    printf("masks %s: specular=%zu textureless=%zu transparent=%zu jump=%zu boundary=%zu nonocc=%zu\n",
           a.out_dir.c_str(), count_nonzero(masks.specular), count_nonzero(masks.textureless),
           count_nonzero(masks.transparent), count_nonzero(masks.disparity_jump),
           count_nonzero(masks.boundary), count_nonzero(masks.nonoccluded));
    return 0;
}

struct MatchArgs {
    std::string bundle_dir;
    std::string out_prefix;
    MatcherSpec spec;
};

int cmd_match(const MatchArgs& a) {
    const FrameBundle bundle = load_bundle(a.bundle_dir);
    DisparityEstimate est = run_matcher(a.spec, bundle);
    save_estimate(est, a.out_prefix);
    printf("estimate %s: method=%s valid=%zu\n", a.out_prefix.c_str(), est.method.c_str(),
           count_nonzero(est.validity));
    return 0;
}

struct EvalArgs {
    std::string bundle_dir;
    std::string masks_dir;
    std::string est_prefix;
    std::string out_csv;
    float tau = 3.f;
    std::string badpix_policy = "count_as_bad";
};

int cmd_eval(const EvalArgs& a) {
    const FrameBundle bundle = load_bundle(a.bundle_dir);
    const HazardMasks masks = load_masks(a.masks_dir);
    const DisparityEstimate est = load_estimate(a.est_prefix);
    const EvalReport report =
        region_report(est, bundle, masks, a.tau, invalid_policy_from_name(a.badpix_policy));
    const std::string csv = report_to_csv(report);
    if (!a.out_csv.empty()) {
        save_text(a.out_csv, csv);
    }
    fputs(csv.c_str(), stdout);
    return 0;
}

struct SweepArgs {
    std::string config_path;
    bool svg = false;
};

int cmd_sweep(const SweepArgs& a) {
    SweepConfig cfg = load_sweep_config(a.config_path);
    if (a.svg) cfg.emit_svg = true;
    const SweepRunResult res = run_sweep(cfg);
    int failed = 0, skipped = 0, computed = 0;
    for (const CellStatus& s : res.cells) {
        if (!s.ok)
            ++failed;
        else if (s.skipped)
            ++skipped;
        else
            ++computed;
    }
    printf("sweep %s: %d computed, %d resumed, %d failed\n", cfg.out_dir.c_str(), computed, skipped,
           failed);
    for (const CellStatus& s : res.cells)
        if (!s.ok)
            fprintf(stderr, "  cell L%s V%d %s: %s\n", format_float(s.level).c_str(), s.viewpoint,
                    s.matcher.empty() ? "frame" : s.matcher.c_str(), s.error.c_str());
    printf("manifest: %s\n", res.manifest_path.c_str());
    return res.all_ok ? 0 : 1;
}

struct ExternalArgs {
    std::string root;
    std::string out_dir;
    float tau = 3.f;
    std::string badpix_policy = "count_as_bad";
    int color_tolerance = 0;
};

int cmd_external(const ExternalArgs& a) {
    ExternalEvalParams params;
    params.tau = a.tau;
    params.badpix_policy = invalid_policy_from_name(a.badpix_policy);
    params.color_tolerance = a.color_tolerance;
    const ExternalEvalResult res = run_external_eval(a.root, params);
    const std::string scenes = external_rows_csv(res.scene_rows, true);
    const std::string summary = external_rows_csv(res.summary_rows, false);
    if (!a.out_dir.empty()) {
        std::filesystem::create_directories(a.out_dir);
        save_text(a.out_dir + "/scenes.csv", scenes);
        save_text(a.out_dir + "/summary.csv", summary);
        std::string notes;
        for (const ExternalSceneNote& n : res.notes) notes += n.scene + ": " + n.note + "\n";
        save_text(a.out_dir + "/notes.txt", notes);
    }
    fputs(summary.c_str(), stdout);
    for (const ExternalSceneNote& n : res.notes)
        fprintf(stderr, "note %s: %s\n", n.scene.c_str(), n.note.c_str());
    return 0;
}

struct CorrelateArgs {
    std::string table_a;
    std::string table_b;
    std::string region = "full";
    std::string metric = "epe";
};

int cmd_correlate(const CorrelateArgs& a) {
    const double r = correlate_tables(read_csv_file(a.table_a), read_csv_file(a.table_b), a.region,
                                      a.metric);
    printf("pearson %s %s: %s\n", a.region.c_str(), a.metric.c_str(), format_float(r).c_str());
    return 0;
}

void add_rig_options(CLI::App* cmd, StereoRig& rig) {
    cmd->add_option("--width", rig.width, "image width");
    cmd->add_option("--height", rig.height, "image height");
    cmd->add_option("--focal", rig.focal_px, "focal length in pixels");
    cmd->add_option("--baseline", rig.baseline_m, "stereo baseline in meters");
}

void add_render_options(CLI::App* cmd, RenderSettings& s) {
    cmd->add_option("--spp", s.samples_per_pixel, "samples per pixel");
    cmd->add_option("--max-bounces", s.max_bounce_depth, "secondary ray budget");
    cmd->add_option("--gamma", s.gamma, "display encode gamma");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"synthetic stereo hazard workbench"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (0 = library default)");

    RenderArgs render_args;
    auto* render_cmd = app.add_subcommand("render", "render a stereo bundle");
    render_cmd->add_option("--factor", render_args.factor, "hazard factor");
    render_cmd->add_option("--level", render_args.level, "hazard level in [0,1]");
    render_cmd->add_option("--seed", render_args.seed, "scene seed");
    render_cmd->add_option("--viewpoint", render_args.viewpoint, "viewpoint index");
    render_cmd->add_option("--viewpoints", render_args.viewpoints, "viewpoint ring size");
    render_cmd->add_option("--scene", render_args.scene_path, "scene json instead of a built-in case");
    render_cmd->add_option("--out", render_args.out_dir, "bundle output directory")->required();
    add_rig_options(render_cmd, render_args.rig);
    add_render_options(render_cmd, render_args.settings);

    MasksArgs masks_args;
    auto* masks_cmd = app.add_subcommand("masks", "derive hazard masks from a bundle");
    masks_cmd->add_option("--bundle", masks_args.bundle_dir, "bundle directory")->required();
    masks_cmd->add_option("--out", masks_args.out_dir, "masks output directory")->required();
    masks_cmd->add_option("--window", masks_args.params.window, "textureless window");
    masks_cmd->add_option("--grad-thresh", masks_args.params.grad_thresh, "textureless gradient threshold");
    masks_cmd->add_option("--jump-thresh", masks_args.params.jump_thresh, "disparity jump threshold");
    masks_cmd->add_option("--radius", masks_args.params.radius, "jump/boundary band half width");
    masks_cmd->add_option("--occlusion-tol", masks_args.params.occlusion_tol, "cross-check tolerance");

    MatchArgs match_args;
    std::string match_algo = "block_match", match_cost = "census";
    auto* match_cmd = app.add_subcommand("match", "estimate disparity from a bundle");
    match_cmd->add_option("--bundle", match_args.bundle_dir, "bundle directory")->required();
    match_cmd->add_option("--out", match_args.out_prefix, "estimate output prefix")->required();
    match_cmd->add_option("--algo", match_algo, "block_match or sgm");
    match_cmd->add_option("--cost", match_cost, "census or ad");
    match_cmd->add_option("--census-window", match_args.spec.census_window, "census window");
    match_cmd->add_option("--d-max", match_args.spec.d_max, "disparity search range");
    match_cmd->add_option("--agg-window", match_args.spec.agg_window, "block aggregation window");
    match_cmd->add_option("--lambda", match_args.spec.energy.lambda_smooth, "smoothness weight");
    match_cmd->add_option("--p1", match_args.spec.energy.p1, "small-step penalty");
    match_cmd->add_option("--p2", match_args.spec.energy.p2, "large-step penalty");
    match_cmd->add_option("--paths", match_args.spec.energy.path_count, "sgm path count (4 or 8)");
    match_cmd->add_flag("--lr", match_args.spec.lr_check, "left-right cross-check");
    match_cmd->add_option("--lr-tol", match_args.spec.lr_tol, "cross-check tolerance");

    EvalArgs eval_args;
    auto* eval_cmd = app.add_subcommand("eval", "region metrics for an estimate");
    eval_cmd->add_option("--bundle", eval_args.bundle_dir, "bundle directory")->required();
    eval_cmd->add_option("--masks", eval_args.masks_dir, "masks directory")->required();
    eval_cmd->add_option("--est", eval_args.est_prefix, "estimate prefix")->required();
    eval_cmd->add_option("--out", eval_args.out_csv, "report csv path");
    eval_cmd->add_option("--tau", eval_args.tau, "bad pixel threshold");
    eval_cmd->add_option("--badpix-policy", eval_args.badpix_policy, "exclude or count_as_bad");

    SweepArgs sweep_args;
    auto* sweep_cmd = app.add_subcommand("sweep", "run a full hazard level sweep");
    sweep_cmd->add_option("--config", sweep_args.config_path, "sweep config json")->required();
    sweep_cmd->add_flag("--svg", sweep_args.svg, "also write metric-vs-level charts");

    ExternalArgs ext_args;
    auto* ext_cmd = app.add_subcommand("external-eval", "score external estimates against annotations");
    ext_cmd->add_option("--root", ext_args.root, "dataset root directory")->required();
    ext_cmd->add_option("--out", ext_args.out_dir, "output directory for csv tables");
    ext_cmd->add_option("--tau", ext_args.tau, "bad pixel threshold");
    ext_cmd->add_option("--badpix-policy", ext_args.badpix_policy, "exclude or count_as_bad");
    ext_cmd->add_option("--color-tolerance", ext_args.color_tolerance, "annotation color tolerance");

    CorrelateArgs corr_args;
    auto* corr_cmd = app.add_subcommand("correlate", "pearson r between two score tables");
    corr_cmd->add_option("--x", corr_args.table_a, "first csv table")->required();
    corr_cmd->add_option("--y", corr_args.table_b, "second csv table")->required();
    corr_cmd->add_option("--region", corr_args.region, "region to compare");
    corr_cmd->add_option("--metric", corr_args.metric, "epe or badpix");

    CLI11_PARSE(app, argc, argv);
    if (threads > 0) omp_set_num_threads(threads);

    try {
        if (*render_cmd) return cmd_render(render_args);
        if (*masks_cmd) return cmd_masks(masks_args);
        if (*match_cmd) {
            match_args.spec.algo = matcher_algo_from_name(match_algo);
            match_args.spec.kind = cost_kind_from_name(match_cost.c_str());
            return cmd_match(match_args);
        }
        if (*eval_cmd) return cmd_eval(eval_args);
        if (*sweep_cmd) return cmd_sweep(sweep_args);
        if (*ext_cmd) return cmd_external(ext_args);
        if (*corr_cmd) return cmd_correlate(corr_args);
    } catch (const Error& e) {
        fprintf(stderr, "error [%s]: %s\n", errc_name(e.code()), e.what());
        return 1;
    } catch (const std::exception& e) {
        fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
