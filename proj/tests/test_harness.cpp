#include "doctest.h"

#include <filesystem>
#include <optional>

#include "hazstereo/harness/config.hpp"
#include "hazstereo/harness/external.hpp"
#include "hazstereo/harness/sweep.hpp"
#include "hazstereo/io/bundle_io.hpp"
#include "hazstereo/io/pfm.hpp"
#include "hazstereo/io/png_io.hpp"
#include "hazstereo/scene/cases.hpp"

#include "helpers.hpp"

using namespace hazstereo;
using namespace testutil;
namespace fs = std::filesystem;

namespace {

SweepConfig tiny_config(const std::string& out_dir) {
    SweepConfig cfg;
    cfg.factor = HazardFactor::Texturelessness;
    cfg.levels = {0.5f};
    cfg.viewpoints = 1;
    cfg.seed = 7;
    cfg.out_dir = out_dir;
    cfg.rig.width = 80;
    cfg.rig.height = 60;
    cfg.rig.focal_px = 70.f;
    cfg.rig.cx = 39.5f;
    cfg.rig.cy = 29.5f;
    MatcherSpec block;
    block.name = "block";
    block.algo = MatcherAlgo::Block;
    block.d_max = 16;
    block.agg_window = 5;
    cfg.matchers = {block};
    return cfg;
}

template <typename Fn>
std::optional<Errc> code_of(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

std::string file_text(const std::string& path) {
    const std::vector<uint8_t> bytes = read_file_bytes(path);
    return std::string(bytes.begin(), bytes.end());
}

} // namespace

TEST_CASE("sweep config validation") {
    SweepConfig cfg = tiny_config("/tmp/never_used");
    CHECK_NOTHROW(cfg.validate());

    SweepConfig c = cfg;
    c.levels = {};
    CHECK(code_of([&] { c.validate(); }) == Errc::InvalidConfig);
    c = cfg;
    c.levels = {0.f, 1.5f};
    CHECK(code_of([&] { c.validate(); }) == Errc::InvalidConfig);
    c = cfg;
    c.levels = {0.5f, 0.5f};
    CHECK(code_of([&] { c.validate(); }) == Errc::InvalidConfig);
    c = cfg;
    c.factor = HazardFactor::DisparityJumps;
    c.levels = {0.f, 1.f};
    CHECK(code_of([&] { c.validate(); }) == Errc::InvalidConfig);
    c.levels = {0.f};
    CHECK_NOTHROW(c.validate());
    c = cfg;
    c.viewpoints = 0;
    CHECK(code_of([&] { c.validate(); }) == Errc::InvalidConfig);
    c = cfg;
    c.out_dir = "";
    CHECK(code_of([&] { c.validate(); }) == Errc::InvalidConfig);
    c = cfg;
    c.matchers.clear();
    CHECK(code_of([&] { c.validate(); }) == Errc::InvalidConfig);
    c = cfg;
    c.matchers[0].name = "has space";
    CHECK(code_of([&] { c.validate(); }) == Errc::InvalidConfig);
    c = cfg;
    c.matchers.push_back(c.matchers[0]); // duplicate name
    CHECK(code_of([&] { c.validate(); }) == Errc::InvalidConfig);
    c = cfg;
    c.matchers[0].d_max = 0;
    CHECK(code_of([&] { c.validate(); }) == Errc::InvalidConfig);
    c = cfg;
    c.tau = -1.f;
    CHECK(code_of([&] { c.validate(); }) == Errc::InvalidConfig);
    c = cfg;
    MatcherSpec bad_sgm;
    bad_sgm.name = "sgm_bad";
    bad_sgm.algo = MatcherAlgo::Sgm;
    bad_sgm.energy.p1 = 5.f;
    bad_sgm.energy.p2 = 1.f; // p2 < p1
    c.matchers.push_back(bad_sgm);
    CHECK(code_of([&] { c.validate(); }) == Errc::InvalidConfig);
}

TEST_CASE("sweep config json round trip") {
    SweepConfig cfg = tiny_config("/tmp/roundtrip_out");
    MatcherSpec sgm_spec;
    sgm_spec.name = "sgm";
    sgm_spec.algo = MatcherAlgo::Sgm;
    sgm_spec.d_max = 24;
    sgm_spec.energy.p1 = 8.f;
    sgm_spec.energy.p2 = 90.f;
    sgm_spec.lr_check = true;
    sgm_spec.lr_tol = 1.5f;
    cfg.matchers.push_back(sgm_spec);
    cfg.tau = 2.f;
    cfg.badpix_policy = InvalidPolicy::Exclude;
    cfg.emit_svg = true;

    nlohmann::json j = sweep_config_to_json(cfg);
    SweepConfig back = sweep_config_from_json(j);
    CHECK(sweep_config_to_json(back).dump() == j.dump());

    std::string dir = scratch_dir("config_rt");
    save_text(dir + "/cfg.json", j.dump(2));
    SweepConfig loaded = load_sweep_config(dir + "/cfg.json");
    CHECK(sweep_config_to_json(loaded).dump() == j.dump());

    save_text(dir + "/junk.json", "not json {");
    CHECK(code_of([&] { load_sweep_config(dir + "/junk.json"); }) == Errc::ParseError);
    CHECK(code_of([&] { load_sweep_config(dir + "/absent.json"); }) == Errc::IoError);
}

TEST_CASE("name maps") {
    CHECK(matcher_algo_from_name("block_match") == MatcherAlgo::Block);
    CHECK(matcher_algo_from_name("sgm") == MatcherAlgo::Sgm);
    CHECK(matcher_algo_name(MatcherAlgo::Block) == std::string("block_match"));
    CHECK(code_of([&] { matcher_algo_from_name("fancy"); }) == Errc::ParseError);

    CHECK(factor_region_name(HazardFactor::Specularity) == std::string("specular"));
    CHECK(factor_region_name(HazardFactor::Texturelessness) == std::string("textureless"));
    CHECK(factor_region_name(HazardFactor::Transparency) == std::string("transparent"));
    CHECK(factor_region_name(HazardFactor::DisparityJumps) == std::string("disparity_jump"));
}

TEST_CASE("fnv1a64 known vectors") {
    CHECK(fnv1a64("") == 14695981039346656037ull);
    CHECK(fnv1a64_hex("") == "cbf29ce484222325");
    CHECK(fnv1a64_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a64_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("run_matcher applies the spec to a bundle's display pair") {
    auto [left, right] = shifted_pair(64, 24, 4, 91);
    FrameBundle bundle;
    bundle.left.display = left;
    bundle.right.display = right;

    MatcherSpec spec;
    spec.name = "unit_block";
    spec.algo = MatcherAlgo::Block;
    spec.d_max = 10;
    spec.agg_window = 5;
    DisparityEstimate got = run_matcher(spec, bundle);
    CHECK(got.method == "unit_block");
    DisparityEstimate want = block_match(build_cost_volume(left, right, 10, CostKind::CensusHamming), 5);
    CHECK(got.disparity == want.disparity);
    CHECK(got.validity == want.validity);

    SUBCASE("the cross-check pass only removes pixels") {
        MatcherSpec checked = spec;
        checked.lr_check = true;
        DisparityEstimate filtered = run_matcher(checked, bundle);
        size_t removed = 0;
        for (size_t i = 0; i < filtered.validity.size(); ++i) {
            CHECK(filtered.validity.data()[i] <= got.validity.data()[i]);
            if (!filtered.validity.data()[i]) {
                CHECK(filtered.disparity.data()[i] == kInvalidDisparity);
                if (got.validity.data()[i]) ++removed;
            }
        }
        CHECK(removed > 0); // the occluded band near x < k cannot survive
    }
}

TEST_CASE("tiny sweep runs, resumes, and reproduces byte-identical outputs") {
    std::string out = scratch_dir("tiny_sweep");
    SweepConfig cfg = tiny_config(out);

    SweepRunResult first = run_sweep(cfg);
    CHECK(first.all_ok);
    REQUIRE(first.regions.size() == 7);
    CHECK(first.regions[0].region == "textureless");
    CHECK(first.manifest_path == out + "/manifest.json");

    const std::string cell = out + "/cells/L0.5_V0";
    CHECK(fs::exists(out + "/config.json"));
    CHECK(fs::exists(out + "/scenes/L0.5.json"));
    CHECK(fs::exists(cell + "/bundle/meta.json"));
    CHECK(fs::exists(cell + "/masks/provenance.json"));
    CHECK(fs::exists(cell + "/report_block.csv"));
    CHECK(fs::exists(out + "/sweep.csv"));
    CHECK(fs::exists(out + "/methods.csv"));
    CHECK(fs::exists(out + "/manifest.json"));

    for (const CellStatus& s : first.cells) {
        CHECK(s.ok);
        CHECK(!s.skipped);
    }

    std::vector<SweepRecord> records = collect_records(cfg);
    REQUIRE(records.size() == 1);
    CHECK(records[0].method == "block");
    CHECK(records[0].level == 0.5f);
    SweepResult agg = aggregate_sweep(records, "full");
    const RegionMetrics& full = records[0].report.region("full");
    CHECK(agg.cell(0, 0).epe_present == full.epe_present);
    if (full.epe_present) CHECK(agg.cell(0, 0).epe == full.epe_px);

    const std::string sweep_bytes = file_text(out + "/sweep.csv");
    const std::string methods_bytes = file_text(out + "/methods.csv");
    const std::string manifest_bytes = file_text(out + "/manifest.json");
    const std::string report_bytes = file_text(cell + "/report_block.csv");

    SUBCASE("a second run skips every cell and rewrites identical bytes") {
        SweepRunResult second = run_sweep(cfg);
        CHECK(second.all_ok);
        for (const CellStatus& s : second.cells) CHECK(s.skipped);
        CHECK(file_text(out + "/sweep.csv") == sweep_bytes);
        CHECK(file_text(out + "/methods.csv") == methods_bytes);
        CHECK(file_text(out + "/manifest.json") == manifest_bytes);
    }
    SUBCASE("a deleted report is recomputed to the same bytes") {
        fs::remove(cell + "/report_block.csv");
        CHECK(code_of([&] { collect_records(cfg); }) == Errc::IncompleteGrid);
        SweepRunResult resumed = run_sweep(cfg);
        CHECK(resumed.all_ok);
        bool matched_cell_recomputed = false;
        for (const CellStatus& s : resumed.cells)
            if (s.matcher == "block" && !s.skipped) matched_cell_recomputed = true;
        CHECK(matched_cell_recomputed);
        CHECK(file_text(cell + "/report_block.csv") == report_bytes);
        CHECK(file_text(out + "/sweep.csv") == sweep_bytes);
        CHECK(file_text(out + "/manifest.json") == manifest_bytes);
    }
    SUBCASE("a different config may not reuse the directory") {
        SweepConfig other = cfg;
        other.tau = 1.f;
        CHECK(code_of([&] { run_sweep(other); }) == Errc::InvalidConfig);
    }
}

TEST_CASE("external dataset evaluation") {
    std::string root = scratch_dir("external_eval");
    const int w = 8, h = 6;

    // sceneA: constant gt, half-frame occlusion mask, red + green annotations
    {
        const std::string dir = root + "/sceneA";
        fs::create_directories(dir + "/estimates");
        write_pfm_file(dir + "/gt.pfm", constant_map(w, h, 4.f));

        ImageU8 ann(w, h, 3); // black background
        ann.fill(0);
        for (int y = 0; y < 2; ++y) {
            ann.at(0, y, 0) = 255; // red: specular
            ann.at(1, y, 1) = 255; // green: textureless
        }
        ann.at(6, 0, 0) = 255; // red in the occluded half, must not count
        write_png8_file(dir + "/annotation.png", ann);

        Mask nonocc(w, h, 1);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) nonocc.at(x, y) = x < 4 ? 1 : 0;
        write_mask_file(dir + "/nonoccluded.png", nonocc);

        write_pfm_file(dir + "/estimates/perfect.pfm", constant_map(w, h, 4.f));
        write_pfm_file(dir + "/estimates/off2.pfm", constant_map(w, h, 6.f));
    }
    // sceneB: no annotation -> skipped with a note
    {
        const std::string dir = root + "/sceneB";
        fs::create_directories(dir + "/estimates");
        write_pfm_file(dir + "/gt.pfm", constant_map(w, h, 3.f));
        write_pfm_file(dir + "/estimates/perfect.pfm", constant_map(w, h, 3.f));
    }
    // sceneC: nothing in it -> skipped with a note
    fs::create_directories(root + "/sceneC");

    ExternalEvalResult res = run_external_eval(root);

    bool noted_b = false, noted_c = false;
    for (const ExternalSceneNote& n : res.notes) {
        if (n.scene == "sceneB" && n.note.find("annotation") != std::string::npos) noted_b = true;
        if (n.scene == "sceneC" && n.note.find("gt") != std::string::npos) noted_c = true;
    }
    CHECK(noted_b);
    CHECK(noted_c);

    // 2 methods x 3 regions, sceneA only
    REQUIRE(res.scene_rows.size() == 6);
    auto row_for = [&](const std::string& method, const std::string& region) -> const ExternalRow& {
        for (const ExternalRow& r : res.scene_rows)
            if (r.method == method && r.region == region) return r;
        REQUIRE(false);
        return res.scene_rows[0];
    };
    const ExternalRow& pf = row_for("perfect", "full");
    CHECK(pf.pixel_count == size_t(4 * h)); // non-occluded half
    CHECK(pf.epe_present);
    CHECK(pf.epe == 0.f);
    CHECK(pf.badpix == 0.f);
    const ExternalRow& of = row_for("off2", "full");
    CHECK(of.epe == 2.0f);
    CHECK(of.badpix == 0.f); // error 2 is under tau 3
    const ExternalRow& spec_row = row_for("off2", "specular");
    CHECK(spec_row.pixel_count == 2); // the occluded red pixel dropped out
    const ExternalRow& tex_row = row_for("off2", "textureless");
    CHECK(tex_row.pixel_count == 2);
    CHECK(tex_row.epe == 2.0f);

    // summary over the single contributing scene equals that scene's rows
    for (const ExternalRow& r : res.summary_rows) {
        CHECK(r.scene.empty());
        const ExternalRow& direct = row_for(r.method, r.region);
        CHECK(r.pixel_count == direct.pixel_count);
        if (direct.epe_present) CHECK(r.epe == direct.epe);
    }

    std::string csv = external_rows_csv(res.scene_rows, true);
    CsvTable table = parse_csv(csv);
    CHECK(table.rows.size() == res.scene_rows.size());
    CHECK(table.column("scene") >= 0);
    CHECK(table.column("epe") >= 0);

    SUBCASE("tau applies to external badpix too") {
        ExternalEvalParams strict;
        strict.tau = 1.f;
        ExternalEvalResult res2 = run_external_eval(root, strict);
        for (const ExternalRow& r : res2.scene_rows)
            if (r.method == "off2" && r.region == "full") CHECK(r.badpix == 100.f);
    }
}

TEST_CASE("correlate_tables") {
    auto make_table = [](const std::vector<std::pair<std::string, double>>& rows,
                         const std::string& metric_col) {
        CsvWriter csv({"method", "region", metric_col});
        for (const auto& [m, v] : rows) csv.add_row({m, "full", format_float(v)});
        return parse_csv(csv.str());
    };
    CsvTable a = make_table({{"m1", 1.0}, {"m2", 2.0}, {"m3", 3.0}}, "epe");
    SUBCASE("identity and affine images correlate perfectly") {
        CHECK(correlate_tables(a, a, "full", "epe") == doctest::Approx(1.0).epsilon(1e-12));
        CsvTable doubled = make_table({{"m1", 7.0}, {"m2", 9.0}, {"m3", 11.0}}, "epe");
        CHECK(correlate_tables(a, doubled, "full", "epe") == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("closed-form three-method value") {
        CsvTable b = make_table({{"m1", 1.0}, {"m2", 2.0}, {"m3", 4.0}}, "epe");
        CHECK(correlate_tables(a, b, "full", "epe") ==
              doctest::Approx(0.9819805060619657).epsilon(1e-12));
    }
    SUBCASE("metric column accepts the _mean alias") {
        CsvTable b = make_table({{"m1", 2.0}, {"m2", 4.0}, {"m3", 6.0}}, "epe_mean");
        CHECK(correlate_tables(a, b, "full", "epe") == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("unshared methods are ignored, too few shared is degenerate") {
        CsvTable b = make_table({{"m1", 5.0}, {"m2", 1.0}, {"m9", 8.0}}, "epe");
        CHECK_NOTHROW(correlate_tables(a, b, "full", "epe")); // m1, m2 shared
        CsvTable c = make_table({{"m1", 5.0}, {"m9", 8.0}}, "epe");
        try {
            correlate_tables(a, c, "full", "epe");
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.code() == Errc::DegenerateInput);
        }
    }
    SUBCASE("missing metric column is a parse error") {
        CsvTable b = make_table({{"m1", 5.0}, {"m2", 8.0}}, "rmse");
        try {
            correlate_tables(a, b, "full", "epe");
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.code() == Errc::ParseError);
        }
    }
}

TEST_CASE("sweep curves render to svg") {
    std::vector<SweepRecord> recs;
    auto rep = [&](float e, float b) {
        EvalReport r;
        r.method = "x";
        RegionMetrics m;
        m.region = "full";
        m.pixel_count = 5;
        m.epe_count = 5;
        m.epe_present = true;
        m.badpix_present = true;
        m.epe_px = e;
        m.badpix_pct = b;
        r.regions.push_back(m);
        return r;
    };
    for (float level : {0.f, 0.5f, 1.f}) {
        SweepRecord r;
        r.method = "block";
        r.level = level;
        r.viewpoint = 0;
        r.report = rep(level + 1.f, 10.f * level);
        recs.push_back(r);
    }
    SweepResult s = aggregate_sweep(recs, "full");
    std::string svg = sweep_curves_svg(s, "epe");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK(svg.find("block") != std::string::npos);
    try {
        sweep_curves_svg(s, "rmse");
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InvalidConfig);
    }
}
