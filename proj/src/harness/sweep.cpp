#include "hazstereo/harness/sweep.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "hazstereo/core/error.hpp"
#include "hazstereo/io/bundle_io.hpp"
#include "hazstereo/io/csv.hpp"
#include "hazstereo/io/pfm.hpp"
#include "hazstereo/scene/cases.hpp"
#include "hazstereo/scene/scene_json.hpp"

namespace hazstereo {

namespace fs = std::filesystem;
using nlohmann::json;

const char* factor_region_name(HazardFactor factor) {
    switch (factor) {
        case HazardFactor::Specularity: return "specular";
        case HazardFactor::Texturelessness: return "textureless";
        case HazardFactor::Transparency: return "transparent";
        case HazardFactor::DisparityJumps: return "disparity_jump";
    }
    raise(Errc::InvalidConfig, "unknown hazard factor");
}

uint64_t fnv1a64(const std::string& bytes) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string fnv1a64_hex(const std::string& bytes) {
    char buf[17];
    snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

namespace {

std::string level_tag(float level) { return format_float(level); }

std::string cell_dir(const SweepConfig& cfg, float level, int viewpoint) {
    return cfg.out_dir + "/cells/L" + level_tag(level) + "_V" + std::to_string(viewpoint);
}

ImageU8 flip_horizontal(const ImageU8& img) {
    ImageU8 out(img.width(), img.height(), img.channels());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            for (int c = 0; c < img.channels(); ++c)
                out.at(x, y, c) = img.at(img.width() - 1 - x, y, c);
    return out;
}

DisparityEstimate flip_horizontal(const DisparityEstimate& est) {
    DisparityEstimate out;
    out.method = est.method;
    out.disparity = ImageF(est.disparity.width(), est.disparity.height(), 1);
    out.validity = Mask(est.validity.width(), est.validity.height(), 1);
    const int w = est.disparity.width();
    for (int y = 0; y < est.disparity.height(); ++y)
        for (int x = 0; x < w; ++x) {
            out.disparity.at(x, y) = est.disparity.at(w - 1 - x, y);
            out.validity.at(x, y) = est.validity.at(w - 1 - x, y);
        }
    return out;
}

DisparityEstimate run_matcher_one(const MatcherSpec& m, const ImageU8& left, const ImageU8& right) {
    CostVolume vol = build_cost_volume(left, right, m.d_max, m.kind, m.census_window);
    return m.algo == MatcherAlgo::Block ? block_match(vol, m.agg_window) : sgm(vol, m.energy);
}

std::string read_text_file(const std::string& path) {
    const std::vector<uint8_t> bytes = read_file_bytes(path);
    return std::string(bytes.begin(), bytes.end());
}

// Canonical dump so semantically equal configs compare equal bytewise.
std::string canonical_config(const SweepConfig& cfg) { return sweep_config_to_json(cfg).dump(2) + "\n"; }

void check_out_dir(const SweepConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    const std::string path = cfg.out_dir + "/config.json";
    const std::string canon = canonical_config(cfg);
    if (fs::exists(path)) {
        json existing;
        try {
            existing = json::parse(read_text_file(path));
        } catch (const json::exception&) {
            raise(Errc::InvalidConfig, "unreadable config.json already in " + cfg.out_dir);
        }
        if (existing.dump(2) + "\n" != canon)
            raise(Errc::InvalidConfig, "output directory holds a different config: " + cfg.out_dir);
    } else {
        save_text(path, canon);
    }
}

struct CellPaths {
    std::string dir;
    std::string bundle_dir;
    std::string masks_dir;
    std::string est_prefix(const std::string& name) const { return dir + "/est/" + name; }
    std::string report(const std::string& name) const { return dir + "/report_" + name + ".csv"; }
};

CellPaths cell_paths(const SweepConfig& cfg, float level, int viewpoint) {
    CellPaths p;
    p.dir = cell_dir(cfg, level, viewpoint);
    p.bundle_dir = p.dir + "/bundle";
    p.masks_dir = p.dir + "/masks";
    return p;
}

bool bundle_done(const CellPaths& p) { return fs::exists(p.bundle_dir + "/meta.json"); }
bool masks_done(const CellPaths& p) { return fs::exists(p.masks_dir + "/provenance.json"); }

json status_json(const CellStatus& s) {
    json j{{"level", format_float(s.level)},
           {"viewpoint", s.viewpoint},
           {"stage", s.matcher.empty() ? "frame" : "match"},
           {"status", s.ok ? "ok" : "failed"}};
    if (!s.matcher.empty()) j["matcher"] = s.matcher;
    if (!s.error.empty()) j["error"] = s.error;
    return j;
}

json hash_artifacts(const std::string& out_dir) {
    std::vector<std::string> paths;
    for (const auto& entry : fs::recursive_directory_iterator(out_dir)) {
        if (!entry.is_regular_file()) continue;
        std::string rel = fs::relative(entry.path(), out_dir).generic_string();
        if (rel == "manifest.json") continue;
        paths.push_back(std::move(rel));
    }
    std::sort(paths.begin(), paths.end());
    json arr = json::array();
    for (const std::string& rel : paths) {
        const std::string bytes = read_text_file(out_dir + "/" + rel);
        arr.push_back(json{{"path", rel}, {"fnv1a64", fnv1a64_hex(bytes)}});
    }
    return arr;
}

} // namespace

DisparityEstimate run_matcher(const MatcherSpec& spec, const FrameBundle& bundle) {
    DisparityEstimate est = run_matcher_one(spec, bundle.left.display, bundle.right.display);
    if (spec.lr_check) {
        // right-reference pass via mirrored images: after flipping both views
        // horizontally the right image becomes a conventional left reference.
        DisparityEstimate right_est = flip_horizontal(run_matcher_one(
            spec, flip_horizontal(bundle.right.display), flip_horizontal(bundle.left.display)));
        est = lr_consistency(est, right_est, spec.lr_tol);
    }
    if (!spec.name.empty()) est.method = spec.name;
    return est;
}

std::vector<SweepRecord> collect_records(const SweepConfig& cfg) {
    std::vector<SweepRecord> records;
    for (float level : cfg.levels)
        for (int vp = 0; vp < cfg.viewpoints; ++vp) {
            const CellPaths paths = cell_paths(cfg, level, vp);
            for (const MatcherSpec& m : cfg.matchers) {
                const std::string path = paths.report(m.name);
                if (!fs::exists(path))
                    raise(Errc::IncompleteGrid, "missing cell report " + path);
                SweepRecord rec;
                rec.method = m.name;
                rec.level = level;
                rec.viewpoint = vp;
                rec.report = report_from_csv(read_csv_file(path));
                records.push_back(std::move(rec));
            }
        }
    return records;
}

SweepRunResult run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    check_out_dir(cfg);

    SweepRunResult result;
    result.manifest_path = cfg.out_dir + "/manifest.json";

    const SceneGraph base = build_case(cfg.factor, cfg.seed);
    const std::vector<CameraPose> poses = viewpoint_ring(base, cfg.viewpoints, cfg.seed);

    RenderSettings settings = cfg.render;
    settings.seed = cfg.seed;

    for (float level : cfg.levels) {
        SceneGraph scene = cfg.factor == HazardFactor::DisparityJumps
                               ? base
                               : set_hazard_level(base, cfg.factor, level);
        const std::string scene_path = cfg.out_dir + "/scenes/L" + level_tag(level) + ".json";
        fs::create_directories(cfg.out_dir + "/scenes");
        if (!fs::exists(scene_path)) save_scene(scene, scene_path);

        for (int vp = 0; vp < cfg.viewpoints; ++vp) {
            const CellPaths paths = cell_paths(cfg, level, vp);

            std::vector<const MatcherSpec*> pending;
            for (const MatcherSpec& m : cfg.matchers)
                if (!fs::exists(paths.report(m.name))) pending.push_back(&m);

            CellStatus frame{level, vp, "", true, false, ""};
            FrameBundle bundle;
            HazardMasks masks;
            bool frame_ready = false;

            const bool nothing_to_do = pending.empty() && bundle_done(paths) && masks_done(paths);
            if (nothing_to_do) {
                frame.skipped = true;
                result.cells.push_back(frame);
                for (const MatcherSpec& m : cfg.matchers)
                    result.cells.push_back({level, vp, m.name, true, true, ""});
                continue;
            }

            try {
                if (bundle_done(paths)) {
                    bundle = load_bundle(paths.bundle_dir);
                } else {
                    bundle = render_stereo(scene, cfg.rig, poses[vp], settings);
                    save_bundle(bundle, paths.bundle_dir);
                }
                if (masks_done(paths)) {
                    masks = load_masks(paths.masks_dir);
                } else {
                    masks = derive_all(bundle, cfg.mask_params);
                    save_masks(masks, paths.masks_dir);
                }
                frame_ready = true;
            } catch (const std::exception& e) {
                frame.ok = false;
                frame.error = e.what();
                result.all_ok = false;
            }
            result.cells.push_back(frame);

            for (const MatcherSpec& m : cfg.matchers) {
                const bool have_report = fs::exists(paths.report(m.name));
                CellStatus st{level, vp, m.name, true, false, ""};
                if (have_report) {
                    st.skipped = true;
                } else if (!frame_ready) {
                    st.ok = false;
                    st.error = "frame stage failed";
                    result.all_ok = false;
                } else {
                    try {
                        DisparityEstimate est = run_matcher(m, bundle);
                        save_estimate(est, paths.est_prefix(m.name));
                        const EvalReport report =
                            region_report(est, bundle, masks, cfg.tau, cfg.badpix_policy);
                        save_text(paths.report(m.name), report_to_csv(report));
                    } catch (const std::exception& e) {
                        st.ok = false;
                        st.error = e.what();
                        result.all_ok = false;
                    }
                }
                result.cells.push_back(st);
            }
        }
    }

    static const char* kRegions[] = {"full",        "nonoccluded",    "specular", "textureless",
                                     "transparent", "disparity_jump", "boundary"};
    json aggregate{{"status", "ok"}};
    try {
        const std::vector<SweepRecord> records = collect_records(cfg);
        const std::string own_region = factor_region_name(cfg.factor);
        result.regions.push_back(aggregate_sweep(records, own_region));
        for (const char* region : kRegions)
            if (region != own_region) result.regions.push_back(aggregate_sweep(records, region));

        std::string combined;
        for (size_t i = 0; i < result.regions.size(); ++i) {
            std::string csv = sweep_to_csv(result.regions[i], hazard_factor_name(cfg.factor));
            if (i > 0) csv.erase(0, csv.find('\n') + 1); // drop repeated header
            combined += csv;
        }
        save_text(cfg.out_dir + "/sweep.csv", combined);
        save_text(cfg.out_dir + "/methods.csv", sweep_methods_csv(result.regions));

        if (cfg.emit_svg) {
            save_text(cfg.out_dir + "/curves_epe.svg",
                            sweep_curves_svg(result.regions[0], "epe"));
            save_text(cfg.out_dir + "/curves_badpix.svg",
                            sweep_curves_svg(result.regions[0], "badpix"));
        }
    } catch (const std::exception& e) {
        aggregate["status"] = "failed";
        aggregate["error"] = e.what();
        result.all_ok = false;
    }

    json manifest{{"format", "hazstereo-sweep-manifest-v1"},
                  {"config", sweep_config_to_json(cfg)},
                  {"aggregate", aggregate}};
    json cells = json::array();
    for (const CellStatus& s : result.cells) cells.push_back(status_json(s));
    manifest["cells"] = cells;
    manifest["artifacts"] = hash_artifacts(cfg.out_dir);
    std::string lines;
    for (const json& a : manifest["artifacts"])
        lines += a.at("path").get<std::string>() + ":" + a.at("fnv1a64").get<std::string>() + "\n";
    manifest["run_hash"] = fnv1a64_hex(lines);
    save_text(result.manifest_path, manifest.dump(2) + "\n");

    return result;
}

std::string sweep_curves_svg(const SweepResult& result, const std::string& metric) {
    const bool use_epe = metric == "epe";
    if (!use_epe && metric != "badpix")
        raise(Errc::InvalidConfig, "svg metric must be epe or badpix");

    const int width = 640, height = 400;
    const int ml = 56, mr = 150, mt = 24, mb = 44;
    const float px0 = ml, px1 = width - mr, py0 = height - mb, py1 = mt;

    float lo = 0.f, hi = 0.f;
    bool any = false;
    for (const SweepCell& c : result.cells) {
        const bool present = use_epe ? c.epe_present : c.badpix_present;
        if (!present) continue;
        const float v = use_epe ? c.epe : c.badpix;
        hi = any ? std::max(hi, v) : v;
        any = true;
    }
    if (!any) hi = 1.f;
    if (hi <= lo) hi = lo + 1.f;

    const float lmin = result.levels.empty() ? 0.f : result.levels.front();
    const float lmax = result.levels.empty() ? 1.f : result.levels.back();
    const float lspan = lmax > lmin ? lmax - lmin : 1.f;

    auto sx = [&](float level) { return px0 + (level - lmin) / lspan * (px1 - px0); };
    auto sy = [&](float v) { return py0 + (v - lo) / (hi - lo) * (py1 - py0); };

    static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                     "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
         "\" height=\"" + std::to_string(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + format_float((px0 + px1) / 2) + "\" y=\"16\" text-anchor=\"middle\">" +
         result.region + " " + metric + " vs level</text>\n";
    s += "<line x1=\"" + format_float(px0) + "\" y1=\"" + format_float(py0) + "\" x2=\"" +
         format_float(px1) + "\" y2=\"" + format_float(py0) + "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + format_float(px0) + "\" y1=\"" + format_float(py0) + "\" x2=\"" +
         format_float(px0) + "\" y2=\"" + format_float(py1) + "\" stroke=\"black\"/>\n";
    for (float level : result.levels) {
        s += "<text x=\"" + format_float(sx(level)) + "\" y=\"" + format_float(py0 + 18) +
             "\" text-anchor=\"middle\">" + format_float(level) + "</text>\n";
    }
    for (int i = 0; i <= 4; ++i) {
        const float v = lo + (hi - lo) * i / 4.f;
        s += "<text x=\"" + format_float(px0 - 6) + "\" y=\"" + format_float(sy(v) + 4) +
             "\" text-anchor=\"end\">" + format_float(v) + "</text>\n";
    }

    for (size_t mi = 0; mi < result.methods.size(); ++mi) {
        const char* color = kPalette[mi % (sizeof kPalette / sizeof *kPalette)];
        std::string points;
        auto flush = [&]() {
            if (points.empty()) return;
            s += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\" points=\"" +
                 points + "\"/>\n";
            points.clear();
        };
        for (size_t li = 0; li < result.levels.size(); ++li) {
            const SweepCell& c = result.cell(mi, li);
            const bool present = use_epe ? c.epe_present : c.badpix_present;
            if (!present) {
                flush();
                continue;
            }
            const float v = use_epe ? c.epe : c.badpix;
            if (!points.empty()) points += " ";
            points += format_float(sx(result.levels[li])) + "," + format_float(sy(v));
            s += "<circle cx=\"" + format_float(sx(result.levels[li])) + "\" cy=\"" +
                 format_float(sy(v)) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
        }
        flush();
        const float ly = mt + 16.f * static_cast<float>(mi);
        s += "<line x1=\"" + format_float(px1 + 10) + "\" y1=\"" + format_float(ly) + "\" x2=\"" +
             format_float(px1 + 30) + "\" y2=\"" + format_float(ly) + "\" stroke=\"" + color +
             "\" stroke-width=\"2\"/>\n";
        s += "<text x=\"" + format_float(px1 + 36) + "\" y=\"" + format_float(ly + 4) + "\">" +
             result.methods[mi] + "</text>\n";
    }
    s += "</svg>\n";
    return s;
}

} // namespace hazstereo
