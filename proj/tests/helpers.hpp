#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "hazstereo/core/image.hpp"
#include "hazstereo/eval/metrics.hpp"
#include "hazstereo/hazard/masks.hpp"
#include "hazstereo/match/matchers.hpp"
#include "hazstereo/render/renderer.hpp"
#include "hazstereo/scene/scene.hpp"
#include "hazstereo/scene/texture.hpp"

namespace testutil {

using namespace hazstereo;

// Fresh scratch directory under the system temp root; wiped on entry so
// reruns start clean.
inline std::string scratch_dir(const std::string& name) {
    namespace fs = std::filesystem;
    fs::path p = fs::temp_directory_path() / "hazstereo_tests" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p.string();
}

// Single-channel noise image with enough texture for census matching.
inline ImageU8 textured_gray(int w, int h, uint32_t seed, float freq = 0.15f) {
    ImageU8 img(w, h, 1);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            float v = fbm_noise(x * freq, y * freq, 3, seed);
            int u = static_cast<int>(std::lround(v * 255.f));
            img.at(x, y) = static_cast<uint8_t>(u < 0 ? 0 : (u > 255 ? 255 : u));
        }
    return img;
}

// Stereo pair where every left pixel's true disparity is exactly k:
// right(x) = left(x + k), both cropped from one wider noise image.
inline std::pair<ImageU8, ImageU8> shifted_pair(int w, int h, int k, uint32_t seed) {
    ImageU8 base = textured_gray(w + k, h, seed);
    ImageU8 left(w, h, 1), right(w, h, 1);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            left.at(x, y) = base.at(x, y);
            right.at(x, y) = base.at(x + k, y);
        }
    // left(x) = base(x) appears in right at base-index x, i.e. right column
    // x - k, so ground truth is k everywhere (occluded for x < k).
    return {left, right};
}

inline ImageF constant_map(int w, int h, float v) {
    ImageF m(w, h, 1);
    m.fill(v);
    return m;
}

inline Mask full_mask(int w, int h, uint8_t v = 1) {
    Mask m(w, h, 1);
    m.fill(v);
    return m;
}

inline DisparityEstimate make_estimate(const ImageF& disp, const Mask& validity,
                                       const std::string& method = "test") {
    DisparityEstimate est;
    est.disparity = disp;
    est.validity = validity;
    est.method = method;
    for (int y = 0; y < disp.height(); ++y)
        for (int x = 0; x < disp.width(); ++x)
            if (!est.validity.at(x, y)) est.disparity.at(x, y) = kInvalidDisparity;
    return est;
}

// Room with a single textured fronto-parallel plane at depth z, normal
// facing the camera at the origin looking down +z.
inline SceneGraph plane_scene(float z, float half_w = 8.f, float half_h = 8.f,
                              TextureKind tex = TextureKind::ValueNoise, float tex_scale = 3.f) {
    SceneGraph scene;
    Primitive wall;
    wall.shape = Shape::Plane;
    wall.pose.rot = Mat3::identity();      // local +z = world +z; camera sees the back face
    wall.pose.pos = {0.f, 0.f, z};
    wall.extent = {half_w, half_h, 1.f};
    wall.material.albedo.kind = tex;
    wall.material.albedo.scale = tex_scale;
    wall.material.roughness = 0.9f;
    wall.instance_id = 1;
    scene.primitives.push_back(wall);

    Light key;
    key.directional = true;
    key.direction = normalize(Vec3{0.3f, -0.5f, 0.8f});
    key.intensity = 1.0f;
    scene.lights.push_back(key);
    scene.ambient = 0.25f;
    return scene;
}

inline CameraPose origin_pose() {
    CameraPose p;
    p.rot = Mat3::identity();
    p.pos = {0.f, 0.f, 0.f};
    return p;
}

// ---- brute-force evaluation oracles (independent re-derivations) ----

inline bool oracle_gt_valid(float g) { return std::isfinite(g) && g >= 0.f; }

struct OracleRegion {
    size_t pixel_count = 0;
    size_t epe_count = 0;
    bool epe_present = false;
    bool badpix_present = false;
    double epe_px = 0.0;
    double badpix_pct = 0.0;
};

// Recomputes one region of region_report from raw arrays: base is the
// instance/gt-valid region intersected with optional nonoccluded and hazard
// masks; EPE excludes invalid estimates, BadPix follows the policy.
inline OracleRegion oracle_region(const DisparityEstimate& est, const ImageF& gt,
                                  const Image<uint16_t>& instance, const Mask* nonocc,
                                  const Mask* hazard, float tau, InvalidPolicy policy) {
    OracleRegion out;
    double err_sum = 0.0;
    size_t bad = 0, evaluated = 0;
    for (int y = 0; y < gt.height(); ++y)
        for (int x = 0; x < gt.width(); ++x) {
            if (instance.at(x, y) == 0 || !oracle_gt_valid(gt.at(x, y))) continue;
            if (nonocc && !nonocc->at(x, y)) continue;
            if (hazard && !hazard->at(x, y)) continue;
            ++out.pixel_count;
            const bool valid = est.validity.at(x, y) != 0;
            if (valid) {
                double err = std::fabs(double(est.disparity.at(x, y)) - double(gt.at(x, y)));
                err_sum += err;
                ++out.epe_count;
                ++evaluated;
                if (err > tau) ++bad;
            } else if (policy == InvalidPolicy::CountAsBad) {
                ++evaluated;
                ++bad;
            }
        }
    if (out.epe_count > 0) {
        out.epe_present = true;
        out.epe_px = err_sum / double(out.epe_count);
    }
    if (evaluated > 0) {
        out.badpix_present = true;
        out.badpix_pct = 100.0 * double(bad) / double(evaluated);
    }
    return out;
}

// Random DisparityEstimate / gt / masks triple used by the oracle-equality
// properties. Some estimate pixels invalid, some gt pixels non-finite or
// negative, some instances background.
struct RandomTriple {
    DisparityEstimate est;
    ImageF gt;
    Image<uint16_t> instance;
    HazardMasks masks;
    FrameBundle bundle;
};

inline RandomTriple random_triple(int w, int h, std::mt19937& rng) {
    std::uniform_real_distribution<float> disp(0.f, 20.f);
    std::uniform_real_distribution<float> u01(0.f, 1.f);
    RandomTriple t;
    t.gt = ImageF(w, h, 1);
    t.instance = Image<uint16_t>(w, h, 1);
    ImageF est_map(w, h, 1);
    Mask validity(w, h, 1);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            float r = u01(rng);
            if (r < 0.05f)
                t.gt.at(x, y) = std::numeric_limits<float>::infinity();
            else if (r < 0.10f)
                t.gt.at(x, y) = -2.f;
            else
                t.gt.at(x, y) = disp(rng);
            t.instance.at(x, y) = u01(rng) < 0.15f ? 0 : uint16_t(1 + int(u01(rng) * 3));
            est_map.at(x, y) = disp(rng);
            validity.at(x, y) = u01(rng) < 0.2f ? 0 : 1;
        }
    t.est = make_estimate(est_map, validity, "random");

    auto rmask = [&](float p) {
        Mask m(w, h, 1);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) m.at(x, y) = u01(rng) < p ? 1 : 0;
        return m;
    };
    t.masks.specular = rmask(0.3f);
    t.masks.transparent = rmask(0.3f);
    t.masks.textureless = rmask(0.4f);
    t.masks.disparity_jump = rmask(0.25f);
    t.masks.boundary = rmask(0.25f);
    t.masks.nonoccluded = rmask(0.8f);

    t.bundle.left.disparity = t.gt;
    t.bundle.left.instance = t.instance;
    t.bundle.left.rgb = ImageF(w, h, 3);
    t.bundle.left.depth = ImageF(w, h, 1);
    t.bundle.left.flags = Image<uint16_t>(w, h, 1);
    return t;
}

// Compares a full region_report against the oracle, exactly (same float
// arithmetic is not assumed; the tolerance is zero because both sides reduce
// in double and the counts are integers).
inline bool report_matches_oracle(const EvalReport& rep, const RandomTriple& t, float tau,
                                  InvalidPolicy policy, std::string* why = nullptr) {
    struct Row {
        const char* name;
        const Mask* nonocc;
        const Mask* hazard;
    };
    const Row rows[] = {
        {"full", nullptr, nullptr},
        {"nonoccluded", &t.masks.nonoccluded, nullptr},
        {"specular", &t.masks.nonoccluded, &t.masks.specular},
        {"textureless", &t.masks.nonoccluded, &t.masks.textureless},
        {"transparent", &t.masks.nonoccluded, &t.masks.transparent},
        {"disparity_jump", &t.masks.nonoccluded, &t.masks.disparity_jump},
        {"boundary", &t.masks.nonoccluded, &t.masks.boundary},
    };
    if (rep.regions.size() != 7) {
        if (why) *why = "region count";
        return false;
    }
    for (size_t i = 0; i < 7; ++i) {
        const RegionMetrics& m = rep.regions[i];
        if (m.region != rows[i].name) {
            if (why) *why = "region order";
            return false;
        }
        OracleRegion o =
            oracle_region(t.est, t.gt, t.instance, rows[i].nonocc, rows[i].hazard, tau, policy);
        if (m.pixel_count != o.pixel_count || m.epe_count != o.epe_count ||
            m.epe_present != o.epe_present || m.badpix_present != o.badpix_present) {
            if (why) *why = std::string(rows[i].name) + " counts/presence";
            return false;
        }
        if (m.epe_present && m.epe_px != float(o.epe_px)) {
            if (why) *why = std::string(rows[i].name) + " epe";
            return false;
        }
        if (m.badpix_present && m.badpix_pct != float(o.badpix_pct)) {
            if (why) *why = std::string(rows[i].name) + " badpix";
            return false;
        }
    }
    return true;
}

} // namespace testutil
