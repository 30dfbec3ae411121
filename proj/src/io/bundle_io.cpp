#include "hazstereo/io/bundle_io.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "hazstereo/core/color.hpp"
#include "hazstereo/io/pfm.hpp"
#include "hazstereo/io/png_io.hpp"
#include "hazstereo/scene/scene_json.hpp"

namespace hazstereo {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kBundleFormat = "hazstereo-bundle-v1";
constexpr const char* kMasksFormat = "hazstereo-masks-v1";
constexpr const char* kEstimateFormat = "hazstereo-estimate-v1";

void save_json(const json& j, const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) raise(Errc::IoError, "cannot open " + path + " for writing");
    f << j.dump(2) << '\n';
    if (!f) raise(Errc::IoError, "write failed: " + path);
}

json load_json(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) raise(Errc::IoError, "cannot open " + path);
    json j = json::parse(f, nullptr, false);
    if (j.is_discarded()) raise(Errc::ParseError, "invalid json: " + path);
    return j;
}

void save_view(const CameraView& v, const std::string& dir, const std::string& side) {
    write_png8_file(dir + "/" + side + ".png", v.display);
    write_pfm_file(dir + "/" + side + "_depth.pfm", v.depth);
    write_pfm_file(dir + "/" + side + "_disp.pfm", v.disparity);
    write_png16_file(dir + "/" + side + "_instance.png", v.instance);
    write_png16_file(dir + "/" + side + "_flags.png", v.flags);
    write_mask_file(dir + "/" + side + "_budget.png", v.budget_exceeded);
}

CameraView load_view(const std::string& dir, const std::string& side, float gamma) {
    CameraView v;
    v.display = read_png8_file(dir + "/" + side + ".png");
    if (v.display.channels() != 3)
        raise(Errc::ParseError, "bundle " + side + ".png must be rgb");
    v.depth = read_pfm_file(dir + "/" + side + "_depth.pfm");
    v.disparity = read_pfm_file(dir + "/" + side + "_disp.pfm");
    v.instance = read_png16_file(dir + "/" + side + "_instance.png");
    v.flags = read_png16_file(dir + "/" + side + "_flags.png");
    v.budget_exceeded = read_mask_file(dir + "/" + side + "_budget.png");
    v.budget_exceeded_count = static_cast<int>(count_nonzero(v.budget_exceeded));
    // linear rgb is not persisted; undo the display encode
    v.rgb = ImageF(v.display.width(), v.display.height(), 3);
    for (size_t i = 0; i < v.display.size(); ++i) {
        const float e = static_cast<float>(v.display.data()[i]) / 255.f;
        v.rgb.data()[i] = std::pow(e, gamma);
    }
    require_same_shape(v.depth, v.disparity, "bundle depth vs disparity");
    require_same_shape(v.depth, v.instance, "bundle depth vs instance");
    require_same_shape(v.depth, v.flags, "bundle depth vs flags");
    return v;
}

} // namespace

void save_bundle(const FrameBundle& bundle, const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) raise(Errc::IoError, "cannot create " + dir + ": " + ec.message());

    save_view(bundle.left, dir, "left");
    save_view(bundle.right, dir, "right");

    json meta{{"format", kBundleFormat},
              {"rig", rig_to_json(bundle.rig)},
              {"pose", pose_to_json(bundle.pose)},
              {"seed", bundle.seed},
              {"gamma", 2.2},
              {"budget_exceeded", json{{"left", bundle.left.budget_exceeded_count},
                                       {"right", bundle.right.budget_exceeded_count}}}};
    if (bundle.case_info.is_case) meta["case"] = case_to_json(bundle.case_info);
    save_json(meta, dir + "/meta.json");
}

FrameBundle load_bundle(const std::string& dir) {
    const json meta = load_json(dir + "/meta.json");
    if (meta.value("format", "") != kBundleFormat)
        raise(Errc::ParseError, "unrecognized bundle format in " + dir);
    FrameBundle b;
    b.rig = rig_from_json(meta.at("rig"));
    b.pose = pose_from_json(meta.at("pose"));
    b.seed = meta.value("seed", uint64_t{0});
    const float gamma = meta.value("gamma", 2.2f);
    if (meta.contains("case")) b.case_info = case_from_json(meta.at("case"));
    b.left = load_view(dir, "left", gamma);
    b.right = load_view(dir, "right", gamma);
    require_same_shape(b.left.depth, b.right.depth, "bundle left vs right");
    return b;
}

void save_masks(const HazardMasks& masks, const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) raise(Errc::IoError, "cannot create " + dir + ": " + ec.message());

    write_mask_file(dir + "/specular.png", masks.specular);
    write_mask_file(dir + "/transparent.png", masks.transparent);
    write_mask_file(dir + "/textureless.png", masks.textureless);
    write_mask_file(dir + "/disparity_jump.png", masks.disparity_jump);
    write_mask_file(dir + "/boundary.png", masks.boundary);
    write_mask_file(dir + "/nonoccluded.png", masks.nonoccluded);

    const MaskParams& p = masks.params;
    save_json(json{{"format", kMasksFormat},
                   {"window", p.window},
                   {"grad_thresh", p.grad_thresh},
                   {"jump_thresh", p.jump_thresh},
                   {"radius", p.radius},
                   {"occlusion_tol", p.occlusion_tol},
                   {"textureless_source", "display"}},
              dir + "/provenance.json");
}

HazardMasks load_masks(const std::string& dir) {
    const json j = load_json(dir + "/provenance.json");
    if (j.value("format", "") != kMasksFormat)
        raise(Errc::ParseError, "unrecognized masks format in " + dir);
    HazardMasks m;
    m.params.window = j.at("window").get<int>();
    m.params.grad_thresh = j.at("grad_thresh").get<float>();
    m.params.jump_thresh = j.at("jump_thresh").get<float>();
    m.params.radius = j.at("radius").get<int>();
    m.params.occlusion_tol = j.at("occlusion_tol").get<float>();
    m.specular = read_mask_file(dir + "/specular.png");
    m.transparent = read_mask_file(dir + "/transparent.png");
    m.textureless = read_mask_file(dir + "/textureless.png");
    m.disparity_jump = read_mask_file(dir + "/disparity_jump.png");
    m.boundary = read_mask_file(dir + "/boundary.png");
    m.nonoccluded = read_mask_file(dir + "/nonoccluded.png");
    return m;
}

void save_estimate(const DisparityEstimate& est, const std::string& prefix) {
    const fs::path parent = fs::path(prefix).parent_path();
    if (!parent.empty()) {
        std::error_code ec;
        fs::create_directories(parent, ec);
        if (ec) raise(Errc::IoError, "cannot create " + parent.string() + ": " + ec.message());
    }
    write_pfm_file(prefix + ".pfm", est.disparity);
    write_mask_file(prefix + "_valid.png", est.validity);
    save_json(json{{"format", kEstimateFormat}, {"method", est.method}}, prefix + ".json");
}

DisparityEstimate load_estimate(const std::string& prefix) {
    DisparityEstimate est;
    est.disparity = read_pfm_file(prefix + ".pfm");
    est.validity = read_mask_file(prefix + "_valid.png");
    require_same_shape(est.disparity, est.validity, "estimate disparity vs validity");
    const json j = load_json(prefix + ".json");
    if (j.value("format", "") != kEstimateFormat)
        raise(Errc::ParseError, "unrecognized estimate format at " + prefix);
    est.method = j.value("method", "unknown");
    return est;
}

} // namespace hazstereo
