#include "hazstereo/scene/scene_json.hpp"

#include <fstream>

#include "hazstereo/core/error.hpp"

namespace hazstereo {

using nlohmann::json;

namespace {

json vec_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }
Vec3 vec_from_json(const json& j) {
    return {j.at(0).get<float>(), j.at(1).get<float>(), j.at(2).get<float>()};
}

json mat_to_json(const Mat3& m) {
    json rows = json::array();
    for (int r = 0; r < 3; ++r) rows.push_back(json::array({m.m[r][0], m.m[r][1], m.m[r][2]}));
    return rows;
}
Mat3 mat_from_json(const json& j) {
    Mat3 m;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m.m[r][c] = j.at(r).at(c).get<float>();
    return m;
}

json texture_to_json(const Texture& t) {
    return json{{"kind", texture_kind_name(t.kind)},
                {"color_a", vec_to_json(t.color_a)},
                {"color_b", vec_to_json(t.color_b)},
                {"scale", t.scale},
                {"octaves", t.octaves},
                {"seed", t.seed}};
}
Texture texture_from_json(const json& j) {
    Texture t;
    t.kind = texture_kind_from_name(j.at("kind").get<std::string>().c_str());
    t.color_a = vec_from_json(j.at("color_a"));
    t.color_b = vec_from_json(j.at("color_b"));
    t.scale = j.at("scale").get<float>();
    t.octaves = j.at("octaves").get<int>();
    t.seed = j.at("seed").get<uint32_t>();
    return t;
}

json material_to_json(const Material& m) {
    return json{{"albedo", texture_to_json(m.albedo)}, {"roughness", m.roughness},
                {"metallic", m.metallic},             {"opacity", m.opacity},
                {"ior", m.ior},                       {"material_id", m.material_id}};
}
Material material_from_json(const json& j) {
    Material m;
    m.albedo = texture_from_json(j.at("albedo"));
    m.roughness = j.at("roughness").get<float>();
    m.metallic = j.at("metallic").get<float>();
    m.opacity = j.at("opacity").get<float>();
    m.ior = j.at("ior").get<float>();
    m.material_id = j.at("material_id").get<int>();
    return m;
}

} // namespace

json scene_to_json(const SceneGraph& s) {
    json prims = json::array();
    for (const auto& p : s.primitives) {
        prims.push_back(json{{"shape", shape_name(p.shape)},
                             {"rot", mat_to_json(p.pose.rot)},
                             {"pos", vec_to_json(p.pose.pos)},
                             {"extent", vec_to_json(p.extent)},
                             {"material", material_to_json(p.material)},
                             {"instance_id", p.instance_id}});
    }
    json lights = json::array();
    for (const auto& l : s.lights) {
        lights.push_back(json{{"directional", l.directional},
                              {"position", vec_to_json(l.position)},
                              {"direction", vec_to_json(l.direction)},
                              {"color", vec_to_json(l.color)},
                              {"intensity", l.intensity}});
    }
    json j{{"format", "hazstereo-scene-v1"},
           {"primitives", prims},
           {"lights", lights},
           {"ambient", s.ambient},
           {"ambient_color", vec_to_json(s.ambient_color)},
           {"background_radiance", vec_to_json(s.background_radiance)}};
    if (s.case_info.is_case) j["case"] = case_to_json(s.case_info);
    return j;
}

json case_to_json(const CaseInfo& ci) {
    return json{{"factor", hazard_factor_name(ci.factor)},
                {"seed", ci.seed},
                {"hazard_material_id", ci.hazard_material_id},
                {"level", ci.level},
                {"hazard_center", vec_to_json(ci.hazard_center)},
                {"hazard_normal", vec_to_json(ci.hazard_normal)},
                {"standoff_m", ci.standoff_m},
                {"base_roughness", ci.base_roughness},
                {"base_texture_scale", ci.base_texture_scale},
                {"texture_scale_floor", ci.texture_scale_floor}};
}

SceneGraph scene_from_json(const json& j) {
    SceneGraph s;
    for (const auto& pj : j.at("primitives")) {
        Primitive p;
        p.shape = shape_from_name(pj.at("shape").get<std::string>().c_str());
        p.pose.rot = mat_from_json(pj.at("rot"));
        p.pose.pos = vec_from_json(pj.at("pos"));
        p.extent = vec_from_json(pj.at("extent"));
        p.material = material_from_json(pj.at("material"));
        p.instance_id = pj.at("instance_id").get<int>();
        s.primitives.push_back(p);
    }
    for (const auto& lj : j.at("lights")) {
        Light l;
        l.directional = lj.at("directional").get<bool>();
        l.position = vec_from_json(lj.at("position"));
        l.direction = vec_from_json(lj.at("direction"));
        l.color = vec_from_json(lj.at("color"));
        l.intensity = lj.at("intensity").get<float>();
        s.lights.push_back(l);
    }
    s.ambient = j.at("ambient").get<float>();
    s.ambient_color = vec_from_json(j.at("ambient_color"));
    s.background_radiance = vec_from_json(j.at("background_radiance"));
    if (j.contains("case")) s.case_info = case_from_json(j.at("case"));
    return s;
}

CaseInfo case_from_json(const json& cj) {
    CaseInfo ci;
    ci.is_case = true;
    ci.factor = hazard_factor_from_name(cj.at("factor").get<std::string>().c_str());
    ci.seed = cj.at("seed").get<uint64_t>();
    ci.hazard_material_id = cj.at("hazard_material_id").get<int>();
    ci.level = cj.value("level", 0.f);
    ci.hazard_center = vec_from_json(cj.at("hazard_center"));
    ci.hazard_normal = vec_from_json(cj.at("hazard_normal"));
    ci.standoff_m = cj.at("standoff_m").get<float>();
    ci.base_roughness = cj.at("base_roughness").get<float>();
    ci.base_texture_scale = cj.at("base_texture_scale").get<float>();
    ci.texture_scale_floor = cj.at("texture_scale_floor").get<float>();
    return ci;
}

json rig_to_json(const StereoRig& r) {
    return json{{"focal_px", r.focal_px}, {"baseline_m", r.baseline_m}, {"width", r.width},
                {"height", r.height},     {"cx", r.cx},                 {"cy", r.cy},
                {"near_m", r.near_m},     {"far_m", r.far_m}};
}

StereoRig rig_from_json(const json& j) {
    StereoRig r;
    r.focal_px = j.at("focal_px").get<float>();
    r.baseline_m = j.at("baseline_m").get<float>();
    r.width = j.at("width").get<int>();
    r.height = j.at("height").get<int>();
    r.cx = j.value("cx", (r.width - 1) * 0.5f);
    r.cy = j.value("cy", (r.height - 1) * 0.5f);
    r.near_m = j.value("near_m", 0.05f);
    r.far_m = j.value("far_m", 100.0f);
    return r;
}

json pose_to_json(const CameraPose& p) {
    return json{{"rot", mat_to_json(p.rot)}, {"pos", vec_to_json(p.pos)}};
}

CameraPose pose_from_json(const json& j) {
    CameraPose p;
    p.rot = mat_from_json(j.at("rot"));
    p.pos = vec_from_json(j.at("pos"));
    return p;
}

void save_scene(const SceneGraph& scene, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(Errc::IoError, "cannot open " + path + " for writing");
    out << scene_to_json(scene).dump(2) << "\n";
}

SceneGraph load_scene(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::IoError, "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        raise(Errc::ParseError, std::string("scene json: ") + e.what());
    }
    return scene_from_json(j);
}

} // namespace hazstereo
