#include "hazstereo/scene/cases.hpp"

#include <cmath>

#include "hazstereo/core/error.hpp"
#include "hazstereo/core/rng.hpp"

namespace hazstereo {

namespace {

constexpr float kPi = 3.14159265358979323846f;
constexpr float kRoughness0 = 0.6f;
constexpr float kTextureScale0 = 14.0f;
constexpr float kTextureScaleFloor = 0.01f;

constexpr int kWallMaterialId = 10;   // texturelessness knob
constexpr int kScreenMaterialId = 20; // specularity knob
constexpr int kGlassMaterialId = 30;  // transparency knob

Material noise_material(int id, Vec3 a, Vec3 b, float scale, uint32_t tex_seed) {
    Material m;
    m.albedo.kind = TextureKind::ValueNoise;
    m.albedo.color_a = a;
    m.albedo.color_b = b;
    m.albedo.scale = scale;
    m.albedo.seed = tex_seed;
    m.roughness = 0.9f;
    m.material_id = id;
    return m;
}

Material checker_material(int id, Vec3 a, Vec3 b, float scale) {
    Material m;
    m.albedo.kind = TextureKind::Checker;
    m.albedo.color_a = a;
    m.albedo.color_b = b;
    m.albedo.scale = scale;
    m.roughness = 0.9f;
    m.material_id = id;
    return m;
}

Primitive rect(int id, const Material& m, Vec3 center, Vec3 normal_dir, float half_w, float half_h) {
    // Build a pose whose local +z is the requested normal.
    Primitive p;
    p.shape = Shape::Plane;
    p.material = m;
    p.instance_id = id;
    p.extent = {half_w, half_h, 1.f};
    const Vec3 n = normalize(normal_dir);
    Vec3 helper = std::fabs(n.y) > 0.9f ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    const Vec3 tx = normalize(cross(helper, n));
    const Vec3 ty = cross(n, tx);
    p.pose.rot = Mat3::from_cols(tx, ty, n);
    p.pose.pos = center;
    return p;
}

Primitive box(int id, const Material& m, Vec3 center, Vec3 half_extent, float yaw = 0.f) {
    Primitive p;
    p.shape = Shape::Box;
    p.material = m;
    p.instance_id = id;
    p.extent = half_extent;
    p.pose.rot = Mat3::rotation_y(yaw);
    p.pose.pos = center;
    return p;
}

Primitive sphere(int id, const Material& m, Vec3 center, float radius) {
    Primitive p;
    p.shape = Shape::Sphere;
    p.material = m;
    p.instance_id = id;
    p.extent = {radius, radius, radius};
    p.pose.pos = center;
    return p;
}

// Room shell: floor, ceiling, back wall, two side walls. The front (high z,
// behind the cameras) stays open. Interior spans x in [-hw,hw], y in [0,hh*2],
// z in [0, depth].
void add_room(SceneGraph& s, int first_id, const Material& wall, const Material& floor_mat,
              const Material& ceil_mat, float hw, float height, float depth) {
    // floor/ceiling local axes land on world (z, x); pass half-sizes in that order
    s.primitives.push_back(rect(first_id + 0, floor_mat, {0, 0, depth * 0.5f}, {0, 1, 0}, depth * 0.5f, hw));
    s.primitives.push_back(rect(first_id + 1, ceil_mat, {0, height, depth * 0.5f}, {0, -1, 0}, depth * 0.5f, hw));
    s.primitives.push_back(rect(first_id + 2, wall, {0, height * 0.5f, 0}, {0, 0, 1}, hw, height * 0.5f));
    s.primitives.push_back(rect(first_id + 3, wall, {-hw, height * 0.5f, depth * 0.5f}, {1, 0, 0}, depth * 0.5f, height * 0.5f));
    s.primitives.push_back(rect(first_id + 4, wall, {hw, height * 0.5f, depth * 0.5f}, {-1, 0, 0}, depth * 0.5f, height * 0.5f));
}

void add_default_lights(SceneGraph& s) {
    Light a;
    a.position = {-1.3f, 2.5f, 3.2f};
    a.intensity = 9.0f;
    a.color = {1.0f, 0.97f, 0.92f};
    Light b;
    b.position = {1.5f, 2.3f, 2.6f};
    b.intensity = 7.0f;
    b.color = {0.92f, 0.95f, 1.0f};
    s.lights = {a, b};
    s.ambient = 0.22f;
}

SceneGraph specular_case(uint64_t seed) {
    SceneGraph s;
    Rng rng(hash_mix(seed, 0xA1));
    const uint32_t ts = rng.next_u32();

    const Material wall = noise_material(1, {0.75f, 0.72f, 0.66f}, {0.45f, 0.42f, 0.40f}, 9.f, ts);
    const Material floor_mat = checker_material(2, {0.62f, 0.58f, 0.52f}, {0.28f, 0.26f, 0.24f}, 5.f);
    const Material ceil_mat = noise_material(3, {0.82f, 0.82f, 0.8f}, {0.62f, 0.62f, 0.6f}, 6.f, ts + 1);
    add_room(s, 1, wall, floor_mat, ceil_mat, 2.6f, 2.9f, 7.0f);

    // The hazard carrier: a large fronto-facing screen just off the back wall.
    Material screen = noise_material(kScreenMaterialId, {0.9f, 0.85f, 0.7f}, {0.15f, 0.2f, 0.35f}, 7.f, ts + 2);
    screen.metallic = 1.0f;
    screen.roughness = kRoughness0;
    s.primitives.push_back(rect(10, screen, {0.f, 1.45f, 0.06f}, {0, 0, 1}, 0.95f, 0.6f));

    // Props in front of the screen give the mirror something to reflect.
    s.primitives.push_back(box(11, noise_material(4, {0.75f, 0.3f, 0.25f}, {0.35f, 0.12f, 0.1f}, 8.f, ts + 3),
                               {-1.55f, 0.5f, 2.1f + rng.uniform(-0.2f, 0.2f)}, {0.28f, 0.5f, 0.28f},
                               rng.uniform(-0.4f, 0.4f)));
    s.primitives.push_back(box(12, checker_material(5, {0.25f, 0.45f, 0.7f}, {0.1f, 0.18f, 0.3f}, 10.f),
                               {1.6f, 0.42f, 2.4f + rng.uniform(-0.2f, 0.2f)}, {0.24f, 0.42f, 0.24f},
                               rng.uniform(-0.4f, 0.4f)));
    s.primitives.push_back(sphere(13, noise_material(6, {0.7f, 0.65f, 0.3f}, {0.3f, 0.28f, 0.1f}, 9.f, ts + 4),
                                  {0.75f + rng.uniform(-0.15f, 0.15f), 0.3f, 1.7f}, 0.3f));

    add_default_lights(s);
    s.case_info.is_case = true;
    s.case_info.factor = HazardFactor::Specularity;
    s.case_info.seed = seed;
    s.case_info.hazard_material_id = kScreenMaterialId;
    s.case_info.hazard_center = {0.f, 1.45f, 0.06f};
    s.case_info.hazard_normal = {0, 0, 1};
    s.case_info.standoff_m = 3.1f;
    s.case_info.base_roughness = kRoughness0;
    return s;
}

SceneGraph textureless_case(uint64_t seed) {
    SceneGraph s;
    Rng rng(hash_mix(seed, 0xB2));
    const uint32_t ts = rng.next_u32();

    // Wall and ceiling share the one scalable texture (same material id).
    const Material scalable = noise_material(kWallMaterialId, {0.78f, 0.74f, 0.66f},
                                             {0.32f, 0.30f, 0.27f}, kTextureScale0, ts);
    const Material floor_mat = checker_material(2, {0.56f, 0.5f, 0.44f}, {0.26f, 0.23f, 0.2f}, 6.f);
    add_room(s, 1, scalable, floor_mat, scalable, 2.6f, 2.9f, 7.0f);

    // Textured furniture anchors the matchers away from the walls.
    s.primitives.push_back(box(10, noise_material(4, {0.7f, 0.35f, 0.2f}, {0.3f, 0.14f, 0.08f}, 9.f, ts + 3),
                               {-1.2f + rng.uniform(-0.1f, 0.1f), 0.45f, 1.6f}, {0.3f, 0.45f, 0.3f},
                               rng.uniform(-0.3f, 0.3f)));
    s.primitives.push_back(box(11, checker_material(5, {0.2f, 0.4f, 0.6f}, {0.08f, 0.16f, 0.26f}, 12.f),
                               {1.3f, 0.35f, 1.9f + rng.uniform(-0.15f, 0.15f)}, {0.26f, 0.35f, 0.26f},
                               rng.uniform(-0.3f, 0.3f)));
    s.primitives.push_back(sphere(12, noise_material(6, {0.65f, 0.6f, 0.3f}, {0.25f, 0.22f, 0.1f}, 8.f, ts + 4),
                                  {0.1f + rng.uniform(-0.1f, 0.1f), 0.32f, 1.1f}, 0.32f));

    add_default_lights(s);
    s.case_info.is_case = true;
    s.case_info.factor = HazardFactor::Texturelessness;
    s.case_info.seed = seed;
    s.case_info.hazard_material_id = kWallMaterialId;
    s.case_info.hazard_center = {0.f, 1.5f, 0.f};
    s.case_info.hazard_normal = {0, 0, 1};
    s.case_info.standoff_m = 3.4f;
    s.case_info.base_texture_scale = kTextureScale0;
    s.case_info.texture_scale_floor = kTextureScaleFloor;
    return s;
}

SceneGraph transparent_case(uint64_t seed) {
    SceneGraph s;
    Rng rng(hash_mix(seed, 0xC3));
    const uint32_t ts = rng.next_u32();

    const Material wall = noise_material(1, {0.72f, 0.7f, 0.64f}, {0.4f, 0.38f, 0.35f}, 9.f, ts);
    const Material floor_mat = checker_material(2, {0.6f, 0.55f, 0.5f}, {0.27f, 0.25f, 0.22f}, 5.f);
    const Material ceil_mat = noise_material(3, {0.8f, 0.8f, 0.78f}, {0.6f, 0.6f, 0.58f}, 6.f, ts + 1);
    add_room(s, 1, wall, floor_mat, ceil_mat, 2.6f, 2.9f, 7.0f);

    // Background objects that stay visible through the glass.
    s.primitives.push_back(box(10, noise_material(4, {0.75f, 0.3f, 0.2f}, {0.32f, 0.12f, 0.08f}, 10.f, ts + 3),
                               {-0.75f + rng.uniform(-0.1f, 0.1f), 0.55f, 0.55f}, {0.3f, 0.55f, 0.3f},
                               rng.uniform(-0.3f, 0.3f)));
    s.primitives.push_back(sphere(11, checker_material(5, {0.2f, 0.5f, 0.3f}, {0.08f, 0.2f, 0.12f}, 14.f),
                                  {0.65f, 0.38f, 0.75f + rng.uniform(-0.1f, 0.1f)}, 0.38f));
    s.primitives.push_back(box(12, noise_material(6, {0.65f, 0.6f, 0.25f}, {0.28f, 0.25f, 0.1f}, 11.f, ts + 4),
                               {0.1f + rng.uniform(-0.1f, 0.1f), 1.5f, 0.4f}, {0.5f, 0.3f, 0.2f},
                               rng.uniform(-0.2f, 0.2f)));

    // The hazard carrier: a glass slab between the camera and the props.
    Material glass = noise_material(kGlassMaterialId, {0.78f, 0.84f, 0.86f}, {0.6f, 0.68f, 0.72f}, 5.f, ts + 5);
    glass.roughness = 0.5f;
    glass.opacity = 1.0f; // level 0 = opaque
    glass.ior = 1.5f;
    Primitive slab = box(20, glass, {0.f, 1.3f, 1.6f}, {1.1f, 1.0f, 0.012f});
    s.primitives.push_back(slab);

    add_default_lights(s);
    s.case_info.is_case = true;
    s.case_info.factor = HazardFactor::Transparency;
    s.case_info.seed = seed;
    s.case_info.hazard_material_id = kGlassMaterialId;
    s.case_info.hazard_center = {0.f, 1.3f, 1.6f};
    s.case_info.hazard_normal = {0, 0, 1};
    s.case_info.standoff_m = 2.3f;
    return s;
}

SceneGraph jumps_case(uint64_t seed) {
    SceneGraph s;
    Rng rng(hash_mix(seed, 0xD4));
    const uint32_t ts = rng.next_u32();

    const Material wall = noise_material(1, {0.7f, 0.68f, 0.6f}, {0.38f, 0.36f, 0.32f}, 9.f, ts);
    const Material floor_mat = checker_material(2, {0.55f, 0.52f, 0.46f}, {0.25f, 0.23f, 0.2f}, 5.f);
    const Material ceil_mat = noise_material(3, {0.8f, 0.8f, 0.78f}, {0.6f, 0.6f, 0.58f}, 6.f, ts + 1);
    add_room(s, 1, wall, floor_mat, ceil_mat, 2.6f, 2.9f, 7.0f);

    // Rod field: thin capsules at varied depths and slight tilts.
    const int rod_count = 26;
    for (int i = 0; i < rod_count; ++i) {
        Material m = noise_material(100 + i, {0.55f + rng.uniform(0.f, 0.3f), 0.45f + rng.uniform(0.f, 0.25f), 0.2f + rng.uniform(0.f, 0.2f)},
                                    {0.2f, 0.16f, 0.08f}, 16.f, ts + 10 + static_cast<uint32_t>(i));
        Primitive rod;
        rod.shape = Shape::Rod;
        rod.material = m;
        rod.instance_id = 10 + i;
        const float radius = rng.uniform(0.014f, 0.035f);
        const float half_len = rng.uniform(0.9f, 1.25f);
        rod.extent = {radius, radius, half_len};
        const float x = rng.uniform(-1.9f, 1.9f);
        const float z = rng.uniform(0.5f, 2.3f);
        const float tilt = rng.uniform(-0.16f, 0.16f);
        const float tilt_axis = rng.uniform(0.f, kPi);
        // capsule axis is local z; stand it upright (world y), then tilt a little
        Mat3 upright = Mat3::rotation_x(-kPi * 0.5f);
        Mat3 tilt_rot = Mat3::rotation_y(tilt_axis) * Mat3::rotation_x(tilt) * Mat3::rotation_y(-tilt_axis);
        rod.pose.rot = tilt_rot * upright;
        rod.pose.pos = {x, half_len + 0.05f, z};
        s.primitives.push_back(rod);
    }

    add_default_lights(s);
    s.case_info.is_case = true;
    s.case_info.factor = HazardFactor::DisparityJumps;
    s.case_info.seed = seed;
    s.case_info.hazard_material_id = -1; // fixed at build time, no level knob
    s.case_info.hazard_center = {0.f, 1.2f, 1.4f};
    s.case_info.hazard_normal = {0, 0, 1};
    s.case_info.standoff_m = 2.9f;
    return s;
}

} // namespace

SceneGraph build_case(HazardFactor factor, uint64_t seed) {
    switch (factor) {
        case HazardFactor::Specularity: return specular_case(seed);
        case HazardFactor::Texturelessness: return textureless_case(seed);
        case HazardFactor::Transparency: return transparent_case(seed);
        case HazardFactor::DisparityJumps: return jumps_case(seed);
    }
    raise(Errc::InvalidConfig, "unknown hazard factor");
}

SceneGraph set_hazard_level(const SceneGraph& scene, HazardFactor factor, float level) {
    if (!(level >= 0.f && level <= 1.f))
        raise(Errc::LevelOutOfRange, "hazard level must be in [0,1], got " + std::to_string(level));
    if (!scene.case_info.is_case || scene.case_info.factor != factor)
        raise(Errc::FactorMismatch, std::string("scene was not built for factor ") + hazard_factor_name(factor));
    if (factor == HazardFactor::DisparityJumps)
        raise(Errc::FactorMismatch, "disparity_jumps has no continuous level; vary the build seed instead");

    SceneGraph out = scene;
    out.case_info.level = level;
    const CaseInfo& ci = scene.case_info;
    for (auto& prim : out.primitives) {
        if (prim.material.material_id != ci.hazard_material_id) continue;
        switch (factor) {
            case HazardFactor::Specularity:
                prim.material.roughness = ci.base_roughness * (1.f - level);
                break;
            case HazardFactor::Texturelessness:
                prim.material.albedo.scale = ci.base_texture_scale * (1.f - level) + ci.texture_scale_floor;
                break;
            case HazardFactor::Transparency:
                prim.material.opacity = 1.f - level;
                break;
            case HazardFactor::DisparityJumps:
                break;
        }
    }
    return out;
}

std::vector<CameraPose> viewpoint_ring(const SceneGraph& scene, int count, uint64_t seed) {
    if (count < 1) raise(Errc::InvalidConfig, "viewpoint count must be >= 1");
    const CaseInfo& ci = scene.case_info;
    const Vec3 center = ci.hazard_center;
    const Vec3 normal = normalize(ci.hazard_normal);
    const float standoff = ci.standoff_m;

    std::vector<CameraPose> poses;
    poses.reserve(count);
    Rng rng(hash_mix(seed, 0xE5));
    constexpr float kDeg = kPi / 180.f;
    for (int i = 0; i < count; ++i) {
        float azimuth = 0.f, elevation = 0.f, dist = standoff;
        if (i == 1) {
            // guaranteed slanted view
            azimuth = (rng.next_float() < 0.5f ? -1.f : 1.f) * rng.uniform(24.f, 33.f) * kDeg;
            elevation = rng.uniform(-4.f, 8.f) * kDeg;
            dist = standoff * rng.uniform(0.95f, 1.1f);
        } else if (i >= 2) {
            azimuth = rng.uniform(-32.f, 32.f) * kDeg;
            elevation = rng.uniform(-8.f, 12.f) * kDeg;
            dist = standoff * rng.uniform(0.85f, 1.15f);
        }
        const Mat3 swing = Mat3::rotation_y(azimuth) * Mat3::rotation_x(elevation);
        Vec3 eye = center + swing * (normal * dist);
        if (eye.y < 0.35f) eye.y = 0.35f; // stay above the floor
        poses.push_back(look_at(eye, center));
    }
    return poses;
}

} // namespace hazstereo
