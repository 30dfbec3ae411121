#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hazstereo/core/vec.hpp"
#include "hazstereo/scene/texture.hpp"

namespace hazstereo {

struct Material {
    Texture albedo;
    float roughness = 0.5f;  // [0,1]
    float metallic = 0.0f;   // [0,1]
    float opacity = 1.0f;    // [0,1]; < 1 means transparent-class
    float ior = 1.5f;        // >= 1
    int material_id = 0;
};

// Classification thresholds live in RenderSettings; passed in so the scene
// description itself stays renderer-agnostic.
inline bool is_specular_class(const Material& m, float metallic_threshold, float roughness_threshold) {
    return m.metallic >= metallic_threshold && m.roughness <= roughness_threshold;
}
inline bool is_transparent_class(const Material& m) { return m.opacity < 1.0f; }

enum class Shape { Plane, Box, Sphere, Rod };

const char* shape_name(Shape s);
Shape shape_from_name(const char* name);

// Plane: finite rectangle in the local z=0 plane, half-sizes extent.x/extent.y,
//        normal along local +z.
// Box:   half-extents extent.xyz around the local origin.
// Sphere: radius extent.x.
// Rod:   capsule along the local z axis, half-length extent.z, radius extent.x.
struct Primitive {
    Shape shape = Shape::Sphere;
    Pose pose;
    Vec3 extent{1.f, 1.f, 1.f};
    Material material;
    int instance_id = 1; // 0 reserved for background
};

struct Light {
    bool directional = false;
    Vec3 position;           // point lights
    Vec3 direction{0, -1, 0}; // directional lights, toward the scene
    Vec3 color{1, 1, 1};
    float intensity = 1.0f;  // point: radiant scale with 1/r^2 falloff
};

enum class HazardFactor { Specularity, Texturelessness, Transparency, DisparityJumps };

const char* hazard_factor_name(HazardFactor f);
HazardFactor hazard_factor_from_name(const char* name);

// Set by build_case so level control and viewpoint placement know which
// part of the scene carries the hazard.
struct CaseInfo {
    bool is_case = false;
    HazardFactor factor = HazardFactor::Specularity;
    uint64_t seed = 0;
    int hazard_material_id = -1;  // material the level knob drives
    float level = 0.f;            // last applied hazard level
    Vec3 hazard_center;           // orbit target for viewpoint_ring
    Vec3 hazard_normal{0, 0, 1};  // fronto-parallel viewing direction
    float standoff_m = 3.0f;      // default camera distance from hazard_center
    float base_roughness = 0.6f;  // level-0 parameter values
    float base_texture_scale = 1.0f;
    float texture_scale_floor = 0.01f;
};

struct SceneGraph {
    std::vector<Primitive> primitives;
    std::vector<Light> lights;
    float ambient = 0.0f;
    Vec3 ambient_color{1, 1, 1};
    Vec3 background_radiance{0.45f, 0.5f, 0.55f};
    CaseInfo case_info;

    // Throws Error on any violated invariant.
    void validate() const;

    const Primitive* find_instance(int instance_id) const;
};

struct StereoRig {
    float focal_px = 280.0f;
    float baseline_m = 0.3f;
    int width = 320;
    int height = 240;
    float cx = 159.5f; // principal point
    float cy = 119.5f;
    float near_m = 0.05f;
    float far_m = 100.0f;

    void validate() const;
};

// Camera-to-world pose. Convention: camera x right, y down, z forward;
// the right camera of a rig sits at +baseline along camera x.
struct CameraPose {
    Mat3 rot;
    Vec3 pos;
};

CameraPose look_at(const Vec3& eye, const Vec3& target, const Vec3& world_up = {0, 1, 0});

} // namespace hazstereo
