#include "hazstereo/scene/scene.hpp"

#include <cmath>
#include <cstring>
#include <set>

#include "hazstereo/core/error.hpp"

namespace hazstereo {

const char* shape_name(Shape s) {
    switch (s) {
        case Shape::Plane: return "plane";
        case Shape::Box: return "box";
        case Shape::Sphere: return "sphere";
        case Shape::Rod: return "rod";
    }
    return "sphere";
}

Shape shape_from_name(const char* name) {
    if (std::strcmp(name, "plane") == 0) return Shape::Plane;
    if (std::strcmp(name, "box") == 0) return Shape::Box;
    if (std::strcmp(name, "sphere") == 0) return Shape::Sphere;
    if (std::strcmp(name, "rod") == 0) return Shape::Rod;
    raise(Errc::ParseError, std::string("unknown shape '") + name + "'");
}

const char* hazard_factor_name(HazardFactor f) {
    switch (f) {
        case HazardFactor::Specularity: return "specularity";
        case HazardFactor::Texturelessness: return "texturelessness";
        case HazardFactor::Transparency: return "transparency";
        case HazardFactor::DisparityJumps: return "disparity_jumps";
    }
    return "specularity";
}

HazardFactor hazard_factor_from_name(const char* name) {
    if (std::strcmp(name, "specularity") == 0) return HazardFactor::Specularity;
    if (std::strcmp(name, "texturelessness") == 0) return HazardFactor::Texturelessness;
    if (std::strcmp(name, "transparency") == 0) return HazardFactor::Transparency;
    if (std::strcmp(name, "disparity_jumps") == 0) return HazardFactor::DisparityJumps;
    raise(Errc::ParseError, std::string("unknown hazard factor '") + name + "'");
}

static void check_unit(float v, const char* what) {
    if (!(v >= 0.f && v <= 1.f)) raise(Errc::InvalidConfig, std::string(what) + " outside [0,1]");
}

void SceneGraph::validate() const {
    std::set<int> ids;
    for (const auto& p : primitives) {
        if (p.instance_id < 1) raise(Errc::InvalidConfig, "instance_id must be >= 1");
        if (!ids.insert(p.instance_id).second)
            raise(Errc::InvalidConfig, "duplicate instance_id " + std::to_string(p.instance_id));
        if (!(p.extent.x > 0.f) || !(p.extent.y > 0.f) || !(p.extent.z > 0.f))
            raise(Errc::InvalidConfig, "primitive extents must be strictly positive");
        const Material& m = p.material;
        check_unit(m.roughness, "roughness");
        check_unit(m.metallic, "metallic");
        check_unit(m.opacity, "opacity");
        if (!(m.ior >= 1.f)) raise(Errc::InvalidConfig, "ior must be >= 1");
        if (!(m.albedo.scale > 0.f)) raise(Errc::InvalidConfig, "texture_scale must be > 0");
        const float ext = std::fmax(std::fmax(std::fabs(p.extent.x), std::fabs(p.extent.y)),
                                    std::fabs(p.extent.z)) +
                          length(p.pose.pos);
        if (!std::isfinite(ext)) raise(Errc::InvalidConfig, "scene bounding volume must be finite");
    }
    bool lit = ambient > 0.f;
    for (const auto& l : lights) {
        if (!(l.intensity >= 0.f)) raise(Errc::InvalidConfig, "light intensity must be >= 0");
        if (l.intensity > 0.f) lit = true;
    }
    if (!lit) raise(Errc::InvalidConfig, "scene needs at least one light or nonzero ambient");
}

const Primitive* SceneGraph::find_instance(int instance_id) const {
    for (const auto& p : primitives)
        if (p.instance_id == instance_id) return &p;
    return nullptr;
}

void StereoRig::validate() const {
    if (!(focal_px > 0.f)) raise(Errc::InvalidConfig, "focal_px must be > 0");
    if (!(baseline_m > 0.f)) raise(Errc::InvalidConfig, "baseline_m must be > 0");
    if (width < 1 || height < 1) raise(Errc::InvalidConfig, "image size must be positive");
    if (!(near_m > 0.f && near_m < far_m)) raise(Errc::InvalidConfig, "need 0 < near < far");
}

CameraPose look_at(const Vec3& eye, const Vec3& target, const Vec3& world_up) {
    const Vec3 fwd = normalize(target - eye);   // camera z
    Vec3 right = cross(fwd, world_up);          // camera x
    if (length(right) < 1e-6f) right = cross(fwd, Vec3{0, 0, 1});
    right = normalize(right);
    const Vec3 down = cross(fwd, right);        // camera y, image-down in a y-up world
    CameraPose pose;
    pose.rot = Mat3::from_cols(right, down, fwd);
    pose.pos = eye;
    return pose;
}

} // namespace hazstereo
