#pragma once

#include "hazstereo/scene/scene.hpp"

namespace hazstereo {

struct Ray {
    Vec3 origin;
    Vec3 dir; // normalized
};

struct Hit {
    bool valid = false;
    float t = 0.f;            // ray parameter, world units
    Vec3 point;
    Vec3 normal;              // geometric normal, unit length
    bool front_face = true;   // ray arrived from the outward-normal side
    float u = 0.f, v = 0.f;   // surface parameterization in meters
    int prim_index = -1;
};

// First intersection at t in (t_min, t_max); hit.normal faces the ray origin.
bool intersect_primitive(const Primitive& prim, const Ray& ray, float t_min, float t_max, Hit& hit);

Hit intersect_scene(const SceneGraph& scene, const Ray& ray, float t_min, float t_max);

// Product of (1 - opacity) over surfaces between the two points; 0 when an
// opaque surface blocks. Used for shadow rays.
float shadow_transmittance(const SceneGraph& scene, const Vec3& from, const Vec3& to);

} // namespace hazstereo
