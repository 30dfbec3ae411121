#include "hazstereo/render/intersect.hpp"

#include <cmath>

namespace hazstereo {

namespace {

bool hit_rect(const Primitive& p, const Ray& ray, float t_min, float t_max, Hit& hit) {
    // local frame: rectangle spans [-ex, ex] x [-ey, ey] in z = 0
    const Vec3 o = p.pose.to_local(ray.origin);
    const Vec3 d = p.pose.dir_to_local(ray.dir);
    if (std::fabs(d.z) < 1e-9f) return false;
    const float t = -o.z / d.z;
    if (t <= t_min || t >= t_max) return false;
    const float lx = o.x + t * d.x;
    const float ly = o.y + t * d.y;
    if (std::fabs(lx) > p.extent.x || std::fabs(ly) > p.extent.y) return false;
    hit.valid = true;
    hit.t = t;
    hit.point = ray.origin + ray.dir * t;
    const Vec3 n = p.pose.dir_to_world({0, 0, 1});
    hit.front_face = d.z < 0.f;
    hit.normal = hit.front_face ? n : -n;
    hit.u = lx;
    hit.v = ly;
    return true;
}

bool hit_box(const Primitive& p, const Ray& ray, float t_min, float t_max, Hit& hit) {
    const Vec3 o = p.pose.to_local(ray.origin);
    const Vec3 d = p.pose.dir_to_local(ray.dir);
    float t0 = t_min, t1 = t_max;
    int axis0 = -1, axis1 = -1;
    for (int a = 0; a < 3; ++a) {
        const float da = d[a], oa = o[a], ea = p.extent[a];
        if (std::fabs(da) < 1e-9f) {
            if (std::fabs(oa) > ea) return false;
            continue;
        }
        float ta = (-ea - oa) / da;
        float tb = (ea - oa) / da;
        if (ta > tb) std::swap(ta, tb);
        if (ta > t0) { t0 = ta; axis0 = a; }
        if (tb < t1) { t1 = tb; axis1 = a; }
        if (t0 > t1) return false;
    }
    float t = t0;
    int axis = axis0;
    if (axis < 0 || t <= t_min) {
        t = t1;
        axis = axis1;
        if (axis < 0 || t <= t_min || t >= t_max) return false;
    }
    const Vec3 lp{o.x + t * d.x, o.y + t * d.y, o.z + t * d.z};
    Vec3 ln{0, 0, 0};
    if (axis == 0) ln.x = lp.x > 0 ? 1.f : -1.f;
    if (axis == 1) ln.y = lp.y > 0 ? 1.f : -1.f;
    if (axis == 2) ln.z = lp.z > 0 ? 1.f : -1.f;
    hit.valid = true;
    hit.t = t;
    hit.point = ray.origin + ray.dir * t;
    Vec3 n = p.pose.dir_to_world(ln);
    hit.front_face = dot(n, ray.dir) < 0.f;
    hit.normal = hit.front_face ? n : -n;
    // face-local coordinates for texturing
    if (axis == 0) { hit.u = lp.z; hit.v = lp.y; }
    else if (axis == 1) { hit.u = lp.x; hit.v = lp.z; }
    else { hit.u = lp.x; hit.v = lp.y; }
    return true;
}

bool hit_sphere(const Primitive& p, const Ray& ray, float t_min, float t_max, Hit& hit) {
    const float r = p.extent.x;
    const Vec3 oc = ray.origin - p.pose.pos;
    const float b = dot(oc, ray.dir);
    const float c = dot(oc, oc) - r * r;
    const float disc = b * b - c;
    if (disc < 0.f) return false;
    const float sq = std::sqrt(disc);
    float t = -b - sq;
    if (t <= t_min) t = -b + sq;
    if (t <= t_min || t >= t_max) return false;
    hit.valid = true;
    hit.t = t;
    hit.point = ray.origin + ray.dir * t;
    Vec3 n = (hit.point - p.pose.pos) / r;
    hit.front_face = dot(n, ray.dir) < 0.f;
    hit.normal = hit.front_face ? n : -n;
    // spherical-ish parameterization scaled to meters
    hit.u = std::atan2(n.z, n.x) * r;
    hit.v = std::asin(std::fmax(-1.f, std::fmin(1.f, n.y))) * r;
    return true;
}

// capsule: segment along local z in [-hl, hl], radius r
bool hit_capsule(const Primitive& p, const Ray& ray, float t_min, float t_max, Hit& hit) {
    const float r = p.extent.x;
    const float hl = p.extent.z;
    const Vec3 o = p.pose.to_local(ray.origin);
    const Vec3 d = p.pose.dir_to_local(ray.dir);

    float best_t = t_max;
    bool found = false;
    Vec3 best_lp, best_ln;

    // infinite cylinder x^2 + y^2 = r^2, clipped to |z| <= hl
    const float a = d.x * d.x + d.y * d.y;
    if (a > 1e-12f) {
        const float b = o.x * d.x + o.y * d.y;
        const float c = o.x * o.x + o.y * o.y - r * r;
        const float disc = b * b - a * c;
        if (disc >= 0.f) {
            const float sq = std::sqrt(disc);
            for (float t : {(-b - sq) / a, (-b + sq) / a}) {
                if (t <= t_min || t >= best_t) continue;
                const float z = o.z + t * d.z;
                if (std::fabs(z) > hl) continue;
                best_t = t;
                best_lp = {o.x + t * d.x, o.y + t * d.y, z};
                best_ln = {best_lp.x / r, best_lp.y / r, 0.f};
                found = true;
            }
        }
    }
    // end caps
    for (float cz : {-hl, hl}) {
        const Vec3 ce{0, 0, cz};
        const Vec3 oc = o - ce;
        const float b = dot(oc, d);
        const float c = dot(oc, oc) - r * r;
        const float disc = b * b - c;
        if (disc < 0.f) continue;
        const float sq = std::sqrt(disc);
        for (float t : {-b - sq, -b + sq}) {
            if (t <= t_min || t >= best_t) continue;
            const Vec3 lp = o + d * t;
            if (cz < 0.f ? lp.z > cz : lp.z < cz) continue; // only the outward hemisphere
            best_t = t;
            best_lp = lp;
            best_ln = (lp - ce) / r;
            found = true;
        }
    }
    if (!found || best_t >= t_max) return false;
    hit.valid = true;
    hit.t = best_t;
    hit.point = ray.origin + ray.dir * best_t;
    Vec3 n = p.pose.dir_to_world(best_ln);
    hit.front_face = dot(n, ray.dir) < 0.f;
    hit.normal = hit.front_face ? n : -n;
    hit.u = std::atan2(best_ln.y, best_ln.x) * r;
    hit.v = best_lp.z;
    return true;
}

} // namespace

bool intersect_primitive(const Primitive& prim, const Ray& ray, float t_min, float t_max, Hit& hit) {
    switch (prim.shape) {
        case Shape::Plane: return hit_rect(prim, ray, t_min, t_max, hit);
        case Shape::Box: return hit_box(prim, ray, t_min, t_max, hit);
        case Shape::Sphere: return hit_sphere(prim, ray, t_min, t_max, hit);
        case Shape::Rod: return hit_capsule(prim, ray, t_min, t_max, hit);
    }
    return false;
}

Hit intersect_scene(const SceneGraph& scene, const Ray& ray, float t_min, float t_max) {
    Hit best;
    best.t = t_max;
    for (size_t i = 0; i < scene.primitives.size(); ++i) {
        Hit h;
        if (intersect_primitive(scene.primitives[i], ray, t_min, best.t, h)) {
            best = h;
            best.prim_index = static_cast<int>(i);
        }
    }
    return best;
}

float shadow_transmittance(const SceneGraph& scene, const Vec3& from, const Vec3& to) {
    const Vec3 delta = to - from;
    const float dist = length(delta);
    if (dist < 1e-6f) return 1.f;
    const Ray ray{from, delta / dist};
    float transmit = 1.f;
    // No refraction bending for shadow rays; attenuate through transparent
    // surfaces, block on the first opaque one.
    float t_cursor = 1e-4f;
    const float t_end = dist - 1e-4f;
    for (int guard = 0; guard < 32; ++guard) {
        const Hit h = intersect_scene(scene, ray, t_cursor, t_end);
        if (!h.valid) break;
        const Material& m = scene.primitives[h.prim_index].material;
        if (!is_transparent_class(m)) return 0.f;
        transmit *= (1.f - m.opacity);
        if (transmit < 1e-4f) return 0.f;
        t_cursor = h.t + 1e-4f;
    }
    return transmit;
}

} // namespace hazstereo
