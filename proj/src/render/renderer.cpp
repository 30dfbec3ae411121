#include "hazstereo/render/renderer.hpp"

#include <cmath>
#include <limits>

#include "hazstereo/core/error.hpp"
#include "hazstereo/core/rng.hpp"

namespace hazstereo {

void RenderSettings::validate() const {
    if (samples_per_pixel < 1) raise(Errc::InvalidConfig, "samples_per_pixel must be >= 1");
    if (max_bounce_depth < 1) raise(Errc::InvalidConfig, "max_bounce_depth must be >= 1");
    auto unit = [](float v) { return v >= 0.f && v <= 1.f; };
    if (!unit(metallic_threshold) || !unit(roughness_threshold))
        raise(Errc::InvalidConfig, "class thresholds must be in [0,1]");
    if (!(gamma > 0.f)) raise(Errc::InvalidConfig, "gamma must be positive");
}

namespace {

constexpr float kRayEps = 1e-4f;

Vec3 offset_along(const Vec3& p, const Vec3& n) { return p + n * kRayEps; }

Vec3 direct_lighting(const SceneGraph& scene, const Vec3& p, const Vec3& n, const Vec3& albedo) {
    Vec3 sum = albedo * scene.ambient_color * scene.ambient;
    const Vec3 shadow_origin = offset_along(p, n);
    for (const Light& light : scene.lights) {
        Vec3 to_light;
        float atten = 1.f;
        Vec3 target;
        if (light.directional) {
            to_light = -normalize(light.direction);
            target = p + to_light * 1000.f;
        } else {
            const Vec3 d = light.position - p;
            const float dist2 = dot(d, d);
            if (dist2 < 1e-8f) continue;
            to_light = d / std::sqrt(dist2);
            atten = 1.f / dist2;
            target = light.position;
        }
        const float ndotl = dot(n, to_light);
        if (ndotl <= 0.f) continue;
        const float transmit = shadow_transmittance(scene, shadow_origin, target);
        if (transmit <= 0.f) continue;
        sum += albedo * light.color * (light.intensity * ndotl * atten * transmit);
    }
    return sum;
}

// Snell refraction with an origin-facing normal; falls back to mirror
// reflection on total internal reflection.
Vec3 refract_or_reflect(const Vec3& d, const Vec3& n, float eta, bool& tir) {
    const float cos_i = -dot(d, n);
    const float sin2_t = eta * eta * (1.f - cos_i * cos_i);
    if (sin2_t > 1.f) {
        tir = true;
        return reflect(d, n);
    }
    tir = false;
    return d * eta + n * (eta * cos_i - std::sqrt(1.f - sin2_t));
}

Vec3 shade(const SceneGraph& scene, const RenderSettings& st, const Ray& ray, int bounces_left,
           bool& budget_exceeded) {
    const Hit h = intersect_scene(scene, ray, kRayEps, std::numeric_limits<float>::infinity());
    if (!h.valid) return scene.background_radiance;

    const Material& m = scene.primitives[h.prim_index].material;
    const Vec3 albedo = m.albedo.sample(h.u, h.v);
    Vec3 color = direct_lighting(scene, h.point, h.normal, albedo);

    if (is_specular_class(m, st.metallic_threshold, st.roughness_threshold)) {
        float w = 1.f - m.roughness / st.roughness_threshold;
        w = w < 0.f ? 0.f : (w > 1.f ? 1.f : w);
        if (w > 0.f) {
            Vec3 reflected;
            if (bounces_left <= 0) {
                budget_exceeded = true;
                reflected = scene.background_radiance;
            } else {
                const Ray r{offset_along(h.point, h.normal), normalize(reflect(ray.dir, h.normal))};
                reflected = shade(scene, st, r, bounces_left - 1, budget_exceeded);
            }
            color = lerp(color, reflected, w);
        }
    }
    if (is_transparent_class(m)) {
        Vec3 transmitted;
        if (bounces_left <= 0) {
            budget_exceeded = true;
            transmitted = scene.background_radiance;
        } else {
            const float eta = h.front_face ? 1.f / m.ior : m.ior;
            bool tir = false;
            const Vec3 tdir = normalize(refract_or_reflect(ray.dir, h.normal, eta, tir));
            const Vec3 torig = tir ? offset_along(h.point, h.normal) : h.point - h.normal * kRayEps;
            transmitted = shade(scene, st, {torig, tdir}, bounces_left - 1, budget_exceeded);
        }
        color = color * m.opacity + transmitted * (1.f - m.opacity);
    }
    return color;
}

CameraView make_view(const StereoRig& rig) {
    CameraView v;
    v.rgb = ImageF(rig.width, rig.height, 3);
    v.depth = ImageF(rig.width, rig.height, 1);
    v.disparity = ImageF(rig.width, rig.height, 1);
    v.instance = Image<uint16_t>(rig.width, rig.height, 1);
    v.flags = Image<uint16_t>(rig.width, rig.height, 1);
    v.budget_exceeded = Mask(rig.width, rig.height, 1);
    return v;
}

// Camera-frame direction for image point (px, py); z forward, unit length.
Vec3 camera_dir(const StereoRig& rig, float px, float py) {
    return normalize({(px - rig.cx) / rig.focal_px, (py - rig.cy) / rig.focal_px, 1.f});
}

void render_pixel(const SceneGraph& scene, const StereoRig& rig, const CameraPose& pose,
                  const RenderSettings& st, int camera_index, int x, int y, CameraView& view) {
    const float inf = std::numeric_limits<float>::infinity();

    // Ground truth always comes from the pixel-center ray.
    const Vec3 center_cam = camera_dir(rig, x + 0.5f, y + 0.5f);
    const Ray center_ray{pose.pos, pose.rot * center_cam};
    const float t_min = rig.near_m / center_cam.z;
    const float t_max = rig.far_m / center_cam.z;
    const Hit gt = intersect_scene(scene, center_ray, t_min, t_max);
    if (gt.valid) {
        const Primitive& prim = scene.primitives[gt.prim_index];
        view.depth.at(x, y) = gt.t * center_cam.z;
        view.instance.at(x, y) = static_cast<uint16_t>(prim.instance_id);
        uint16_t f = 0;
        if (is_specular_class(prim.material, st.metallic_threshold, st.roughness_threshold))
            f |= kFlagSpecular;
        if (is_transparent_class(prim.material)) f |= kFlagTransparent;
        view.flags.at(x, y) = f;
    } else {
        view.depth.at(x, y) = inf;
        view.instance.at(x, y) = 0;
        view.flags.at(x, y) = 0;
    }

    bool exceeded = false;
    Vec3 sum{0, 0, 0};
    if (st.samples_per_pixel == 1) {
        sum = shade(scene, st, center_ray, st.max_bounce_depth, exceeded);
    } else {
        Rng rng(hash_mix(st.seed, (static_cast<uint64_t>(camera_index) << 32) | static_cast<uint32_t>(y),
                         static_cast<uint64_t>(x)));
        for (int s = 0; s < st.samples_per_pixel; ++s) {
            const float jx = rng.next_float();
            const float jy = rng.next_float();
            const Vec3 cam = camera_dir(rig, x + jx, y + jy);
            sum += shade(scene, st, {pose.pos, pose.rot * cam}, st.max_bounce_depth, exceeded);
        }
        sum *= 1.f / static_cast<float>(st.samples_per_pixel);
    }
    const Vec3 c = clamp01(sum);
    view.rgb.at(x, y, 0) = c.x;
    view.rgb.at(x, y, 1) = c.y;
    view.rgb.at(x, y, 2) = c.z;
    view.budget_exceeded.at(x, y) = exceeded ? 1 : 0;
}

void finalize_view(CameraView& view, const StereoRig& rig, const RenderSettings& st) {
    view.disparity = depth_to_disparity(view.depth, rig);
    view.display = encode_display(view.rgb, st.gamma);
    view.budget_exceeded_count = static_cast<int>(count_nonzero(view.budget_exceeded));
}

} // namespace

ImageF depth_to_disparity(const ImageF& depth, const StereoRig& rig) {
    if (depth.channels() != 1) raise(Errc::ShapeMismatch, "depth map must be single channel");
    ImageF disp(depth.width(), depth.height(), 1);
    const float fb = rig.focal_px * rig.baseline_m;
    for (size_t i = 0; i < depth.size(); ++i) {
        const float z = depth.data()[i];
        if (std::isinf(z) && z > 0.f) {
            disp.data()[i] = 0.f;
        } else if (z > 0.f) {
            disp.data()[i] = fb / z;
        } else {
            raise(Errc::NonPositiveDepth, "depth values must be positive or +inf");
        }
    }
    return disp;
}

float encode_gamma(float linear, float gamma) {
    const float v = linear < 0.f ? 0.f : (linear > 1.f ? 1.f : linear);
    return std::pow(v, 1.f / gamma);
}

ImageU8 encode_display(const ImageF& rgb, float gamma) {
    ImageU8 out(rgb.width(), rgb.height(), rgb.channels());
    for (size_t i = 0; i < rgb.size(); ++i) {
        const float e = encode_gamma(rgb.data()[i], gamma);
        out.data()[i] = static_cast<uint8_t>(std::lround(e * 255.f));
    }
    return out;
}

CameraView render_view(const SceneGraph& scene, const StereoRig& rig, const CameraPose& pose,
                       const RenderSettings& settings, int camera_index) {
    CameraView view = make_view(rig);
#pragma omp parallel for schedule(dynamic, 4)
    for (int y = 0; y < rig.height; ++y) {
        for (int x = 0; x < rig.width; ++x)
            render_pixel(scene, rig, pose, settings, camera_index, x, y, view);
    }
    finalize_view(view, rig, settings);
    return view;
}

FrameBundle render_stereo(const SceneGraph& scene, const StereoRig& rig, const CameraPose& pose,
                          const RenderSettings& settings) {
    scene.validate();
    rig.validate();
    settings.validate();
    FrameBundle b;
    b.rig = rig;
    b.pose = pose;
    b.case_info = scene.case_info;
    b.seed = settings.seed;
    b.left = render_view(scene, rig, pose, settings, 0);
    CameraPose right = pose;
    right.pos = pose.pos + pose.rot.col(0) * rig.baseline_m;
    b.right = render_view(scene, rig, right, settings, 1);
    return b;
}

namespace ref {

CameraView render_view(const SceneGraph& scene, const StereoRig& rig, const CameraPose& pose,
                       const RenderSettings& settings, int camera_index) {
    CameraView view = make_view(rig);
    for (int y = 0; y < rig.height; ++y)
        for (int x = 0; x < rig.width; ++x)
            render_pixel(scene, rig, pose, settings, camera_index, x, y, view);
    finalize_view(view, rig, settings);
    return view;
}

FrameBundle render_stereo(const SceneGraph& scene, const StereoRig& rig, const CameraPose& pose,
                          const RenderSettings& settings) {
    scene.validate();
    rig.validate();
    settings.validate();
    FrameBundle b;
    b.rig = rig;
    b.pose = pose;
    b.case_info = scene.case_info;
    b.seed = settings.seed;
    b.left = ref::render_view(scene, rig, pose, settings, 0);
    CameraPose right = pose;
    right.pos = pose.pos + pose.rot.col(0) * rig.baseline_m;
    b.right = ref::render_view(scene, rig, right, settings, 1);
    return b;
}

} // namespace ref

} // namespace hazstereo
