#include <chrono>
#include <cstdio>
#include <functional>

#include <omp.h>

#include "hazstereo/match/matchers.hpp"
#include "hazstereo/render/renderer.hpp"
#include "hazstereo/scene/cases.hpp"

using namespace hazstereo;

namespace {

double time_ms(const std::function<void()>& fn, int reps = 3) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

void report(const char* name, double serial_ms, double parallel_ms) {
    printf("%-22s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx\n", name, serial_ms,
           parallel_ms, serial_ms / parallel_ms);
}

} // namespace

int main() {
    printf("omp max threads: %d\n\n", omp_get_max_threads());

    SceneGraph scene = build_case(HazardFactor::Texturelessness, 7);
    scene = set_hazard_level(scene, HazardFactor::Texturelessness, 0.3f);
    StereoRig rig;
    const CameraPose pose = viewpoint_ring(scene, 1, 7)[0];
    RenderSettings settings;
    settings.seed = 7;

    report("render_view",
           time_ms([&] { ref::render_view(scene, rig, pose, settings, 0); }),
           time_ms([&] { render_view(scene, rig, pose, settings, 0); }));

    const FrameBundle bundle = render_stereo(scene, rig, pose, settings);
    const int d_max = 64;

    report("cost_volume(census)",
           time_ms([&] {
               ref::build_cost_volume(bundle.left.display, bundle.right.display, d_max,
                                      CostKind::CensusHamming);
           }),
           time_ms([&] {
               build_cost_volume(bundle.left.display, bundle.right.display, d_max,
                                 CostKind::CensusHamming);
           }));

    const CostVolume volume =
        build_cost_volume(bundle.left.display, bundle.right.display, d_max, CostKind::CensusHamming);

    report("block_match", time_ms([&] { ref::block_match(volume); }),
           time_ms([&] { block_match(volume); }));

    report("sgm", time_ms([&] { ref::sgm(volume); }), time_ms([&] { sgm(volume); }));

    return 0;
}
