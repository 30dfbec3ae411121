#include "hazstereo/match/matchers.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <utility>

#include "hazstereo/core/color.hpp"
#include "hazstereo/core/error.hpp"

namespace hazstereo {

const char* cost_kind_name(CostKind k) {
    return k == CostKind::CensusHamming ? "census" : "ad";
}

CostKind cost_kind_from_name(const char* name) {
    const std::string s = name;
    if (s == "census") return CostKind::CensusHamming;
    if (s == "ad") return CostKind::AbsoluteDifference;
    raise(Errc::ParseError, "unknown cost kind: " + s);
}

void EnergyParams::validate() const {
    if (!(p1 >= 0.f) || !(p1 <= p2))
        raise(Errc::InvalidConfig, "smoothness penalties need 0 <= p1 <= p2");
    if (path_count != 4 && path_count != 8)
        raise(Errc::InvalidConfig, "path_count must be 4 or 8");
    if (!(lambda_smooth >= 0.f)) raise(Errc::InvalidConfig, "lambda_smooth must be >= 0");
}

namespace {

ImageF luma_of(const ImageU8& img) { return luminance(to_float01(img)); }

int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

} // namespace

Image<uint64_t> census_transform(const ImageU8& image, int window) {
    if (window < 3 || window % 2 == 0)
        raise(Errc::InvalidConfig, "census window must be odd and >= 3");
    if (window * window - 1 > 64)
        raise(Errc::WindowTooLarge, "census window " + std::to_string(window) +
                                        " needs more than 64 descriptor bits");
    const ImageF luma = luma_of(image);
    const int w = luma.width(), h = luma.height(), r = window / 2;
    Image<uint64_t> out(w, h, 1);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const float center = luma.at(x, y);
            uint64_t bits = 0;
            int bit = 0;
            for (int dy = -r; dy <= r; ++dy) {
                const int yy = clampi(y + dy, 0, h - 1);
                for (int dx = -r; dx <= r; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    const int xx = clampi(x + dx, 0, w - 1);
                    if (luma.at(xx, yy) > center) bits |= uint64_t{1} << bit;
                    ++bit;
                }
            }
            out.at(x, y) = bits;
        }
    }
    return out;
}

namespace {

CostVolume build_volume_impl(const ImageU8& left, const ImageU8& right, int d_max, CostKind kind,
                             int census_window, bool parallel) {
    require_same_shape(left, right, "build_cost_volume: left/right");
    if (left.channels() != right.channels())
        raise(Errc::ShapeMismatch, "build_cost_volume: channel mismatch");
    if (d_max < 1) raise(Errc::InvalidConfig, "d_max must be >= 1");

    CostVolume v;
    v.width = left.width();
    v.height = left.height();
    v.d_max = d_max;
    v.kind = kind;
    v.costs.assign(static_cast<size_t>(v.width) * v.height * (d_max + 1), 0.f);

    if (kind == CostKind::CensusHamming) {
        const auto cl = census_transform(left, census_window);
        const auto cr = census_transform(right, census_window);
        v.border_cost = static_cast<float>(census_window * census_window - 1);
        const int w = v.width, h = v.height;
        auto fill_row = [&](int y) {
            for (int x = 0; x < w; ++x)
                for (int d = 0; d <= d_max; ++d)
                    v.at(x, y, d) = x - d >= 0
                                        ? static_cast<float>(std::popcount(cl.at(x, y) ^ cr.at(x - d, y)))
                                        : v.border_cost;
        };
        if (parallel) {
#pragma omp parallel for schedule(static)
            for (int y = 0; y < h; ++y) fill_row(y);
        } else {
            for (int y = 0; y < h; ++y) fill_row(y);
        }
    } else {
        const ImageF ll = luma_of(left);
        const ImageF lr = luma_of(right);
        v.border_cost = 1.f;
        const int w = v.width, h = v.height;
        auto fill_row = [&](int y) {
            for (int x = 0; x < w; ++x)
                for (int d = 0; d <= d_max; ++d)
                    v.at(x, y, d) =
                        x - d >= 0 ? std::fabs(ll.at(x, y) - lr.at(x - d, y)) : v.border_cost;
        };
        if (parallel) {
#pragma omp parallel for schedule(static)
            for (int y = 0; y < h; ++y) fill_row(y);
        } else {
            for (int y = 0; y < h; ++y) fill_row(y);
        }
    }
    return v;
}

// Winner-take-all with ties to the smallest d, then a parabola fit through
// the three costs around the winner (skipped at the range ends).
DisparityEstimate wta_subpixel(const CostVolume& agg, std::string method) {
    DisparityEstimate est;
    est.disparity = ImageF(agg.width, agg.height, 1);
    est.validity = Mask(agg.width, agg.height, 1, 1);
    est.method = std::move(method);
    for (int y = 0; y < agg.height; ++y) {
        for (int x = 0; x < agg.width; ++x) {
            int best = 0;
            float best_cost = agg.at(x, y, 0);
            for (int d = 1; d <= agg.d_max; ++d) {
                const float c = agg.at(x, y, d);
                if (c < best_cost) {
                    best_cost = c;
                    best = d;
                }
            }
            float disp = static_cast<float>(best);
            if (best > 0 && best < agg.d_max) {
                const float c0 = agg.at(x, y, best - 1);
                const float c2 = agg.at(x, y, best + 1);
                const float denom = c0 - 2.f * best_cost + c2;
                if (denom > 1e-12f) {
                    float off = 0.5f * (c0 - c2) / denom;
                    off = off < -0.5f ? -0.5f : (off > 0.5f ? 0.5f : off);
                    disp = static_cast<float>(best) + off;
                }
            }
            est.disparity.at(x, y) = disp;
        }
    }
    return est;
}

// Mean cost over the in-bounds agg_window x agg_window neighborhood,
// separable passes. Sums of census costs are small integers, so the pass
// order does not change the float result there.
CostVolume aggregate_separable(const CostVolume& v, int agg_window, bool parallel) {
    if (agg_window == 1) return v;
    const int w = v.width, h = v.height, n = v.d_max + 1, r = agg_window / 2;
    CostVolume tmp = v;
    CostVolume out = v;

    auto hpass_row = [&](int y) {
        for (int x = 0; x < w; ++x) {
            const int x0 = clampi(x - r, 0, w - 1), x1 = clampi(x + r, 0, w - 1);
            for (int d = 0; d < n; ++d) {
                float s = 0.f;
                for (int xx = x0; xx <= x1; ++xx) s += v.at(xx, y, d);
                tmp.at(x, y, d) = s;
            }
        }
    };
    auto vpass_row = [&](int y) {
        const int y0 = clampi(y - r, 0, h - 1), y1 = clampi(y + r, 0, h - 1);
        for (int x = 0; x < w; ++x) {
            const int x0 = clampi(x - r, 0, w - 1), x1 = clampi(x + r, 0, w - 1);
            const float count = static_cast<float>((x1 - x0 + 1) * (y1 - y0 + 1));
            for (int d = 0; d < n; ++d) {
                float s = 0.f;
                for (int yy = y0; yy <= y1; ++yy) s += tmp.at(x, yy, d);
                out.at(x, y, d) = s / count;
            }
        }
    };
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (int y = 0; y < h; ++y) hpass_row(y);
#pragma omp parallel for schedule(static)
        for (int y = 0; y < h; ++y) vpass_row(y);
    } else {
        for (int y = 0; y < h; ++y) hpass_row(y);
        for (int y = 0; y < h; ++y) vpass_row(y);
    }
    return out;
}

std::string block_method_name(const CostVolume& v, int agg_window) {
    return std::string("block_match(agg_window=") + std::to_string(agg_window) + "," +
           cost_kind_name(v.kind) + ")";
}

std::string sgm_method_name(const CostVolume& v, const EnergyParams& p) {
    return std::string("sgm(p1=") + std::to_string(p.p1) + ",p2=" + std::to_string(p.p2) +
           ",paths=" + std::to_string(p.path_count) + "," + cost_kind_name(v.kind) + ")";
}

void check_agg_window(int agg_window) {
    if (agg_window < 1 || agg_window % 2 == 0)
        raise(Errc::InvalidConfig, "agg_window must be odd and >= 1");
}

constexpr int kDirs[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1},
                             {1, 1}, {-1, -1}, {1, -1}, {-1, 1}};

// Walks one scanline of direction (dx,dy) starting at (sx,sy), adding the
// renormalized DP costs into S (layout identical to the volume's).
void sgm_walk_line(const CostVolume& v, float P1, float P2, int sx, int sy, int dx, int dy,
                   std::vector<float>& S) {
    const int n = v.d_max + 1;
    std::vector<float> prev(n), cur(n);
    bool first = true;
    for (int x = sx, y = sy; x >= 0 && x < v.width && y >= 0 && y < v.height; x += dx, y += dy) {
        const size_t base = (static_cast<size_t>(y) * v.width + x) * n;
        if (first) {
            for (int d = 0; d < n; ++d) cur[d] = v.costs[base + d];
            first = false;
        } else {
            float prev_min = prev[0];
            for (int d = 1; d < n; ++d) prev_min = std::min(prev_min, prev[d]);
            for (int d = 0; d < n; ++d) {
                float best = prev[d];
                if (d > 0) best = std::min(best, prev[d - 1] + P1);
                if (d + 1 < n) best = std::min(best, prev[d + 1] + P1);
                best = std::min(best, prev_min + P2);
                cur[d] = v.costs[base + d] + best - prev_min;
            }
        }
        for (int d = 0; d < n; ++d) S[base + d] += cur[d];
        std::swap(prev, cur);
    }
}

std::vector<std::pair<int, int>> line_starts(int w, int h, int dx, int dy) {
    std::vector<std::pair<int, int>> starts;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const int px = x - dx, py = y - dy;
            if (px < 0 || px >= w || py < 0 || py >= h) starts.emplace_back(x, y);
        }
    return starts;
}

// Sum of path costs minus (path_count-1) copies of the data term, so the
// data cost enters the total exactly once. On a single row this makes WTA
// the exact minimizer of the scanline energy.
CostVolume sgm_aggregate(const CostVolume& v, const EnergyParams& params, bool parallel) {
    params.validate();
    const float P1 = params.lambda_smooth * params.p1;
    const float P2 = params.lambda_smooth * params.p2;
    CostVolume out = v;
    std::vector<float>& S = out.costs;
    std::fill(S.begin(), S.end(), 0.f);

    for (int dir = 0; dir < params.path_count; ++dir) {
        const int dx = kDirs[dir][0], dy = kDirs[dir][1];
        const auto starts = line_starts(v.width, v.height, dx, dy);
        if (parallel) {
#pragma omp parallel for schedule(dynamic, 8)
            for (size_t i = 0; i < starts.size(); ++i)
                sgm_walk_line(v, P1, P2, starts[i].first, starts[i].second, dx, dy, S);
        } else {
            for (size_t i = 0; i < starts.size(); ++i)
                sgm_walk_line(v, P1, P2, starts[i].first, starts[i].second, dx, dy, S);
        }
    }
    const float extra = static_cast<float>(params.path_count - 1);
    for (size_t i = 0; i < S.size(); ++i) S[i] -= extra * v.costs[i];
    return out;
}

} // namespace

CostVolume build_cost_volume(const ImageU8& left, const ImageU8& right, int d_max, CostKind kind,
                             int census_window) {
    return build_volume_impl(left, right, d_max, kind, census_window, true);
}

DisparityEstimate block_match(const CostVolume& volume, int agg_window) {
    check_agg_window(agg_window);
    const CostVolume agg = aggregate_separable(volume, agg_window, true);
    return wta_subpixel(agg, block_method_name(volume, agg_window));
}

DisparityEstimate sgm(const CostVolume& volume, const EnergyParams& params) {
    const CostVolume agg = sgm_aggregate(volume, params, true);
    return wta_subpixel(agg, sgm_method_name(volume, params));
}

CostVolume sgm_aggregated_costs(const CostVolume& volume, const EnergyParams& params) {
    return sgm_aggregate(volume, params, true);
}

DisparityEstimate lr_consistency(const DisparityEstimate& left, const DisparityEstimate& right,
                                 float tol) {
    require_same_shape(left.disparity, right.disparity, "lr_consistency");
    if (!(tol > 0.f)) raise(Errc::InvalidConfig, "lr tol must be positive");
    const float inf = std::numeric_limits<float>::infinity();
    DisparityEstimate out = left;
    const int w = left.disparity.width(), h = left.disparity.height();
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!out.validity.at(x, y)) continue;
            const float dl = left.disparity.at(x, y);
            const int xr = x - static_cast<int>(std::lround(dl));
            // an invalid probe compares as infinitely far, so tol=inf keeps it
            float diff = inf;
            bool oob = true;
            if (xr >= 0 && xr < w) {
                oob = false;
                if (right.validity.at(xr, y)) diff = std::fabs(dl - right.disparity.at(xr, y));
            }
            if (oob || diff > tol) {
                out.validity.at(x, y) = 0;
                out.disparity.at(x, y) = kInvalidDisparity;
            }
        }
    }
    out.method = left.method + "+lr";
    return out;
}

double scanline_energy(const CostVolume& volume, const EnergyParams& params, int y,
                       const std::vector<int>& labels) {
    if (static_cast<int>(labels.size()) != volume.width)
        raise(Errc::ShapeMismatch, "scanline_energy: one label per column required");
    double e = 0.0;
    for (int x = 0; x < volume.width; ++x) {
        const int d = labels[x];
        if (d < 0 || d > volume.d_max) raise(Errc::InvalidConfig, "label out of range");
        e += volume.at(x, y, d);
        if (x > 0) {
            const int diff = std::abs(d - labels[x - 1]);
            if (diff == 1)
                e += static_cast<double>(params.lambda_smooth) * params.p1;
            else if (diff > 1)
                e += static_cast<double>(params.lambda_smooth) * params.p2;
        }
    }
    return e;
}

namespace ref {

CostVolume build_cost_volume(const ImageU8& left, const ImageU8& right, int d_max, CostKind kind,
                             int census_window) {
    return build_volume_impl(left, right, d_max, kind, census_window, false);
}

DisparityEstimate block_match(const CostVolume& volume, int agg_window) {
    check_agg_window(agg_window);
    // direct 2D window means, no separable passes
    const int w = volume.width, h = volume.height, n = volume.d_max + 1, r = agg_window / 2;
    CostVolume agg = volume;
    for (int y = 0; y < h; ++y) {
        const int y0 = clampi(y - r, 0, h - 1), y1 = clampi(y + r, 0, h - 1);
        for (int x = 0; x < w; ++x) {
            const int x0 = clampi(x - r, 0, w - 1), x1 = clampi(x + r, 0, w - 1);
            const float count = static_cast<float>((x1 - x0 + 1) * (y1 - y0 + 1));
            for (int d = 0; d < n; ++d) {
                float s = 0.f;
                for (int yy = y0; yy <= y1; ++yy)
                    for (int xx = x0; xx <= x1; ++xx) s += volume.at(xx, yy, d);
                agg.at(x, y, d) = s / count;
            }
        }
    }
    return wta_subpixel(agg, block_method_name(volume, agg_window));
}

DisparityEstimate sgm(const CostVolume& volume, const EnergyParams& params) {
    const CostVolume agg = sgm_aggregate(volume, params, false);
    return wta_subpixel(agg, sgm_method_name(volume, params));
}

} // namespace ref

} // namespace hazstereo
