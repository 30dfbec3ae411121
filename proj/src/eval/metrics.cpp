#include "hazstereo/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "hazstereo/io/csv.hpp"

namespace hazstereo {

const char* invalid_policy_name(InvalidPolicy p) {
    return p == InvalidPolicy::Exclude ? "exclude" : "count_as_bad";
}

InvalidPolicy invalid_policy_from_name(const std::string& name) {
    if (name == "exclude") return InvalidPolicy::Exclude;
    if (name == "count_as_bad") return InvalidPolicy::CountAsBad;
    raise(Errc::ParseError, "unknown invalid-pixel policy: " + name);
}

namespace {

bool gt_valid(float g) { return std::isfinite(g) && g >= 0.f; }

void check_eval_shapes(const DisparityEstimate& est, const ImageF& gt, const Mask& mask) {
    require_same_shape(est.disparity, gt, "eval: estimate vs gt");
    require_same_shape(est.disparity, mask, "eval: estimate vs mask");
}

} // namespace

float epe(const DisparityEstimate& est, const ImageF& gt, const Mask& mask) {
    check_eval_shapes(est, gt, mask);
    double sum = 0.0;
    size_t n = 0;
    for (int y = 0; y < gt.height(); ++y)
        for (int x = 0; x < gt.width(); ++x) {
            if (!mask.at(x, y) || !est.validity.at(x, y) || !gt_valid(gt.at(x, y))) continue;
            sum += std::fabs(static_cast<double>(est.disparity.at(x, y)) - gt.at(x, y));
            ++n;
        }
    if (n == 0) raise(Errc::EmptyRegion, "epe: no evaluated pixels");
    return static_cast<float>(sum / static_cast<double>(n));
}

float badpix(const DisparityEstimate& est, const ImageF& gt, const Mask& mask, float tau,
             InvalidPolicy policy) {
    check_eval_shapes(est, gt, mask);
    if (!(tau >= 0.f)) raise(Errc::InvalidConfig, "badpix tau must be >= 0");
    size_t evaluated = 0, bad = 0;
    for (int y = 0; y < gt.height(); ++y)
        for (int x = 0; x < gt.width(); ++x) {
            if (!mask.at(x, y) || !gt_valid(gt.at(x, y))) continue;
            const bool valid = est.validity.at(x, y) != 0;
            if (!valid) {
                if (policy == InvalidPolicy::CountAsBad) {
                    ++evaluated;
                    ++bad;
                }
                continue;
            }
            ++evaluated;
            if (std::fabs(est.disparity.at(x, y) - gt.at(x, y)) > tau) ++bad;
        }
    if (evaluated == 0) raise(Errc::EmptyRegion, "badpix: no evaluated pixels");
    return static_cast<float>(100.0 * static_cast<double>(bad) / static_cast<double>(evaluated));
}

const RegionMetrics& EvalReport::region(const std::string& name) const {
    for (const auto& r : regions)
        if (r.region == name) return r;
    raise(Errc::InvalidConfig, "no region named " + name);
}

EvalReport region_report(const DisparityEstimate& est, const FrameBundle& bundle,
                         const HazardMasks& masks, float tau, InvalidPolicy badpix_policy) {
    const ImageF& gt = bundle.left.disparity;
    require_same_shape(est.disparity, gt, "region_report: estimate vs bundle");
    require_same_shape(masks.nonoccluded, gt, "region_report: masks vs bundle");
    if (!(tau >= 0.f)) raise(Errc::InvalidConfig, "region_report tau must be >= 0");

    const int w = gt.width(), h = gt.height();
    Mask gtv(w, h, 1);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            gtv.at(x, y) = bundle.left.instance.at(x, y) != 0 && gt_valid(gt.at(x, y)) ? 1 : 0;

    struct Spec {
        const char* name;
        const Mask* mask;       // nullptr = no extra mask
        bool with_nonoccluded;
    };
    const Spec specs[] = {
        {"full", nullptr, false},
        {"nonoccluded", nullptr, true},
        {"specular", &masks.specular, true},
        {"textureless", &masks.textureless, true},
        {"transparent", &masks.transparent, true},
        {"disparity_jump", &masks.disparity_jump, true},
        {"boundary", &masks.boundary, true},
    };

    EvalReport rep;
    rep.method = est.method;
    rep.tau = tau;
    rep.badpix_policy = badpix_policy;

    for (const Spec& spec : specs) {
        RegionMetrics m;
        m.region = spec.name;
        Mask region(w, h, 1);
        size_t count = 0;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                uint8_t v = gtv.at(x, y);
                if (spec.with_nonoccluded) v &= masks.nonoccluded.at(x, y);
                if (spec.mask) v &= spec.mask->at(x, y);
                region.at(x, y) = v;
                count += v;
            }
        m.pixel_count = count;
        if (count > 0) {
            size_t est_valid = 0;
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x)
                    if (region.at(x, y) && est.validity.at(x, y)) ++est_valid;
            m.epe_count = est_valid;
            if (est_valid > 0) {
                m.epe_px = epe(est, gt, region);
                m.epe_present = true;
            }
            const bool badpix_possible =
                badpix_policy == InvalidPolicy::CountAsBad ? true : est_valid > 0;
            if (badpix_possible) {
                m.badpix_pct = badpix(est, gt, region, tau, badpix_policy);
                m.badpix_present = true;
            }
        }
        rep.regions.push_back(std::move(m));
    }
    return rep;
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) raise(Errc::DegenerateInput, "pearson: length mismatch");
    const size_t n = xs.size();
    if (n < 2) raise(Errc::DegenerateInput, "pearson: need at least 2 samples");
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) raise(Errc::DegenerateInput, "pearson: zero variance");
    return sxy / std::sqrt(sxx * syy);
}

SweepResult aggregate_sweep(const std::vector<SweepRecord>& records, const std::string& region) {
    if (records.empty()) raise(Errc::IncompleteGrid, "aggregate_sweep: no records");

    std::set<std::string> method_set;
    std::set<float> level_set;
    std::set<int> viewpoint_set;
    for (const auto& r : records) {
        method_set.insert(r.method);
        level_set.insert(r.level);
        viewpoint_set.insert(r.viewpoint);
    }

    SweepResult out;
    out.region = region;
    out.methods.assign(method_set.begin(), method_set.end());
    out.levels.assign(level_set.begin(), level_set.end());
    out.viewpoint_count = static_cast<int>(viewpoint_set.size());
    out.cells.assign(out.methods.size() * out.levels.size(), SweepCell{});

    // every (method, level, viewpoint) combination must appear exactly once
    std::map<std::tuple<std::string, float, int>, const EvalReport*> grid;
    for (const auto& r : records) {
        auto key = std::make_tuple(r.method, r.level, r.viewpoint);
        if (grid.count(key))
            raise(Errc::IncompleteGrid, "aggregate_sweep: duplicate cell for method " + r.method);
        grid[key] = &r.report;
    }
    if (grid.size() != method_set.size() * level_set.size() * viewpoint_set.size())
        raise(Errc::IncompleteGrid, "aggregate_sweep: grid is missing method/level/viewpoint cells");

    for (size_t mi = 0; mi < out.methods.size(); ++mi) {
        for (size_t li = 0; li < out.levels.size(); ++li) {
            SweepCell& cell = out.cell(mi, li);
            double epe_sum = 0.0, bad_sum = 0.0;
            for (int vp : viewpoint_set) {
                const EvalReport& rep = *grid.at({out.methods[mi], out.levels[li], vp});
                const RegionMetrics& rm = rep.region(region);
                if (rm.epe_present) {
                    epe_sum += rm.epe_px;
                    ++cell.epe_n;
                }
                if (rm.badpix_present) {
                    bad_sum += rm.badpix_pct;
                    ++cell.badpix_n;
                }
            }
            if (cell.epe_n > 0) {
                cell.epe = static_cast<float>(epe_sum / cell.epe_n);
                cell.epe_present = true;
            }
            if (cell.badpix_n > 0) {
                cell.badpix = static_cast<float>(bad_sum / cell.badpix_n);
                cell.badpix_present = true;
            }
        }
    }
    return out;
}

std::string report_to_csv(const EvalReport& report) {
    CsvWriter csv({"region", "pixel_count", "epe_count", "epe_px", "badpix_pct", "tau", "method",
                   "epe_policy", "badpix_policy"});
    for (const auto& r : report.regions) {
        csv.add_row({r.region, std::to_string(r.pixel_count), std::to_string(r.epe_count),
                     r.epe_present ? format_float(r.epe_px) : "",
                     r.badpix_present ? format_float(r.badpix_pct) : "", format_float(report.tau),
                     report.method, invalid_policy_name(report.epe_policy),
                     invalid_policy_name(report.badpix_policy)});
    }
    return csv.str();
}

namespace {

float parse_float_cell(const std::string& cell, const char* what) {
    try {
        size_t used = 0;
        float v = std::stof(cell, &used);
        if (used != cell.size()) raise(Errc::ParseError, std::string(what) + ": trailing junk");
        return v;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        raise(Errc::ParseError, std::string(what) + ": bad number '" + cell + "'");
    }
}

size_t parse_count_cell(const std::string& cell, const char* what) {
    try {
        return static_cast<size_t>(std::stoull(cell));
    } catch (const std::exception&) {
        raise(Errc::ParseError, std::string(what) + ": bad count '" + cell + "'");
    }
}

} // namespace

EvalReport report_from_csv(const CsvTable& table) {
    const char* cols[] = {"region",    "pixel_count", "epe_count",  "epe_px",       "badpix_pct",
                          "tau",       "method",      "epe_policy", "badpix_policy"};
    int idx[9];
    for (int i = 0; i < 9; ++i) {
        idx[i] = table.column(cols[i]);
        if (idx[i] < 0) raise(Errc::ParseError, std::string("report csv missing column ") + cols[i]);
    }
    if (table.rows.empty()) raise(Errc::ParseError, "report csv has no rows");

    EvalReport rep;
    rep.method = table.rows[0][idx[6]];
    rep.tau = parse_float_cell(table.rows[0][idx[5]], "tau");
    rep.epe_policy = invalid_policy_from_name(table.rows[0][idx[7]]);
    rep.badpix_policy = invalid_policy_from_name(table.rows[0][idx[8]]);
    for (const auto& row : table.rows) {
        RegionMetrics m;
        m.region = row[idx[0]];
        m.pixel_count = parse_count_cell(row[idx[1]], "pixel_count");
        m.epe_count = parse_count_cell(row[idx[2]], "epe_count");
        if (!row[idx[3]].empty()) {
            m.epe_px = parse_float_cell(row[idx[3]], "epe_px");
            m.epe_present = true;
        }
        if (!row[idx[4]].empty()) {
            m.badpix_pct = parse_float_cell(row[idx[4]], "badpix_pct");
            m.badpix_present = true;
        }
        rep.regions.push_back(std::move(m));
    }
    return rep;
}

std::string sweep_to_csv(const SweepResult& result, const std::string& factor_name) {
    CsvWriter csv({"factor", "region", "method", "level", "viewpoint_count", "epe_n", "epe_mean",
                   "badpix_n", "badpix_mean"});
    for (size_t mi = 0; mi < result.methods.size(); ++mi) {
        for (size_t li = 0; li < result.levels.size(); ++li) {
            const SweepCell& c = result.cell(mi, li);
            csv.add_row({factor_name, result.region, result.methods[mi], format_float(result.levels[li]),
                         std::to_string(result.viewpoint_count), std::to_string(c.epe_n),
                         c.epe_present ? format_float(c.epe) : "", std::to_string(c.badpix_n),
                         c.badpix_present ? format_float(c.badpix) : ""});
        }
    }
    return csv.str();
}

std::string sweep_methods_csv(const std::vector<SweepResult>& regions) {
    CsvWriter csv({"region", "method", "level_count", "epe_levels", "epe_mean", "badpix_levels",
                   "badpix_mean"});
    for (const SweepResult& res : regions) {
        for (size_t mi = 0; mi < res.methods.size(); ++mi) {
            double epe_sum = 0.0, bad_sum = 0.0;
            int epe_n = 0, bad_n = 0;
            for (size_t li = 0; li < res.levels.size(); ++li) {
                const SweepCell& c = res.cell(mi, li);
                if (c.epe_present) {
                    epe_sum += c.epe;
                    ++epe_n;
                }
                if (c.badpix_present) {
                    bad_sum += c.badpix;
                    ++bad_n;
                }
            }
            csv.add_row({res.region, res.methods[mi], std::to_string(res.levels.size()),
                         std::to_string(epe_n), epe_n ? format_float(epe_sum / epe_n) : "",
                         std::to_string(bad_n), bad_n ? format_float(bad_sum / bad_n) : ""});
        }
    }
    return csv.str();
}

} // namespace hazstereo
