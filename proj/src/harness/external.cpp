#include "hazstereo/harness/external.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>

#include "hazstereo/core/error.hpp"
#include "hazstereo/io/pfm.hpp"
#include "hazstereo/io/png_io.hpp"

namespace hazstereo {

namespace fs = std::filesystem;

namespace {

bool load_ground_truth(const std::string& scene_dir, ImageF& gt) {
    const std::string pfm = scene_dir + "/gt.pfm";
    const std::string png = scene_dir + "/gt.png";
    if (fs::exists(pfm)) {
        gt = read_pfm_file(pfm);
        if (gt.channels() != 1) raise(Errc::ParseError, "gt.pfm must be single channel");
        return true;
    }
    if (fs::exists(png)) {
        gt = read_disp_png16(read_file_bytes(png));
        return true;
    }
    return false;
}

struct Region {
    std::string name;
    Mask mask;
};

ExternalRow eval_region(const DisparityEstimate& est, const ImageF& gt, const Mask& mask,
                        const ExternalEvalParams& params) {
    ExternalRow row;
    size_t count = 0, est_valid = 0;
    for (int y = 0; y < gt.height(); ++y)
        for (int x = 0; x < gt.width(); ++x) {
            if (!mask.at(x, y)) continue;
            if (!(std::isfinite(gt.at(x, y)) && gt.at(x, y) >= 0.f)) continue;
            ++count;
            if (est.validity.at(x, y)) ++est_valid;
        }
    row.pixel_count = count;
    if (count == 0) return row;
    if (est_valid > 0) {
        row.epe = epe(est, gt, mask);
        row.epe_present = true;
    }
    if (params.badpix_policy == InvalidPolicy::CountAsBad || est_valid > 0) {
        row.badpix = badpix(est, gt, mask, params.tau, params.badpix_policy);
        row.badpix_present = true;
    }
    return row;
}

} // namespace

ExternalEvalResult run_external_eval(const std::string& root, const ExternalEvalParams& params) {
    if (!fs::is_directory(root)) raise(Errc::IoError, "external eval root is not a directory: " + root);
    const std::vector<ColorKey> keys = params.keys.empty() ? default_annotation_keys() : params.keys;

    std::vector<std::string> scenes;
    for (const auto& entry : fs::directory_iterator(root))
        if (entry.is_directory()) scenes.push_back(entry.path().filename().string());
    std::sort(scenes.begin(), scenes.end());

    ExternalEvalResult result;
    struct Bucket {
        std::vector<double> epes, badpixes;
        size_t pixels = 0;
    };
    // method -> region -> per-scene metric values
    std::map<std::string, std::map<std::string, Bucket>> acc;

    for (const std::string& scene : scenes) {
        const std::string dir = root + "/" + scene;

        ImageF gt;
        if (!load_ground_truth(dir, gt)) {
            result.notes.push_back({scene, "no gt.pfm or gt.png; scene skipped"});
            continue;
        }
        const std::string ann_path = dir + "/annotation.png";
        if (!fs::exists(ann_path)) {
            result.notes.push_back({scene, "no annotation.png; scene skipped"});
            continue;
        }
        AnnotationMasks ann;
        try {
            ann = read_annotation_masks(read_file_bytes(ann_path), keys, params.color_tolerance);
        } catch (const std::exception& e) {
            result.notes.push_back({scene, std::string("annotation unreadable: ") + e.what()});
            continue;
        }
        if (ann.unknown_color_count > 0)
            result.notes.push_back(
                {scene, std::to_string(ann.unknown_color_count) + " unrecognized annotation pixels"});

        const int w = gt.width(), h = gt.height();
        if (!ann.masks.empty() && !ann.masks[0].same_shape(Mask(w, h, 1))) {
            result.notes.push_back({scene, "annotation size differs from ground truth; scene skipped"});
            continue;
        }

        Mask nonocc(w, h, 1);
        const std::string noc_path = dir + "/nonoccluded.png";
        if (fs::exists(noc_path)) {
            nonocc = read_mask_file(noc_path);
            if (!nonocc.same_shape(Mask(w, h, 1))) {
                result.notes.push_back({scene, "nonoccluded.png size differs; scene skipped"});
                continue;
            }
        } else {
            nonocc.fill(1);
        }

        std::vector<Region> regions;
        regions.push_back({"full", nonocc});
        for (size_t k = 0; k < keys.size(); ++k) {
            Mask m(w, h, 1);
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x)
                    m.at(x, y) = ann.masks[k].at(x, y) & nonocc.at(x, y);
            regions.push_back({keys[k].name, std::move(m)});
        }

        const std::string est_dir = dir + "/estimates";
        if (!fs::is_directory(est_dir)) {
            result.notes.push_back({scene, "no estimates directory; scene skipped"});
            continue;
        }
        std::vector<std::string> est_files;
        for (const auto& entry : fs::directory_iterator(est_dir)) {
            const std::string ext = entry.path().extension().string();
            if (entry.is_regular_file() && (ext == ".pfm" || ext == ".png"))
                est_files.push_back(entry.path().string());
        }
        std::sort(est_files.begin(), est_files.end());

        for (const std::string& path : est_files) {
            const std::string method = fs::path(path).stem().string();
            DisparityEstimate est;
            try {
                est = ingest_external(path);
            } catch (const std::exception& e) {
                result.notes.push_back({scene, method + ": " + e.what()});
                continue;
            }
            if (!est.disparity.same_shape(gt)) {
                result.notes.push_back({scene, method + ": estimate size differs from ground truth"});
                continue;
            }
            for (const Region& region : regions) {
                ExternalRow row = eval_region(est, gt, region.mask, params);
                row.scene = scene;
                row.method = method;
                row.region = region.name;
                result.scene_rows.push_back(row);
                auto& bucket = acc[method][region.name];
                bucket.pixels += row.pixel_count;
                if (row.epe_present) bucket.epes.push_back(row.epe);
                if (row.badpix_present) bucket.badpixes.push_back(row.badpix);
            }
        }
    }

    for (const auto& [method, per_region] : acc) {
        for (const auto& [region, bucket] : per_region) {
            ExternalRow row;
            row.method = method;
            row.region = region;
            row.pixel_count = bucket.pixels;
            if (!bucket.epes.empty()) {
                double s = 0;
                for (double v : bucket.epes) s += v;
                row.epe = static_cast<float>(s / bucket.epes.size());
                row.epe_present = true;
            }
            if (!bucket.badpixes.empty()) {
                double s = 0;
                for (double v : bucket.badpixes) s += v;
                row.badpix = static_cast<float>(s / bucket.badpixes.size());
                row.badpix_present = true;
            }
            result.summary_rows.push_back(std::move(row));
        }
    }
    return result;
}

std::string external_rows_csv(const std::vector<ExternalRow>& rows, bool with_scene) {
    std::vector<std::string> header;
    if (with_scene) header.push_back("scene");
    header.insert(header.end(), {"method", "region", "pixel_count", "epe", "badpix"});
    CsvWriter csv(header);
    for (const ExternalRow& r : rows) {
        std::vector<std::string> cells;
        if (with_scene) cells.push_back(r.scene);
        cells.insert(cells.end(),
                     {r.method, r.region, std::to_string(r.pixel_count),
                      r.epe_present ? format_float(r.epe) : "",
                      r.badpix_present ? format_float(r.badpix) : ""});
        csv.add_row(cells);
    }
    return csv.str();
}

double correlate_tables(const CsvTable& a, const CsvTable& b, const std::string& region,
                        const std::string& metric) {
    auto metric_column = [&](const CsvTable& t) {
        int c = t.column(metric);
        if (c < 0) c = t.column(metric + "_mean");
        if (c < 0) raise(Errc::ParseError, "table lacks a '" + metric + "' column");
        return c;
    };
    auto collect = [&](const CsvTable& t) {
        const int mcol = t.column("method");
        const int rcol = t.column("region");
        if (mcol < 0 || rcol < 0) raise(Errc::ParseError, "table needs method and region columns");
        const int vcol = metric_column(t);
        std::map<std::string, double> values;
        for (const auto& row : t.rows) {
            if (row[rcol] != region) continue;
            const std::string& cell = row[vcol];
            if (cell.empty()) continue;
            if (values.count(row[mcol]))
                raise(Errc::DegenerateInput,
                      "duplicate row for method " + row[mcol] + " in region " + region);
            values[row[mcol]] = std::stod(cell);
        }
        return values;
    };

    const std::map<std::string, double> va = collect(a), vb = collect(b);
    std::vector<double> xs, ys;
    for (const auto& [method, x] : va) {
        auto it = vb.find(method);
        if (it == vb.end()) continue;
        xs.push_back(x);
        ys.push_back(it->second);
    }
    if (xs.size() < 2)
        raise(Errc::DegenerateInput, "correlation needs at least two shared methods");
    return pearson(xs, ys);
}

} // namespace hazstereo
