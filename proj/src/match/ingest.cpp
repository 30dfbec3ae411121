#include <cmath>

#include "hazstereo/core/error.hpp"
#include "hazstereo/io/pfm.hpp"
#include "hazstereo/io/png_io.hpp"
#include "hazstereo/match/matchers.hpp"

namespace hazstereo {

namespace {

std::string basename_of(const std::string& path) {
    const size_t slash = path.find_last_of("/\\");
    return slash == std::string::npos ? path : path.substr(slash + 1);
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

} // namespace

DisparityEstimate ingest_external(const std::string& path, ValidityConvention convention) {
    const auto bytes = read_file_bytes(path);
    ImageF disp;
    if (convention == ValidityConvention::ZeroStored) {
        disp = read_disp_png16(bytes); // invalids already carry the sentinel
    } else {
        disp = read_pfm(bytes).image;
        if (disp.channels() != 1)
            raise(Errc::ShapeMismatch, "external disparity pfm must be single channel: " + path);
    }
    DisparityEstimate est;
    est.method = "external:" + basename_of(path);
    est.validity = Mask(disp.width(), disp.height(), 1);
    est.disparity = ImageF(disp.width(), disp.height(), 1);
    for (size_t i = 0; i < disp.size(); ++i) {
        const float d = disp.data()[i];
        const bool ok = std::isfinite(d) && d >= 0.f;
        est.validity.data()[i] = ok ? 1 : 0;
        est.disparity.data()[i] = ok ? d : kInvalidDisparity;
    }
    return est;
}

DisparityEstimate ingest_external(const std::string& path) {
    if (ends_with(path, ".pfm") || ends_with(path, ".PFM"))
        return ingest_external(path, ValidityConvention::NegativeOrNonFinite);
    if (ends_with(path, ".png") || ends_with(path, ".PNG"))
        return ingest_external(path, ValidityConvention::ZeroStored);
    raise(Errc::ParseError, "cannot infer disparity format from extension: " + path);
}

} // namespace hazstereo
