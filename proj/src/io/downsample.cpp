#include "hazstereo/io/downsample.hpp"

#include <cmath>

#include "hazstereo/core/error.hpp"
#include "hazstereo/match/matchers.hpp"

namespace hazstereo {

namespace {

void check_factor(const ImageF& img, int factor) {
    if (factor < 1) raise(Errc::InvalidConfig, "downsample factor must be >= 1");
    if (img.width() % factor != 0 || img.height() % factor != 0)
        raise(Errc::ShapeMismatch, "image dimensions must be divisible by the downsample factor");
}

} // namespace

ImageF downsample_nearest(const ImageF& img, int factor) {
    check_factor(img, factor);
    ImageF out(img.width() / factor, img.height() / factor, img.channels());
    for (int y = 0; y < out.height(); ++y)
        for (int x = 0; x < out.width(); ++x)
            for (int c = 0; c < out.channels(); ++c)
                out.at(x, y, c) = img.at(x * factor, y * factor, c);
    return out;
}

ImageF downsample_area(const ImageF& img, int factor) {
    check_factor(img, factor);
    ImageF out(img.width() / factor, img.height() / factor, img.channels());
    const float inv = 1.f / static_cast<float>(factor * factor);
    for (int y = 0; y < out.height(); ++y)
        for (int x = 0; x < out.width(); ++x)
            for (int c = 0; c < out.channels(); ++c) {
                float s = 0.f;
                for (int dy = 0; dy < factor; ++dy)
                    for (int dx = 0; dx < factor; ++dx)
                        s += img.at(x * factor + dx, y * factor + dy, c);
                out.at(x, y, c) = s * inv;
            }
    return out;
}

ImageF downsample_disparity(const ImageF& disp, int factor, bool area) {
    check_factor(disp, factor);
    if (disp.channels() != 1) raise(Errc::ShapeMismatch, "disparity map must be single channel");
    const float scale = 1.f / static_cast<float>(factor);
    ImageF out(disp.width() / factor, disp.height() / factor, 1);
    for (int y = 0; y < out.height(); ++y) {
        for (int x = 0; x < out.width(); ++x) {
            if (!area) {
                const float v = disp.at(x * factor, y * factor);
                out.at(x, y) = (std::isfinite(v) && v >= 0.f) ? v * scale : kInvalidDisparity;
                continue;
            }
            float s = 0.f;
            int n = 0;
            for (int dy = 0; dy < factor; ++dy)
                for (int dx = 0; dx < factor; ++dx) {
                    const float v = disp.at(x * factor + dx, y * factor + dy);
                    if (std::isfinite(v) && v >= 0.f) {
                        s += v;
                        ++n;
                    }
                }
            out.at(x, y) = n ? (s / static_cast<float>(n)) * scale : kInvalidDisparity;
        }
    }
    return out;
}

} // namespace hazstereo
