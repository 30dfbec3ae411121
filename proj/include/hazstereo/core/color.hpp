#pragma once

#include "hazstereo/core/image.hpp"

namespace hazstereo {

// Rec.601 luma weights; applied to whatever encoding the caller passes in.
inline float luma601(float r, float g, float b) {
    return 0.299f * r + 0.587f * g + 0.114f * b;
}

inline ImageF to_float01(const ImageU8& img) {
    ImageF out(img.width(), img.height(), img.channels());
    for (size_t i = 0; i < img.size(); ++i)
        out.data()[i] = static_cast<float>(img.data()[i]) / 255.f;
    return out;
}

// Collapse an rgb image to single-channel luma; passes single-channel through.
inline ImageF luminance(const ImageF& img) {
    if (img.channels() == 1) return img;
    if (img.channels() != 3)
        raise(Errc::ShapeMismatch, "luminance: expected 1 or 3 channels");
    ImageF out(img.width(), img.height(), 1);
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            out.at(x, y) = luma601(img.at(x, y, 0), img.at(x, y, 1), img.at(x, y, 2));
    return out;
}

} // namespace hazstereo
