#pragma once

#include <cstdint>
#include <vector>

#include "hazstereo/core/error.hpp"

namespace hazstereo {

// Row-major, top-down, interleaved channels.
template <typename T>
class Image {
public:
    Image() = default;
    Image(int width, int height, int channels = 1, T fill = T{})
        : w_(width), h_(height), c_(channels),
          data_(static_cast<size_t>(width) * height * channels, fill) {}

    int width() const { return w_; }
    int height() const { return h_; }
    int channels() const { return c_; }
    size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    T& at(int x, int y, int ch = 0) { return data_[idx(x, y, ch)]; }
    const T& at(int x, int y, int ch = 0) const { return data_[idx(x, y, ch)]; }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }
    T* row(int y) { return data_.data() + static_cast<size_t>(y) * w_ * c_; }
    const T* row(int y) const { return data_.data() + static_cast<size_t>(y) * w_ * c_; }

    bool in_bounds(int x, int y) const { return x >= 0 && x < w_ && y >= 0 && y < h_; }

    bool same_shape(const Image& o) const { return w_ == o.w_ && h_ == o.h_ && c_ == o.c_; }

    bool operator==(const Image& o) const {
        return w_ == o.w_ && h_ == o.h_ && c_ == o.c_ && data_ == o.data_;
    }

    void fill(T v) { data_.assign(data_.size(), v); }

private:
    size_t idx(int x, int y, int ch) const {
        return (static_cast<size_t>(y) * w_ + x) * c_ + ch;
    }

    int w_ = 0, h_ = 0, c_ = 1;
    std::vector<T> data_;
};

using ImageF = Image<float>;     // single or multi channel float
using ImageU8 = Image<uint8_t>;
using ImageU16 = Image<uint16_t>;
using Mask = Image<uint8_t>;     // 0 / 1

inline void require_same_shape(const auto& a, const auto& b, const char* where) {
    if (a.width() != b.width() || a.height() != b.height())
        raise(Errc::ShapeMismatch, where);
}

inline size_t count_nonzero(const Mask& m) {
    size_t n = 0;
    for (size_t i = 0; i < m.size(); ++i) n += m.data()[i] != 0;
    return n;
}

} // namespace hazstereo
