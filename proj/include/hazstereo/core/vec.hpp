#pragma once

#include <cmath>

namespace hazstereo {

struct Vec3 {
    float x = 0.f, y = 0.f, z = 0.f;

    Vec3() = default;
    Vec3(float x_, float y_, float z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(float s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(float s) const { return {x / s, y / s, z / s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator*=(float s) { x *= s; y *= s; z *= s; return *this; }

    // componentwise product, used for color modulation
    Vec3 operator*(const Vec3& o) const { return {x * o.x, y * o.y, z * o.z}; }

    float operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline float dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline float length(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline Vec3 normalize(const Vec3& v) { return v / length(v); }
inline Vec3 reflect(const Vec3& d, const Vec3& n) { return d - n * (2.f * dot(d, n)); }
inline Vec3 min(const Vec3& a, const Vec3& b) {
    return {std::fmin(a.x, b.x), std::fmin(a.y, b.y), std::fmin(a.z, b.z)};
}
inline Vec3 max(const Vec3& a, const Vec3& b) {
    return {std::fmax(a.x, b.x), std::fmax(a.y, b.y), std::fmax(a.z, b.z)};
}
inline Vec3 lerp(const Vec3& a, const Vec3& b, float t) { return a + (b - a) * t; }
inline Vec3 clamp01(const Vec3& v) {
    auto c = [](float f) { return f < 0.f ? 0.f : (f > 1.f ? 1.f : f); };
    return {c(v.x), c(v.y), c(v.z)};
}

// Column-major-free 3x3: rows stored explicitly. Columns of a camera-to-world
// rotation are the camera axes expressed in world coordinates.
struct Mat3 {
    // m[r][c]
    float m[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

    static Mat3 identity() { return {}; }

    static Mat3 from_cols(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
        Mat3 r;
        r.m[0][0] = c0.x; r.m[0][1] = c1.x; r.m[0][2] = c2.x;
        r.m[1][0] = c0.y; r.m[1][1] = c1.y; r.m[1][2] = c2.y;
        r.m[2][0] = c0.z; r.m[2][1] = c1.z; r.m[2][2] = c2.z;
        return r;
    }

    Vec3 col(int c) const { return {m[0][c], m[1][c], m[2][c]}; }

    Vec3 operator*(const Vec3& v) const {
        return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
                m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
    }

    Mat3 transposed() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
        return r;
    }

    // inverse rotation applied to v
    Vec3 apply_transposed(const Vec3& v) const {
        return {m[0][0] * v.x + m[1][0] * v.y + m[2][0] * v.z,
                m[0][1] * v.x + m[1][1] * v.y + m[2][1] * v.z,
                m[0][2] * v.x + m[1][2] * v.y + m[2][2] * v.z};
    }

    static Mat3 rotation_y(float radians) {
        const float c = std::cos(radians), s = std::sin(radians);
        Mat3 r;
        r.m[0][0] = c;  r.m[0][1] = 0; r.m[0][2] = s;
        r.m[1][0] = 0;  r.m[1][1] = 1; r.m[1][2] = 0;
        r.m[2][0] = -s; r.m[2][1] = 0; r.m[2][2] = c;
        return r;
    }

    static Mat3 rotation_x(float radians) {
        const float c = std::cos(radians), s = std::sin(radians);
        Mat3 r;
        r.m[0][0] = 1; r.m[0][1] = 0; r.m[0][2] = 0;
        r.m[1][0] = 0; r.m[1][1] = c; r.m[1][2] = -s;
        r.m[2][0] = 0; r.m[2][1] = s; r.m[2][2] = c;
        return r;
    }
};

inline Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            r.m[i][j] = a.m[i][0] * b.m[0][j] + a.m[i][1] * b.m[1][j] + a.m[i][2] * b.m[2][j];
        }
    return r;
}

// Rigid transform, local -> world.
struct Pose {
    Mat3 rot;
    Vec3 pos;

    Vec3 to_world(const Vec3& local) const { return rot * local + pos; }
    Vec3 to_local(const Vec3& world) const { return rot.apply_transposed(world - pos); }
    Vec3 dir_to_world(const Vec3& d) const { return rot * d; }
    Vec3 dir_to_local(const Vec3& d) const { return rot.apply_transposed(d); }
};

} // namespace hazstereo
