// Fixed-size vector and matrix helpers used across the library.
// Sizes are tiny (3 and 9), so everything is plain arrays and loops.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace framefield {

using Vec3 = std::array<double, 3>;
using Vec9 = std::array<double, 9>;

struct Mat3 {
    double m[3][3];

    static Mat3 identity() {
        Mat3 r{};
        r.m[0][0] = r.m[1][1] = r.m[2][2] = 1.0;
        return r;
    }
    double operator()(int i, int j) const { return m[i][j]; }
    double& operator()(int i, int j) { return m[i][j]; }
};

struct Mat9 {
    double m[9][9];

    static Mat9 identity() {
        Mat9 r{};
        for (int i = 0; i < 9; i++) r.m[i][i] = 1.0;
        return r;
    }
    double operator()(int i, int j) const { return m[i][j]; }
    double& operator()(int i, int j) { return m[i][j]; }
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(const Vec3& a) {
    double n = norm(a);
    return {a[0] / n, a[1] / n, a[2] / n};
}

inline double dot(const Vec9& a, const Vec9& b) {
    double s = 0.0;
    for (int i = 0; i < 9; i++) s += a[i] * b[i];
    return s;
}
inline double norm(const Vec9& a) { return std::sqrt(dot(a, a)); }
inline Vec9 operator+(const Vec9& a, const Vec9& b) {
    Vec9 r;
    for (int i = 0; i < 9; i++) r[i] = a[i] + b[i];
    return r;
}
inline Vec9 operator-(const Vec9& a, const Vec9& b) {
    Vec9 r;
    for (int i = 0; i < 9; i++) r[i] = a[i] - b[i];
    return r;
}
inline Vec9 operator*(double s, const Vec9& a) {
    Vec9 r;
    for (int i = 0; i < 9; i++) r[i] = s * a[i];
    return r;
}

inline Mat3 mul(const Mat3& a, const Mat3& b) {
    Mat3 r{};
    for (int i = 0; i < 3; i++)
        for (int k = 0; k < 3; k++) {
            double aik = a.m[i][k];
            for (int j = 0; j < 3; j++) r.m[i][j] += aik * b.m[k][j];
        }
    return r;
}
inline Vec3 mul(const Mat3& a, const Vec3& v) {
    Vec3 r{};
    for (int i = 0; i < 3; i++)
        for (int j = 0; j < 3; j++) r[i] += a.m[i][j] * v[j];
    return r;
}
inline Mat3 transposed(const Mat3& a) {
    Mat3 r;
    for (int i = 0; i < 3; i++)
        for (int j = 0; j < 3; j++) r.m[i][j] = a.m[j][i];
    return r;
}

inline Mat9 mul(const Mat9& a, const Mat9& b) {
    Mat9 r{};
    for (int i = 0; i < 9; i++)
        for (int k = 0; k < 9; k++) {
            double aik = a.m[i][k];
            if (aik == 0.0) continue;
            for (int j = 0; j < 9; j++) r.m[i][j] += aik * b.m[k][j];
        }
    return r;
}
inline Vec9 mul(const Mat9& a, const Vec9& v) {
    Vec9 r{};
    for (int i = 0; i < 9; i++)
        for (int j = 0; j < 9; j++) r[i] += a.m[i][j] * v[j];
    return r;
}
inline Mat9 transposed(const Mat9& a) {
    Mat9 r;
    for (int i = 0; i < 9; i++)
        for (int j = 0; j < 9; j++) r.m[i][j] = a.m[j][i];
    return r;
}

// Largest absolute entry of M - I; cheap orthogonality check helper.
inline double max_abs_diff_identity(const Mat9& a) {
    double r = 0.0;
    for (int i = 0; i < 9; i++)
        for (int j = 0; j < 9; j++) {
            double want = (i == j) ? 1.0 : 0.0;
            r = std::max(r, std::abs(a.m[i][j] - want));
        }
    return r;
}

inline double det(const Mat3& a) {
    return a.m[0][0] * (a.m[1][1] * a.m[2][2] - a.m[1][2] * a.m[2][1]) -
           a.m[0][1] * (a.m[1][0] * a.m[2][2] - a.m[1][2] * a.m[2][0]) +
           a.m[0][2] * (a.m[1][0] * a.m[2][1] - a.m[1][1] * a.m[2][0]);
}

} // namespace framefield
