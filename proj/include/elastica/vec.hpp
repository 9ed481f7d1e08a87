#pragma once

#include <array>
#include <cmath>
#include <initializer_list>

#include "elastica/common.hpp"

namespace elastica {

// Small ambient-space vector, dimension 2 or 3 fixed at runtime.
struct Vec {
    std::array<double, 3> a{0.0, 0.0, 0.0};
    int n = 0;

    Vec() = default;
    explicit Vec(int dim) : n(dim) {}
    Vec(double x, double y) : a{x, y, 0.0}, n(2) {}
    Vec(double x, double y, double z) : a{x, y, z}, n(3) {}

    static Vec zero(int dim) { return Vec(dim); }

    double& operator[](int i) { return a[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return a[static_cast<std::size_t>(i)]; }
    int dim() const { return n; }

    Vec& operator+=(const Vec& o) {
        for (int i = 0; i < n; ++i) a[i] += o.a[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        for (int i = 0; i < n; ++i) a[i] -= o.a[i];
        return *this;
    }
    Vec& operator*=(double s) {
        for (int i = 0; i < n; ++i) a[i] *= s;
        return *this;
    }
};

inline Vec operator+(Vec x, const Vec& y) { return x += y; }
inline Vec operator-(Vec x, const Vec& y) { return x -= y; }
inline Vec operator*(double s, Vec x) { return x *= s; }
inline Vec operator*(Vec x, double s) { return x *= s; }
inline Vec operator-(Vec x) { return x *= -1.0; }

inline double dot(const Vec& x, const Vec& y) {
    double s = 0;
    for (int i = 0; i < x.n; ++i) s += x[i] * y[i];
    return s;
}

inline double norm(const Vec& x) { return std::sqrt(dot(x, x)); }

inline Vec normalized(const Vec& x) {
    double r = norm(x);
    if (r == 0.0) throw SingularConfiguration("cannot normalize a zero vector");
    return (1.0 / r) * x;
}

// Component of x orthogonal to the unit vector u.
inline Vec reject(const Vec& x, const Vec& u) { return x - dot(x, u) * u; }

// Angle between two unit vectors in [0, pi], stable at both ends:
// atan2 of the rejection magnitude against the cosine.
inline double unit_angle(const Vec& u, const Vec& v) {
    double c = dot(u, v);
    double s = norm(reject(v, u));
    return std::atan2(s, c);
}

}  // namespace elastica
