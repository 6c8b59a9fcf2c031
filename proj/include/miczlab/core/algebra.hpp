#pragma once

// Small scalar-generic complex and 3-vector types. std::complex is specified
// for floating-point only, so phase-space evaluation over dual numbers uses
// these instead.

#include <array>
#include <type_traits>

#include "miczlab/core/dual.hpp"

namespace micz {

template <class S>
struct Cx {
    S re{}, im{};

    Cx() = default;
    Cx(S r) : re(std::move(r)) {}  // NOLINT
    Cx(S r, S i) : re(std::move(r)), im(std::move(i)) {}

    Cx operator-() const { return {-re, -im}; }
    friend Cx operator+(const Cx& a, const Cx& b) { return {a.re + b.re, a.im + b.im}; }
    friend Cx operator-(const Cx& a, const Cx& b) { return {a.re - b.re, a.im - b.im}; }
    friend Cx operator*(const Cx& a, const Cx& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Cx operator*(const S& c, const Cx& a) { return {c * a.re, c * a.im}; }
    friend Cx operator*(const Cx& a, const S& c) { return {a.re * c, a.im * c}; }
    friend Cx operator*(double c, const Cx& a) requires(!std::is_same_v<S, double>) {
        return {c * a.re, c * a.im};
    }
    friend Cx operator*(const Cx& a, double c) requires(!std::is_same_v<S, double>) {
        return {a.re * c, a.im * c};
    }
};

template <class S> Cx<S> conj(const Cx<S>& a) { return {a.re, -a.im}; }
template <class S> S abs2(const Cx<S>& a) { return a.re * a.re + a.im * a.im; }
// multiply by i
template <class S> Cx<S> times_i(const Cx<S>& a) { return {-a.im, a.re}; }

template <class S>
struct Vec3 {
    std::array<S, 3> c{};

    S& operator[](int i) { return c[i]; }
    const S& operator[](int i) const { return c[i]; }

    Vec3 operator-() const { return {{-c[0], -c[1], -c[2]}}; }
    friend Vec3 operator+(const Vec3& a, const Vec3& b) {
        return {{a[0] + b[0], a[1] + b[1], a[2] + b[2]}};
    }
    friend Vec3 operator-(const Vec3& a, const Vec3& b) {
        return {{a[0] - b[0], a[1] - b[1], a[2] - b[2]}};
    }
    friend Vec3 operator*(const S& t, const Vec3& a) { return {{t * a[0], t * a[1], t * a[2]}}; }
    friend Vec3 operator*(double t, const Vec3& a) requires(!std::is_same_v<S, double>) {
        return {{t * a[0], t * a[1], t * a[2]}};
    }
};

template <class S> S dot(const Vec3<S>& a, const Vec3<S>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
template <class S> Vec3<S> cross(const Vec3<S>& a, const Vec3<S>& b) {
    return {{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]}};
}
template <class S> S norm(const Vec3<S>& a) {
    using micz::sqrt;
    using std::sqrt;
    return sqrt(dot(a, a));
}

using Vec3d = Vec3<double>;
using Cxd = Cx<double>;

}  // namespace micz
