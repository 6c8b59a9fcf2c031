#pragma once

// Forward-mode dual numbers carrying N partial derivatives alongside the value.
// The scalar S is itself generic so duals nest: Dual<Dual<double,N>,N> yields
// exact second derivatives (used by the Jacobi-identity residual).

#include <array>
#include <cmath>
#include <cstddef>

namespace micz {

template <class S, int N>
struct Dual {
    S v{};
    std::array<S, N> d{};

    Dual() = default;
    Dual(double c) : v(c) {}  // NOLINT: implicit lift of constants
    Dual(S value, std::array<S, N> grad) : v(std::move(value)), d(std::move(grad)) {}

    static Dual seed(S value, int slot) {
        Dual r;
        r.v = std::move(value);
        r.d[slot] = S(1.0);
        return r;
    }

    Dual operator-() const {
        Dual r;
        r.v = -v;
        for (int i = 0; i < N; ++i) r.d[i] = -d[i];
        return r;
    }

    Dual& operator+=(const Dual& o) {
        v += o.v;
        for (int i = 0; i < N; ++i) d[i] += o.d[i];
        return *this;
    }
    Dual& operator-=(const Dual& o) {
        v -= o.v;
        for (int i = 0; i < N; ++i) d[i] -= o.d[i];
        return *this;
    }
    Dual& operator*=(const Dual& o) {
        for (int i = 0; i < N; ++i) d[i] = d[i] * o.v + v * o.d[i];
        v *= o.v;
        return *this;
    }
    Dual& operator/=(const Dual& o) {
        const S iv = S(1.0) / o.v;
        v *= iv;
        for (int i = 0; i < N; ++i) d[i] = (d[i] - v * o.d[i]) * iv;
        return *this;
    }
};

template <class S, int N> Dual<S, N> operator+(Dual<S, N> a, const Dual<S, N>& b) { return a += b; }
template <class S, int N> Dual<S, N> operator-(Dual<S, N> a, const Dual<S, N>& b) { return a -= b; }
template <class S, int N> Dual<S, N> operator*(Dual<S, N> a, const Dual<S, N>& b) { return a *= b; }
template <class S, int N> Dual<S, N> operator/(Dual<S, N> a, const Dual<S, N>& b) { return a /= b; }

template <class S, int N> Dual<S, N> operator+(Dual<S, N> a, double c) { a.v += c; return a; }
template <class S, int N> Dual<S, N> operator+(double c, Dual<S, N> a) { a.v += c; return a; }
template <class S, int N> Dual<S, N> operator-(Dual<S, N> a, double c) { a.v -= c; return a; }
template <class S, int N> Dual<S, N> operator-(double c, const Dual<S, N>& a) { return -a + c; }
template <class S, int N> Dual<S, N> operator*(Dual<S, N> a, double c) {
    a.v *= c;
    for (int i = 0; i < N; ++i) a.d[i] *= c;
    return a;
}
template <class S, int N> Dual<S, N> operator*(double c, Dual<S, N> a) { return a * c; }
template <class S, int N> Dual<S, N> operator/(Dual<S, N> a, double c) { return a * (1.0 / c); }
template <class S, int N> Dual<S, N> operator/(double c, const Dual<S, N>& a) {
    return Dual<S, N>(c) / a;
}

// value_of strips all derivative layers; generic code uses it for domain guards.
inline double value_of(double x) { return x; }
template <class S, int N> double value_of(const Dual<S, N>& x) { return value_of(x.v); }

using std::atan2;
using std::asinh;
using std::cos;
using std::cosh;
using std::sin;
using std::sinh;
using std::sqrt;

template <class S, int N>
Dual<S, N> sqrt(const Dual<S, N>& a) {
    using micz::sqrt;
    Dual<S, N> r;
    r.v = sqrt(a.v);
    const S w = S(0.5) / r.v;
    for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * w;
    return r;
}

template <class S, int N>
Dual<S, N> sinh(const Dual<S, N>& a) {
    using micz::cosh;
    using micz::sinh;
    Dual<S, N> r;
    r.v = sinh(a.v);
    const S c = cosh(a.v);
    for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * c;
    return r;
}

template <class S, int N>
Dual<S, N> cosh(const Dual<S, N>& a) {
    using micz::cosh;
    using micz::sinh;
    Dual<S, N> r;
    r.v = cosh(a.v);
    const S s = sinh(a.v);
    for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * s;
    return r;
}

template <class S, int N>
Dual<S, N> sin(const Dual<S, N>& a) {
    using micz::cos;
    using micz::sin;
    Dual<S, N> r;
    r.v = sin(a.v);
    const S c = cos(a.v);
    for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * c;
    return r;
}

template <class S, int N>
Dual<S, N> cos(const Dual<S, N>& a) {
    using micz::cos;
    using micz::sin;
    Dual<S, N> r;
    r.v = cos(a.v);
    const S ms = -1.0 * sin(a.v);
    for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * ms;
    return r;
}

template <class S, int N>
Dual<S, N> asinh(const Dual<S, N>& a) {
    using micz::asinh;
    using micz::sqrt;
    Dual<S, N> r;
    r.v = asinh(a.v);
    const S w = S(1.0) / sqrt(a.v * a.v + S(1.0));
    for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * w;
    return r;
}

// d atan2(y,x) = (x dy - y dx)/(x^2+y^2)
template <class S, int N>
Dual<S, N> atan2(const Dual<S, N>& y, const Dual<S, N>& x) {
    using micz::atan2;
    Dual<S, N> r;
    r.v = atan2(y.v, x.v);
    const S w = S(1.0) / (x.v * x.v + y.v * y.v);
    for (int i = 0; i < N; ++i) r.d[i] = (x.v * y.d[i] - y.v * x.d[i]) * w;
    return r;
}

template <int N> using Dual1 = Dual<double, N>;
template <int N> using Dual2 = Dual<Dual<double, N>, N>;

}  // namespace micz
