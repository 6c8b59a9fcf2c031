#pragma once

// Phase-space value types and their flat real views.
//
// PhasePoint4C: two complex coordinate/momentum pairs (z^a, pi_a); real view
//   ordering [Re z1, Im z1, Re z2, Im z2, Re pi1, Im pi1, Re pi2, Im pi2].
// ReducedPoint3: (q, p) in R^3 plus the monopole charge s; real view [q, p].

#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <string>

#include "miczlab/core/algebra.hpp"
#include "miczlab/core/errors.hpp"

namespace micz {

enum class Curvature { Flat, Sphere, Pseudosphere };

inline double curvature_sign(Curvature c) {
    switch (c) {
        case Curvature::Sphere: return 1.0;
        case Curvature::Pseudosphere: return -1.0;
        case Curvature::Flat: break;
    }
    throw DomainError("curvature sign requested for a flat-space system");
}

inline std::string curvature_name(Curvature c) {
    switch (c) {
        case Curvature::Flat: return "flat";
        case Curvature::Sphere: return "sphere";
        case Curvature::Pseudosphere: return "pseudosphere";
    }
    return "?";
}

struct SystemParams {
    double omega = 1.0;           // oscillator frequency
    double delta_omega_sq = 0.0;  // anisotropy strength (may be negative)
    double eps_el = 0.0;          // inharmonic / electric strength
    double R0 = 1.0;              // curvature radius (curved systems only)
    Curvature curvature = Curvature::Flat;
    double gamma = 0.0;           // Kepler coupling of reduced systems
    double s = 0.0;               // monopole charge of reduced systems

    double r0() const {
        if (curvature == Curvature::Flat)
            throw DomainError("r0 = R0^2 requested for a flat-space system");
        return R0 * R0;
    }
    double eps() const { return curvature_sign(curvature); }
};

struct PhasePoint4C {
    std::array<std::complex<double>, 2> z{};
    std::array<std::complex<double>, 2> pi{};

    std::array<double, 8> real_view() const {
        return {z[0].real(),  z[0].imag(),  z[1].real(),  z[1].imag(),
                pi[0].real(), pi[0].imag(), pi[1].real(), pi[1].imag()};
    }
    static PhasePoint4C from_real(std::span<const double, 8> x) {
        PhasePoint4C p;
        p.z = {std::complex<double>{x[0], x[1]}, std::complex<double>{x[2], x[3]}};
        p.pi = {std::complex<double>{x[4], x[5]}, std::complex<double>{x[6], x[7]}};
        return p;
    }
    double zz_bar() const { return std::norm(z[0]) + std::norm(z[1]); }

    bool finite() const {
        for (double c : real_view())
            if (!std::isfinite(c)) return false;
        return true;
    }
};

struct ReducedPoint3 {
    Vec3d q{};
    Vec3d p{};
    double s = 0.0;

    std::array<double, 6> real_view() const { return {q[0], q[1], q[2], p[0], p[1], p[2]}; }
    static ReducedPoint3 from_real(std::span<const double, 6> x, double s) {
        return {{{x[0], x[1], x[2]}}, {{x[3], x[4], x[5]}}, s};
    }
    double qnorm() const { return norm(q); }
};

// Scalar-generic views reconstructed from flat arrays inside evaluators.
template <class S>
struct Phase4 {
    std::array<Cx<S>, 2> z;
    std::array<Cx<S>, 2> pi;

    static Phase4 from_flat(std::span<const S, 8> x) {
        return {{Cx<S>{x[0], x[1]}, Cx<S>{x[2], x[3]}},
                {Cx<S>{x[4], x[5]}, Cx<S>{x[6], x[7]}}};
    }
    S zz() const { return abs2(z[0]) + abs2(z[1]); }
};

template <class S>
struct Red3 {
    Vec3<S> q;
    Vec3<S> p;

    static Red3 from_flat(std::span<const S, 6> x) {
        return {{{x[0], x[1], x[2]}}, {{x[3], x[4], x[5]}}};
    }
};

// Asserts that a bilinear which must be real is real to roundoff, then keeps
// the real part. Tolerance is absolute against a unit scale per the contract.
template <class S>
S real_checked(const Cx<S>& a, const char* what, double tol = 1e-12) {
    const double im = value_of(a.im);
    const double scale = std::max(1.0, std::abs(value_of(a.re)));
    if (std::abs(im) > tol * scale)
        throw RealityError(std::string(what) + ": imaginary residue " + std::to_string(im));
    return a.re;
}

}  // namespace micz
