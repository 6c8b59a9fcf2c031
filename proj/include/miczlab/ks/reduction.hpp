#pragma once

// The U(1) reduction map q = z sigma zbar, p = (z sigma pi + pibar sigma zbar)/(2 z zbar),
// s = J, with machine checks of the induced bracket relations, the
// energy-surface correspondence, and the reduction of the constants of motion.

#include <array>
#include <cmath>
#include <span>

#include "miczlab/core/bracket.hpp"
#include "miczlab/core/state.hpp"
#include "miczlab/systems/curved.hpp"
#include "miczlab/systems/flat.hpp"

namespace micz::ks {

struct KSImage {
    ReducedPoint3 reduced;
    double s = 0.0;
    double source_energy = 0.0;  // filled by the level/observable checks
};

template <class S>
Vec3<S> invariant_q(const Phase4<S>& x) {
    return {{real_checked(bil(1, x.z, bar(x.z)), "q1"),
             real_checked(bil(2, x.z, bar(x.z)), "q2"),
             real_checked(bil(3, x.z, bar(x.z)), "q3")}};
}

template <class S>
Vec3<S> invariant_p(const Phase4<S>& x) {
    const S t = x.zz();
    Vec3<S> p;
    for (int i = 0; i < 3; ++i) {
        const Cx<S> w = bil(i + 1, x.z, x.pi) + bil(i + 1, bar(x.pi), bar(x.z));
        p[i] = real_checked(w, "p") / (2.0 * t);
    }
    return p;
}

inline KSImage ks_map(const PhasePoint4C& x) {
    if (x.zz_bar() < kBoundaryMargin)
        throw SingularityError("KS map undefined at z = 0");
    const auto r8 = x.real_view();
    const auto ph = Phase4<double>::from_flat(std::span<const double, 8>(r8));
    KSImage img;
    img.s = flat::j_u1(ph);
    img.reduced = {invariant_q(ph), invariant_p(ph), img.s};
    return img;
}

// Pullback observables evaluated under the canonical 4D bracket; residuals
// against the reduced-bracket values delta_ij, s e_ijk q_k/q^3 and 0.
struct BracketImageResidual {
    double qq = 0.0;  // |{q_i o ks, q_j o ks}|
    double pq = 0.0;  // |{p_i o ks, q_j o ks} - delta_ij|
    double pp = 0.0;  // |{p_i o ks, p_j o ks} - s e_ijk q_k/q^3|
    double max() const { return std::max({qq, pq, pp}); }
};

inline BracketImageResidual ks_bracket_residual(const PhasePoint4C& x, int i, int j) {
    if (x.zz_bar() < kBoundaryMargin)
        throw SingularityError("KS map undefined at z = 0");
    const CanonicalComplex8 P{};
    auto qi = [i](auto xs) {
        using S = std::remove_cvref_t<decltype(xs[0])>;
        return invariant_q(Phase4<S>::from_flat(xs))[i];
    };
    auto qj = [j](auto xs) {
        using S = std::remove_cvref_t<decltype(xs[0])>;
        return invariant_q(Phase4<S>::from_flat(xs))[j];
    };
    auto pi_ = [i](auto xs) {
        using S = std::remove_cvref_t<decltype(xs[0])>;
        return invariant_p(Phase4<S>::from_flat(xs))[i];
    };
    auto pj = [j](auto xs) {
        using S = std::remove_cvref_t<decltype(xs[0])>;
        return invariant_p(Phase4<S>::from_flat(xs))[j];
    };
    const auto img = ks_map(x);
    const auto& q = img.reduced.q;
    const double qn = norm(q);
    auto eps_ijk_qk = [&](int a, int b) {
        // e_abk q_k
        if (a == b) return 0.0;
        const int k = 3 - a - b;
        const double sign = ((b - a + 3) % 3 == 1) ? 1.0 : -1.0;
        return sign * q[k];
    };
    const auto r8 = x.real_view();
    const std::span<const double, 8> xs(r8);
    BracketImageResidual r;
    r.qq = std::abs(poisson_bracket(P, qi, qj, xs));
    r.pq = std::abs(poisson_bracket(P, pi_, qj, xs) - (i == j ? 1.0 : 0.0));
    r.pp = std::abs(poisson_bracket(P, pi_, pj, xs) - img.s * eps_ijk_qk(i, j) / (qn * qn * qn));
    return r;
}

enum class Source { Flat, Sphere, Pseudosphere };

inline SystemParams source_params(const SystemParams& P, Source src) {
    SystemParams sp = P;
    switch (src) {
        case Source::Flat: sp.curvature = Curvature::Flat; break;
        case Source::Sphere: sp.curvature = Curvature::Sphere; break;
        case Source::Pseudosphere: sp.curvature = Curvature::Pseudosphere; break;
    }
    return sp;
}

inline double source_energy(const PhasePoint4C& x, const SystemParams& sp) {
    const auto r8 = x.real_view();
    const auto ph = Phase4<double>::from_flat(std::span<const double, 8>(r8));
    return sp.curvature == Curvature::Flat ? flat::h_aniso(ph, sp)
                                           : curved::h_higgs_aniso(ph, sp);
}

// |H_target(ks(x)) - E_target| with gamma = E/2 and s = J(x).
// flat target:   E_target = -omega^2/2
// curved target: E_target = -omega^2/2 - eps_source E/(2 r0)
inline double ks_level_check(const PhasePoint4C& x, const SystemParams& P, Source src) {
    const SystemParams sp = source_params(P, src);
    const double E = source_energy(x, sp);
    const auto img = ks_map(x);
    SystemParams tgt = sp;
    tgt.gamma = E / 2.0;
    const auto r6 = img.reduced.real_view();
    const auto red = Red3<double>::from_flat(std::span<const double, 6>(r6));
    double h_tgt = 0.0, e_tgt = 0.0;
    if (src == Source::Flat) {
        h_tgt = flat::h_micz(red, img.s, tgt);
        e_tgt = -0.5 * sp.omega * sp.omega;
    } else {
        h_tgt = curved::h_micz_pseudo(red, img.s, tgt);
        e_tgt = -0.5 * sp.omega * sp.omega - sp.eps() * E / (2.0 * sp.r0());
    }
    return std::abs(h_tgt - e_tgt);
}

// Exact reduction image of the deformed hidden invariant, as a function on the
// reduced space. Flat: the reduced hidden invariant at reversed momenta.
// Curved: assembled from the invariant-bilinear dictionary
//   pi z + pibar zbar = 2 q.p,  z sigma_i pi = q p_i - i (q x p + s qhat)_i,
//   pi sigma_3 pibar = 2(q.p)p_3 - p^2 q_3 + s^2 q_3/q^2 + 2 s (q x p)_3 / q.
inline double hidden_image(const ReducedPoint3& r, double E, const SystemParams& sp) {
    const double q2 = dot(r.q, r.q);
    const double qn = std::sqrt(q2);
    const double s = r.s;
    if (sp.curvature == Curvature::Flat) {
        ReducedPoint3 rev{r.q, -1.0 * r.p, r.s};
        SystemParams tgt = sp;
        tgt.gamma = E / 2.0;
        const auto r6 = rev.real_view();
        return flat::a_hidden_micz(Red3<double>::from_flat(std::span<const double, 6>(r6)),
                                   rev.s, tgt);
    }
    const double eps = sp.eps();
    const double r0 = sp.r0();
    const double qp = dot(r.q, r.p);
    const double p2 = dot(r.p, r.p);
    const double qxp3 = cross(r.q, r.p)[2];
    const double pipb3 =
        2.0 * qp * r.p[2] - p2 * r.q[2] + s * s * r.q[2] / q2 + 2.0 * s * qxp3 / qn;
    const double b = 1.0 - eps * qn;
    const double a = 1.0 + eps * qn;
    const double JsJ3 = b * b * pipb3 + 4.0 * eps * qp * b * qn * r.p[2] + 4.0 * qp * qp * r.q[2];
    const double w = 1.0 - q2;
    return JsJ3 / (2.0 * r0) + 2.0 * sp.omega * sp.omega * r0 * r.q[2] / (b * b) +
           2.0 * r0 * sp.delta_omega_sq * qn / (a * a) +
           4.0 * sp.eps_el * r0 * r0 * (q2 / (w * w) + r.q[2] * r.q[2] / (b * b * b * b));
}

struct ObservableCheck {
    double j_residual = 0.0;
    double a_residual = 0.0;
};

// J3_source vs n3.(q x p + s qhat) at the image, and the hidden invariant vs
// its exact image shifted by the fitted constant kappa.
inline ObservableCheck ks_observable_check(const PhasePoint4C& x, const SystemParams& P,
                                           Source src, double kappa = 0.0) {
    const SystemParams sp = source_params(P, src);
    const auto r8 = x.real_view();
    const auto ph = Phase4<double>::from_flat(std::span<const double, 8>(r8));
    const auto img = ks_map(x);
    const double E = source_energy(x, sp);

    ObservableCheck out;
    const double j3_img = cross(img.reduced.q, img.reduced.p)[2] +
                          img.s * img.reduced.q[2] / norm(img.reduced.q);
    out.j_residual = std::abs(flat::j_rot(ph, 2) - j3_img);

    const double a_src = sp.curvature == Curvature::Flat ? flat::a_hidden(ph, sp)
                                                         : curved::a_hidden(ph, sp);
    out.a_residual = std::abs(a_src - hidden_image(img.reduced, E, sp) - kappa);
    return out;
}

// Least-squares constant offset over a batch of states (it comes out 0; the
// fit is kept as the machine check of state-independence).
inline double fit_kappa(std::span<const PhasePoint4C> states, const SystemParams& P,
                        Source src) {
    double acc = 0.0;
    for (const auto& x : states) {
        const SystemParams sp = source_params(P, src);
        const auto r8 = x.real_view();
        const auto ph = Phase4<double>::from_flat(std::span<const double, 8>(r8));
        const auto img = ks_map(x);
        const double E = source_energy(x, sp);
        const double a_src = sp.curvature == Curvature::Flat ? flat::a_hidden(ph, sp)
                                                             : curved::a_hidden(ph, sp);
        acc += a_src - hidden_image(img.reduced, E, sp);
    }
    return states.empty() ? 0.0 : acc / static_cast<double>(states.size());
}

}  // namespace micz::ks
