#pragma once

// Poisson structures and the generic bracket / vector-field engine.
//
// Structures are realized on flat real views through a structure matrix B with
// {x^a, x^b} = B^ab(x); brackets contract exact dual-number gradients with B.
// Conventions (fixed across the library):
//   canonical complex (8d): {pi_a, z^b} = delta_ab, {pibar_a, zbar^b} = delta_ab,
//     i.e. {Re pi, Re z} = +1/2 and {Im pi, Im z} = -1/2 on the real view.
//   monopole twisted (6d):  {q_i, p_j} = +delta_ij, {p_i, p_j} = s e_ijk q_k/|q|^3.
//   canonical pairs  (6d):  {x_i, p_j} = +delta_ij (chart-level checks).
// Hamiltonian flows are X_H^i = {x^i, H}.

#include <array>
#include <functional>
#include <span>
#include <string>
#include <utility>

#include "miczlab/core/dual.hpp"
#include "miczlab/core/errors.hpp"

namespace micz {

// Evaluates f at x with every slot seeded; result carries value and gradient.
template <class S, int N, class F>
Dual<S, N> eval_dual(F&& f, std::span<const S, N> x) {
    std::array<Dual<S, N>, N> xd;
    for (int i = 0; i < N; ++i) xd[i] = Dual<S, N>::seed(x[i], i);
    return f(std::span<const Dual<S, N>, N>(xd));
}

template <int N, class F>
std::array<double, N> grad(F&& f, std::span<const double, N> x) {
    return eval_dual<double, N>(std::forward<F>(f), x).d;
}

struct CanonicalComplex8 {
    static constexpr int dim = 8;

    template <class S>
    void check_point(std::span<const S, 8>) const {}

    // sum_ab B^ab gf_a gg_b
    template <class S>
    S contract(std::span<const S, 8> gf, std::span<const S, 8> gg,
               std::span<const S, 8>) const {
        S out(0.0);
        for (int a = 0; a < 2; ++a) {
            const int zr = 2 * a, zi = 2 * a + 1, pr = 4 + 2 * a, pim = 5 + 2 * a;
            out += 0.5 * (gf[pr] * gg[zr] - gf[zr] * gg[pr]);
            out -= 0.5 * (gf[pim] * gg[zi] - gf[zi] * gg[pim]);
        }
        return out;
    }

    template <class S>
    std::array<S, 8> field(std::span<const S, 8> gH, std::span<const S, 8>) const {
        std::array<S, 8> f{};
        for (int a = 0; a < 2; ++a) {
            const int zr = 2 * a, zi = 2 * a + 1, pr = 4 + 2 * a, pim = 5 + 2 * a;
            f[zr] = -0.5 * gH[pr];
            f[zi] = 0.5 * gH[pim];
            f[pr] = 0.5 * gH[zr];
            f[pim] = -0.5 * gH[zi];
        }
        return f;
    }
};

struct CanonicalPairs6 {
    static constexpr int dim = 6;

    template <class S>
    void check_point(std::span<const S, 6>) const {}

    template <class S>
    S contract(std::span<const S, 6> gf, std::span<const S, 6> gg,
               std::span<const S, 6>) const {
        S out(0.0);
        for (int i = 0; i < 3; ++i)
            out += gf[i] * gg[3 + i] - gf[3 + i] * gg[i];
        return out;
    }

    template <class S>
    std::array<S, 6> field(std::span<const S, 6> gH, std::span<const S, 6>) const {
        std::array<S, 6> f{};
        for (int i = 0; i < 3; ++i) {
            f[i] = gH[3 + i];
            f[3 + i] = -gH[i];
        }
        return f;
    }
};

struct MonopoleTwisted6 {
    static constexpr int dim = 6;
    double s = 0.0;

    template <class S>
    void check_point(std::span<const S, 6> x) const {
        using std::sqrt;
        const double qn = sqrt(value_of(x[0]) * value_of(x[0]) +
                               value_of(x[1]) * value_of(x[1]) +
                               value_of(x[2]) * value_of(x[2]));
        if (qn < kBoundaryMargin)
            throw SingularityError("monopole-twisted bracket evaluated at |q| < 1e-12");
    }

    template <class S>
    S contract(std::span<const S, 6> gf, std::span<const S, 6> gg,
               std::span<const S, 6> x) const {
        check_point(x);
        using micz::sqrt;
        using std::sqrt;
        S out(0.0);
        for (int i = 0; i < 3; ++i)
            out += gf[i] * gg[3 + i] - gf[3 + i] * gg[i];
        const S q2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        const S w = s / (q2 * sqrt(q2));
        // s e_ijk q_k/q^3 gf_{p_i} gg_{p_j}
        out += w * (x[2] * (gf[3] * gg[4] - gf[4] * gg[3]) +
                    x[0] * (gf[4] * gg[5] - gf[5] * gg[4]) +
                    x[1] * (gf[5] * gg[3] - gf[3] * gg[5]));
        return out;
    }

    template <class S>
    std::array<S, 6> field(std::span<const S, 6> gH, std::span<const S, 6> x) const {
        check_point(x);
        using micz::sqrt;
        using std::sqrt;
        const S q2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        const S w = s / (q2 * sqrt(q2));
        std::array<S, 6> f{};
        for (int i = 0; i < 3; ++i) f[i] = gH[3 + i];
        f[3] = -gH[0] + w * (x[2] * gH[4] - x[1] * gH[5]);
        f[4] = -gH[1] + w * (x[0] * gH[5] - x[2] * gH[3]);
        f[5] = -gH[2] + w * (x[1] * gH[3] - x[0] * gH[4]);
        return f;
    }
};

// {f, g}(x), scalar-generic so it can sit inside another dual evaluation.
template <class P, class S, class F, class G>
S poisson_bracket_s(const P& structure, F&& f, G&& g, std::span<const S, P::dim> x) {
    constexpr int N = P::dim;
    const auto gf = eval_dual<S, N>(std::forward<F>(f), x);
    const auto gg = eval_dual<S, N>(std::forward<G>(g), x);
    return structure.template contract<S>(std::span<const S, N>(gf.d),
                                          std::span<const S, N>(gg.d), x);
}

template <class P, class F, class G>
double poisson_bracket(const P& structure, F&& f, G&& g,
                       std::span<const double, P::dim> x) {
    return poisson_bracket_s<P, double>(structure, std::forward<F>(f), std::forward<G>(g), x);
}

// X_H at x: one gradient evaluation of H, then a structure contraction.
template <class P, class H>
std::array<double, P::dim> hamiltonian_vector_field(const P& structure, H&& h,
                                                    std::span<const double, P::dim> x) {
    constexpr int N = P::dim;
    const auto gh = eval_dual<double, N>(std::forward<H>(h), x);
    return structure.template field<double>(std::span<const double, N>(gh.d), x);
}

// |{f,{g,h}} + {g,{h,f}} + {h,{f,g}}| via nested duals (exact second derivatives).
template <class P, class F, class G, class H>
double check_jacobi(const P& structure, F&& f, G&& g, H&& h,
                    std::span<const double, P::dim> x) {
    constexpr int N = P::dim;
    using S1 = Dual<double, N>;
    auto nest = [&](auto&& a, auto&& bc_f, auto&& bc_g) {
        auto inner = [&](std::span<const S1, N> y) {
            return poisson_bracket_s<P, S1>(structure, bc_f, bc_g, y);
        };
        return poisson_bracket_s<P, double>(structure, a, inner,
                                            std::span<const double, N>(x));
    };
    return std::abs(nest(f, g, h) + nest(g, h, f) + nest(h, f, g));
}

// Coordinate observable x^i; works at any dual nesting depth.
template <int N>
struct Coord {
    int i = 0;
    template <class S>
    S operator()(std::span<const S, N> x) const { return x[i]; }
};

// Named observable with type-erased value/gradient evaluation for runtime lists.
template <int N>
struct Observable {
    std::string name;
    std::function<double(std::span<const double, N>)> value;
    std::function<Dual<double, N>(std::span<const Dual<double, N>, N>)> dual;

    template <class S>
    S operator()(std::span<const S, N> x) const {
        if constexpr (std::is_same_v<S, double>) return value(x);
        else return dual(x);
    }

    template <class F>
    static Observable make(std::string name, F f) {
        Observable o;
        o.name = std::move(name);
        o.value = [f](std::span<const double, N> x) { return f(x); };
        o.dual = [f](std::span<const Dual<double, N>, N> x) { return f(x); };
        return o;
    }
};

}  // namespace micz
