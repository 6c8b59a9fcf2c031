#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "miczlab/lab/run.hpp"
#include "miczlab/separation/parabolic.hpp"

using namespace micz;

namespace {

Vec3d rand_ball(std::mt19937_64& rng, double perp_min = 0.1) {
    std::uniform_real_distribution<double> u(-0.55, 0.55);
    for (;;) {
        Vec3d q{{u(rng), u(rng), u(rng)}};
        const double q2 = dot(q, q);
        if (q2 > 0.04 && q2 < 0.8 && q[0] * q[0] + q[1] * q[1] > perp_min * perp_min) return q;
    }
}

ReducedPoint3 rand_state(std::mt19937_64& rng, double s) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return {rand_ball(rng), {{u(rng), u(rng), u(rng)}}, s};
}

SystemParams pseudo_params(std::mt19937_64& rng, Curvature src, double s) {
    std::uniform_real_distribution<double> uc(-1.0, 1.0), ur(0.8, 1.4);
    SystemParams P;
    P.curvature = src;
    P.delta_omega_sq = uc(rng);
    P.eps_el = uc(rng);
    P.gamma = uc(rng);
    P.R0 = ur(rng);
    P.s = s;
    return P;
}

}  // namespace

TEST_CASE("parabolic chart") {
    const double r0 = 1.3;
    SECTION("xi = eta = 0 maps to the origin") {
        const auto q = sep::from_parabolic(0.0, 0.0, 0.4, r0);
        REQUIRE(norm(q) == 0.0);
    }
    SECTION("round trip on 500 random chart points") {
        std::mt19937_64 rng(31);
        for (int i = 0; i < 500; ++i) {
            const auto q = rand_ball(rng, 0.0);
            const auto c = sep::to_parabolic(q, r0);
            const auto q2 = sep::from_parabolic(c.xi, c.eta, c.phi, r0);
            for (int k = 0; k < 3; ++k) REQUIRE(q2[k] == Catch::Approx(q[k]).margin(1e-10));
        }
    }
    SECTION("phi equals atan2(q2, q1)") {
        std::mt19937_64 rng(32);
        for (int i = 0; i < 100; ++i) {
            const auto q = rand_ball(rng);
            REQUIRE(sep::to_parabolic(q, r0).phi ==
                    Catch::Approx(std::atan2(q[1], q[0])).margin(1e-12));
        }
    }
    SECTION("axis points flagged with phi = 0") {
        const auto c = sep::to_parabolic({{0, 0, 0.4}}, r0);
        REQUIRE(c.axis_degenerate);
        REQUIRE(c.phi == 0.0);
    }
    SECTION("the chart stays inside the ball for any xi, eta") {
        std::mt19937_64 rng(33);
        std::uniform_real_distribution<double> u(0.0, 50.0);
        for (int i = 0; i < 200; ++i) {
            const auto q = sep::from_parabolic(u(rng), u(rng), 1.0, r0);
            REQUIRE(dot(q, q) < 1.0);
        }
    }
}

TEST_CASE("parabolic momenta") {
    const double r0 = 1.1;
    std::mt19937_64 rng(34);
    SECTION("p = 0 gives zero parabolic momenta; chi/zeta recorded") {
        const auto q = rand_ball(rng);
        const auto ps = sep::parabolic_momenta({q, {{0, 0, 0}}, 0.0}, r0);
        REQUIRE(ps.p_xi == 0.0);
        REQUIRE(ps.p_eta == 0.0);
        REQUIRE(ps.p_phi == 0.0);
        REQUIRE(ps.chi == Catch::Approx(std::asinh(ps.xi / r0)).margin(1e-12));
        REQUIRE(ps.zeta == Catch::Approx(std::asinh(ps.eta / r0)).margin(1e-12));
    }
    SECTION("p_phi is the gauged axial momentum and pairs canonically with phi") {
        const MonopoleTwisted6 tw{0.7};
        for (int i = 0; i < 50; ++i) {
            const auto x = rand_state(rng, 0.7);
            const auto ps = sep::parabolic_momenta(x, r0);
            const double expect =
                cross(x.q, x.p)[2] - x.s * (x.q[2] / norm(x.q) + 1.0);
            REQUIRE(ps.p_phi == Catch::Approx(expect).margin(1e-10));
        }
        // {phi, p_phi} = +1 under the twisted structure
        const auto x = rand_state(rng, 0.7);
        auto phi_obs = [](auto xs) { return micz::atan2(xs[1], xs[0]); };
        auto pphi_obs = [](auto xs) {
            using S = std::remove_cvref_t<decltype(xs[0])>;
            const auto x = Red3<S>::from_flat(xs);
            using micz::sqrt;
            using std::sqrt;
            return cross(x.q, x.p)[2] - 0.7 * (x.q[2] / sqrt(dot(x.q, x.q)) + 1.0);
        };
        const auto xr = x.real_view();
        REQUIRE(poisson_bracket(tw, phi_obs, pphi_obs, std::span<const double, 6>(xr)) ==
                Catch::Approx(1.0).margin(1e-9));
    }
    SECTION("{xi, p_xi} = 1 pulled back through the chart with s = 0") {
        const MonopoleTwisted6 tw{0.0};
        const double r0c = 1.3;
        auto xi_obs = [r0c](auto xs) {
            using S = std::remove_cvref_t<decltype(xs[0])>;
            const auto x = Red3<S>::from_flat(xs);
            using micz::sqrt;
            using std::sqrt;
            const S q2 = dot(x.q, x.q);
            const S Sw = r0c * (1.0 + q2) / (1.0 - q2);
            const S m = (x.q[0] * x.q[0] + x.q[1] * x.q[1]) * (Sw + r0c) * (Sw + r0c);
            const S d = 2.0 * Sw * (Sw + r0c) * x.q[2] / r0c;
            return 0.5 * (sqrt(d * d + 4.0 * m) + d);
        };
        auto pxi_obs = [r0c](auto xs) {
            using S = std::remove_cvref_t<decltype(xs[0])>;
            const auto x = Red3<S>::from_flat(xs);
            using micz::sqrt;
            using std::sqrt;
            const S q2 = dot(x.q, x.q);
            const S Sw = r0c * (1.0 + q2) / (1.0 - q2);
            const S m = (x.q[0] * x.q[0] + x.q[1] * x.q[1]) * (Sw + r0c) * (Sw + r0c);
            const S d = 2.0 * Sw * (Sw + r0c) * x.q[2] / r0c;
            const S rad = sqrt(d * d + 4.0 * m);
            const S xi = 0.5 * (rad + d);
            const S eta = 0.5 * (rad - d);
            const S phi = micz::atan2(x.q[1], x.q[0]);
            using D3 = Dual<S, 3>;
            const auto qd = sep::chart_point(D3::seed(xi, 0), D3::seed(eta, 1),
                                             D3::seed(phi, 2), r0c);
            S acc(0.0);
            for (int k = 0; k < 3; ++k) acc += x.p[k] * qd[k].d[0];
            return acc;
        };
        for (int i = 0; i < 30; ++i) {
            const auto x = rand_state(rng, 0.0);
            const auto xr = x.real_view();
            REQUIRE(poisson_bracket(tw, xi_obs, pxi_obs, std::span<const double, 6>(xr)) ==
                    Catch::Approx(1.0).margin(1e-9));
        }
    }
    SECTION("axis degeneracy raises") {
        REQUIRE_THROWS_AS(sep::parabolic_momenta({{{0, 0, 0.4}}, {{0, 0, 0}}, 0.0}, r0),
                          DegeneracyError);
    }
}

TEST_CASE("parabolic Hamiltonian equals the ball-chart Hamiltonian") {
    std::mt19937_64 rng(35);
    for (Curvature src : {Curvature::Sphere, Curvature::Pseudosphere}) {
        for (int i = 0; i < 100; ++i) {
            const double s = (i % 2 == 0) ? 0.0 : 0.8;
            const auto P = pseudo_params(rng, src, s);
            const auto x = rand_state(rng, s);
            const auto r6 = x.real_view();
            const auto red = Red3<double>::from_flat(std::span<const double, 6>(r6));
            const double E = curved::h_micz_pseudo(red, s, P);
            const auto ps = sep::parabolic_momenta(x, P.r0());
            REQUIRE(sep::h_micz_parabolic(ps, P) == Catch::Approx(E).margin(1e-9));
        }
    }
}

TEST_CASE("zero couplings and momenta: H vanishes for any xi, eta") {
    SystemParams P;
    P.curvature = Curvature::Pseudosphere;
    P.R0 = 1.2;
    sep::ParabolicState ps;
    ps.xi = 0.7;
    ps.eta = 1.9;
    REQUIRE(sep::h_micz_parabolic(ps, P) == 0.0);
}

TEST_CASE("separation constant") {
    std::mt19937_64 rng(36);
    SECTION("free point: beta = 0") {
        SystemParams P;
        P.curvature = Curvature::Pseudosphere;
        P.R0 = 1.0;
        sep::ParabolicState ps;
        ps.xi = 1.0;
        ps.eta = 1.0;
        const auto rec = sep::separation_constant(ps, P, 0.0);
        REQUIRE(rec.beta_xi == Catch::Approx(0.0).margin(1e-14));
        REQUIRE(rec.beta_eta == Catch::Approx(0.0).margin(1e-14));
    }
    SECTION("xi-side equals eta-side on 200 on-shell states") {
        for (int i = 0; i < 200; ++i) {
            const double s = (i % 2 == 0) ? 0.0 : -0.6;
            const auto P = pseudo_params(rng, Curvature::Pseudosphere, s);
            const auto x = rand_state(rng, s);
            const auto ps = sep::parabolic_momenta(x, P.r0());
            const double E = sep::h_micz_parabolic(ps, P);
            const auto rec = sep::separation_constant(ps, P, E);
            REQUIRE(rec.beta_xi == Catch::Approx(rec.beta_eta).margin(1e-8));
        }
    }
    SECTION("off-shell energy violates the contract") {
        const auto P = pseudo_params(rng, Curvature::Pseudosphere, 0.0);
        const auto x = rand_state(rng, 0.0);
        const auto ps = sep::parabolic_momenta(x, P.r0());
        const double E = sep::h_micz_parabolic(ps, P);
        REQUIRE_THROWS_AS(sep::separation_constant(ps, P, E + 1e-3), ContractError);
    }
}

TEST_CASE("chi/zeta forms") {
    std::mt19937_64 rng(37);
    SECTION("residuals vanish whenever the xi/eta equations hold") {
        for (int i = 0; i < 100; ++i) {
            const double s = (i % 2 == 0) ? 0.0 : 0.5;
            const auto P = pseudo_params(rng, Curvature::Pseudosphere, s);
            const auto x = rand_state(rng, s);
            const auto ps = sep::parabolic_momenta(x, P.r0());
            const double E = sep::h_micz_parabolic(ps, P);
            const auto rec = sep::separation_constant(ps, P, E);
            const auto cz = sep::hj_residual_chi_zeta(ps, P, E, rec.beta_xi);
            REQUIRE(cz.chi <= 1e-8);
            REQUIRE(cz.zeta <= 1e-8);
        }
    }
    SECTION("the energy bookkeeping term balances exactly for momentum-free states") {
        SystemParams P;
        P.curvature = Curvature::Pseudosphere;
        P.R0 = 1.1;
        P.gamma = 0.9;  // only the Kepler coupling, so E != 0 but p = 0
        std::mt19937_64 r2(38);
        const auto q = rand_ball(r2);
        const auto ps = sep::parabolic_momenta({q, {{0, 0, 0}}, 0.0}, P.r0());
        const double E = sep::h_micz_parabolic(ps, P);
        const auto rec = sep::separation_constant(ps, P, E);
        const auto cz = sep::hj_residual_chi_zeta(ps, P, E, rec.beta_xi);
        REQUIRE(cz.chi <= 1e-12);
        REQUIRE(cz.zeta <= 1e-12);
    }
    SECTION("chi = 0 is a coordinate singularity") {
        SystemParams P;
        P.curvature = Curvature::Pseudosphere;
        sep::ParabolicState ps;  // xi = eta = 0
        REQUIRE_THROWS_AS(sep::hj_residual_chi_zeta(ps, P, 0.0, 0.0), std::exception);
    }
}

TEST_CASE("H, p_phi, beta pairwise in involution") {
    std::mt19937_64 rng(39);
    for (int i = 0; i < 50; ++i) {
        const double s = (i % 2 == 0) ? 0.0 : 0.45;
        const auto P = pseudo_params(rng, Curvature::Pseudosphere, s);
        const MonopoleTwisted6 tw{s};
        auto H = [P, s](auto xs) {
            using S = std::remove_cvref_t<decltype(xs[0])>;
            return curved::h_micz_pseudo(Red3<S>::from_flat(xs), s, P);
        };
        auto pphi = [s](auto xs) {
            using S = std::remove_cvref_t<decltype(xs[0])>;
            const auto x = Red3<S>::from_flat(xs);
            using micz::sqrt;
            using std::sqrt;
            return cross(x.q, x.p)[2] - s * (x.q[2] / sqrt(dot(x.q, x.q)) + 1.0);
        };
        auto beta = [P, s](auto xs) {
            using S = std::remove_cvref_t<decltype(xs[0])>;
            return lab::beta_invariant(Red3<S>::from_flat(xs), s, P);
        };
        const auto x = rand_state(rng, s);
        const auto xr = x.real_view();
        const std::span<const double, 6> xs(xr);
        REQUIRE(std::abs(poisson_bracket(tw, H, pphi, xs)) <= 1e-9);
        REQUIRE(std::abs(poisson_bracket(tw, H, beta, xs)) <= 1e-9);
        REQUIRE(std::abs(poisson_bracket(tw, pphi, beta, xs)) <= 1e-9);
    }
}

TEST_CASE("to_parabolic rejects points outside the ball") {
    REQUIRE_THROWS_AS(sep::to_parabolic({{0.8, 0.8, 0.3}}, 1.0), DomainError);
}
