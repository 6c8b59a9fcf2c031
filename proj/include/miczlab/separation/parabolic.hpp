#pragma once

// Generalized parabolic coordinates on the 3D pseudosphere:
//   S  = sqrt((P + xi eta + r0^2)/2),   P = sqrt((r0^2+xi^2)(r0^2+eta^2))
//   q1 + i q2 = sqrt(xi eta) e^{i phi}/(r0 + S)
//   q3        = r0 (xi - eta)/(2 S (r0 + S))
// which gives q^2 = (S - r0)/(S + r0) < 1 (the chart covers the ball) and
// pulls the conformal metric back to
//   ds^2 = r0^2 (xi+eta)/4 (dxi^2/(xi(r0^2+xi^2)) + deta^2/(eta(r0^2+eta^2))) + xi eta dphi^2.
//
// Momenta: p_xi, p_eta are chart pullbacks; the azimuthal momentum carries the
// monopole gauge p_phi = (q x p)_3 - s(q3/q + 1), the choice conserved along
// the realized flows ({phi, p_phi} = +1).

#include <cmath>

#include "miczlab/core/dual.hpp"
#include "miczlab/core/errors.hpp"
#include "miczlab/core/state.hpp"
#include "miczlab/systems/curved.hpp"

namespace micz::sep {

struct ParabolicCoords {
    double xi = 0.0, eta = 0.0, phi = 0.0;
    bool axis_degenerate = false;
};

struct ParabolicState {
    double xi = 0.0, eta = 0.0, phi = 0.0;
    double p_xi = 0.0, p_eta = 0.0, p_phi = 0.0;
    double chi = 0.0, zeta = 0.0;  // xi = r0 sinh(chi), eta = r0 sinh(zeta)
    bool axis_degenerate = false;
};

template <class S>
Vec3<S> chart_point(const S& xi, const S& eta, const S& phi, double r0) {
    using micz::cos;
    using micz::sin;
    using micz::sqrt;
    using std::cos;
    using std::sin;
    using std::sqrt;
    const S Pp = sqrt((r0 * r0 + xi * xi) * (r0 * r0 + eta * eta));
    const S Sw = sqrt(0.5 * (Pp + xi * eta + r0 * r0));
    const S den = 1.0 / (Sw + r0);
    const S rho = sqrt(xi * eta) * den;
    return {{rho * cos(phi), rho * sin(phi), r0 * (xi - eta) * den / (2.0 * Sw)}};
}

inline Vec3d from_parabolic(double xi, double eta, double phi, double r0) {
    if (xi < 0.0 || eta < 0.0) throw DomainError("parabolic coordinates require xi, eta >= 0");
    return chart_point(xi, eta, phi, r0);
}

inline ParabolicCoords to_parabolic(const Vec3d& q, double r0) {
    const double q2 = dot(q, q);
    if (q2 >= 1.0 - kBoundaryMargin)
        throw DomainError("pseudosphere target chart requires q^2 < 1");
    const double Sw = r0 * (1.0 + q2) / (1.0 - q2);
    const double m = (q[0] * q[0] + q[1] * q[1]) * (Sw + r0) * (Sw + r0);
    const double d = 2.0 * Sw * (Sw + r0) * q[2] / r0;
    const double rad = std::sqrt(d * d + 4.0 * m);
    ParabolicCoords c;
    c.xi = 0.5 * (rad + d);
    c.eta = 0.5 * (rad - d);
    c.axis_degenerate = (q[0] * q[0] + q[1] * q[1]) < 1e-20;
    c.phi = c.axis_degenerate ? 0.0 : std::atan2(q[1], q[0]);
    return c;
}

// Chart Jacobian by exact differentiation; columns are d q/d(xi,eta,phi).
inline std::array<Vec3d, 3> chart_jacobian(double xi, double eta, double phi, double r0) {
    using D = Dual<double, 3>;
    const D xid = D::seed(xi, 0), etad = D::seed(eta, 1), phid = D::seed(phi, 2);
    const Vec3<D> qd = chart_point(xid, etad, phid, r0);
    std::array<Vec3d, 3> J;
    for (int k = 0; k < 3; ++k)
        J[k] = {{qd[0].d[k], qd[1].d[k], qd[2].d[k]}};
    return J;
}

inline ParabolicState parabolic_momenta(const ReducedPoint3& x, double r0) {
    if (x.q[0] * x.q[0] + x.q[1] * x.q[1] <= 1e-20)
        throw DegeneracyError("parabolic momenta undefined on the q3-axis (phi degenerate)");
    const auto c = to_parabolic(x.q, r0);
    if (c.xi <= 1e-10 || c.eta <= 1e-10)
        throw DegeneracyError("parabolic momenta require xi, eta > 0");
    const auto J = chart_jacobian(c.xi, c.eta, c.phi, r0);
    const double det = dot(J[0], cross(J[1], J[2]));
    if (std::abs(det) < 1e-14) throw DegeneracyError("singular parabolic chart Jacobian");
    ParabolicState ps;
    ps.xi = c.xi;
    ps.eta = c.eta;
    ps.phi = c.phi;
    ps.axis_degenerate = c.axis_degenerate;
    ps.p_xi = dot(x.p, J[0]);
    ps.p_eta = dot(x.p, J[1]);
    const double qn = norm(x.q);
    ps.p_phi = dot(x.p, J[2]) - x.s * (x.q[2] / qn + 1.0);
    ps.chi = std::asinh(c.xi / r0);
    ps.zeta = std::asinh(c.eta / r0);
    return ps;
}

// H in parabolic coordinates (source-curvature sign eps = params.eps()):
//   [2 xi (r0^2+xi^2) p_xi^2 + 2 eta (r0^2+eta^2) p_eta^2]/(r0^2 (xi+eta)) + p_phi^2/(2 xi eta)
// + (s p_phi + s^2)[(r0 - Rxi)/xi + (r0 + Reta)/eta]/(r0 (xi+eta))
// + dw2/(2 r0) (xi Rxi - eta Reta - eps(xi^2 - eta^2))/(xi+eta)
// - gamma (Rxi + Reta)/(r0 (xi+eta)) + eps_el (xi - eta)/2,  R* = sqrt(r0^2 + *^2)
inline double h_micz_parabolic(const ParabolicState& ps, const SystemParams& P) {
    if (ps.xi < kBoundaryMargin || ps.eta < kBoundaryMargin)
        throw DomainError("parabolic Hamiltonian requires xi, eta > 0");
    const double r0 = P.r0();
    const double eps = P.eps();
    const double s = P.s;
    const double rxi = std::sqrt(r0 * r0 + ps.xi * ps.xi);
    const double reta = std::sqrt(r0 * r0 + ps.eta * ps.eta);
    const double sum = ps.xi + ps.eta;
    const double kin = (2.0 * ps.xi * (r0 * r0 + ps.xi * ps.xi) * ps.p_xi * ps.p_xi +
                        2.0 * ps.eta * (r0 * r0 + ps.eta * ps.eta) * ps.p_eta * ps.p_eta) /
                           (r0 * r0 * sum) +
                       ps.p_phi * ps.p_phi / (2.0 * ps.xi * ps.eta);
    const double mono = (s * ps.p_phi + s * s) / (r0 * sum) *
                        ((r0 - rxi) / ps.xi + (r0 + reta) / ps.eta);
    const double dw = P.delta_omega_sq / (2.0 * r0) *
                      (ps.xi * rxi - ps.eta * reta - eps * (ps.xi * ps.xi - ps.eta * ps.eta)) / sum;
    const double kep = -P.gamma * (rxi + reta) / (r0 * sum);
    const double lin = 0.5 * P.eps_el * (ps.xi - ps.eta);
    return kin + mono + dw + kep + lin;
}

struct SeparationRecord {
    double beta_xi = 0.0;
    double beta_eta = 0.0;
    double energy = 0.0;
};

// The (xi+eta)-split of (H - E): the xi-side defines beta, the eta-side -beta.
inline SeparationRecord separation_constant(const ParabolicState& ps, const SystemParams& P,
                                            double E) {
    if (std::abs(E - h_micz_parabolic(ps, P)) > 1e-9)
        throw ContractError("separation constant requested off-shell (E != H)");
    const double r0 = P.r0();
    const double eps = P.eps();
    const double s = P.s;
    const double rxi = std::sqrt(r0 * r0 + ps.xi * ps.xi);
    const double reta = std::sqrt(r0 * r0 + ps.eta * ps.eta);
    const double f_xi = 2.0 * ps.xi * (r0 * r0 + ps.xi * ps.xi) * ps.p_xi * ps.p_xi / (r0 * r0) +
                        (s * ps.p_phi + s * s) * (r0 - rxi) / (r0 * ps.xi) +
                        P.delta_omega_sq / (2.0 * r0) * (ps.xi * rxi - eps * ps.xi * ps.xi) -
                        P.gamma * rxi / r0 + 0.5 * P.eps_el * ps.xi * ps.xi - E * ps.xi +
                        ps.p_phi * ps.p_phi / (2.0 * ps.xi);
    const double f_eta = 2.0 * ps.eta * (r0 * r0 + ps.eta * ps.eta) * ps.p_eta * ps.p_eta / (r0 * r0) +
                         (s * ps.p_phi + s * s) * (r0 + reta) / (r0 * ps.eta) -
                         P.delta_omega_sq / (2.0 * r0) * (ps.eta * reta - eps * ps.eta * ps.eta) -
                         P.gamma * reta / r0 - 0.5 * P.eps_el * ps.eta * ps.eta - E * ps.eta +
                         ps.p_phi * ps.p_phi / (2.0 * ps.eta);
    return {f_xi, -f_eta, E};
}

struct ChiZetaResidual {
    double chi = 0.0;
    double zeta = 0.0;
};

// The same two equations after xi = r0 sinh(chi), eta = r0 sinh(zeta), with
// p_chi = r0 cosh(chi) p_xi and p_zeta = r0 cosh(zeta) p_eta:
//   p_chi^2  = E r0^2/2 + beta r0/(2 sh) + gamma r0 ch/(2 sh) + (s p_phi + s^2)/(2(1+ch))
//              - dw2 r0^2 (ch - eps sh)/4 - eps_el r0^3 sh/4 - p_phi^2/(4 sh^2)
//   p_zeta^2 = E r0^2/2 - beta r0/(2 sh) + gamma r0 ch/(2 sh) - (s p_phi + s^2)/(2(ch-1))
//              + dw2 r0^2 (ch - eps sh)/4 + eps_el r0^3 sh/4 - p_phi^2/(4 sh^2)
inline ChiZetaResidual hj_residual_chi_zeta(const ParabolicState& ps, const SystemParams& P,
                                            double E, double beta) {
    if (std::abs(E - h_micz_parabolic(ps, P)) > 1e-9)
        throw ContractError("chi/zeta residual requested off-shell (E != H)");
    if (ps.chi < kBoundaryMargin || ps.zeta < kBoundaryMargin)
        throw DomainError("chi/zeta form undefined at the coordinate singularity chi = 0");
    const double r0 = P.r0();
    const double eps = P.eps();
    const double s = P.s;
    auto side = [&](double angle, double pmom, double sign) {
        const double sh = std::sinh(angle), ch = std::cosh(angle);
        const double pang = r0 * ch * pmom;
        const double mono = (s * ps.p_phi + s * s) /
                            (sign > 0 ? 2.0 * (1.0 + ch) : -2.0 * (ch - 1.0));
        const double rhs = 0.5 * E * r0 * r0 + sign * beta * r0 / (2.0 * sh) +
                           P.gamma * r0 * ch / (2.0 * sh) + mono -
                           sign * 0.25 * P.delta_omega_sq * r0 * r0 * (ch - eps * sh) -
                           sign * 0.25 * P.eps_el * r0 * r0 * r0 * sh -
                           ps.p_phi * ps.p_phi / (4.0 * sh * sh);
        return std::abs(pang * pang - rhs);
    };
    return {side(ps.chi, ps.p_xi, +1.0), side(ps.zeta, ps.p_eta, -1.0)};
}

}  // namespace micz::sep
