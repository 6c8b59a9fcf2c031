#pragma once

// Runtime system table: phase dimension, Hamiltonian, claimed constants of
// motion, admissible-state samplers and domain guards for each of the seven
// systems.

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "miczlab/core/bracket.hpp"
#include "miczlab/core/state.hpp"
#include "miczlab/dynamics/integrate.hpp"
#include "miczlab/systems/curved.hpp"
#include "miczlab/systems/flat.hpp"

namespace micz::lab {

enum class SystemId {
    OscIso,
    OscAniso,
    Higgs,
    HiggsAniso,
    MiczFlat,
    MiczPseudo,
    MiczSphere,
};

inline std::string system_name(SystemId id) {
    switch (id) {
        case SystemId::OscIso: return "osc-iso";
        case SystemId::OscAniso: return "osc-aniso";
        case SystemId::Higgs: return "higgs";
        case SystemId::HiggsAniso: return "higgs-aniso";
        case SystemId::MiczFlat: return "micz-flat";
        case SystemId::MiczPseudo: return "micz-pseudo";
        case SystemId::MiczSphere: return "micz-sphere";
    }
    return "?";
}

inline std::optional<SystemId> parse_system(const std::string& s) {
    for (SystemId id : {SystemId::OscIso, SystemId::OscAniso, SystemId::Higgs,
                        SystemId::HiggsAniso, SystemId::MiczFlat, SystemId::MiczPseudo,
                        SystemId::MiczSphere})
        if (system_name(id) == s) return id;
    return std::nullopt;
}

inline bool is_reduced(SystemId id) {
    return id == SystemId::MiczFlat || id == SystemId::MiczPseudo || id == SystemId::MiczSphere;
}

inline bool is_deformed(SystemId id) {
    return id == SystemId::OscAniso || id == SystemId::HiggsAniso || is_reduced(id);
}

template <class F>
auto on_phase4(F f, const SystemParams& P) {
    return [f, P](auto xs) {
        using S = std::remove_cvref_t<decltype(xs[0])>;
        return f(Phase4<S>::from_flat(xs), P);
    };
}

template <class F>
auto on_red3(F f, const SystemParams& P) {
    return [f, P](auto xs) {
        using S = std::remove_cvref_t<decltype(xs[0])>;
        return f(Red3<S>::from_flat(xs), P.s, P);
    };
}

inline Observable<8> hamiltonian8(SystemId id, const SystemParams& P) {
    switch (id) {
        case SystemId::OscIso:
            return Observable<8>::make("H", on_phase4([](const auto& x, const SystemParams& p) {
                                           return flat::h_iso(x, p);
                                       }, P));
        case SystemId::OscAniso:
            return Observable<8>::make("H", on_phase4([](const auto& x, const SystemParams& p) {
                                           return flat::h_aniso(x, p);
                                       }, P));
        case SystemId::Higgs:
            return Observable<8>::make("H", on_phase4([](const auto& x, const SystemParams& p) {
                                           return curved::h_higgs(x, p);
                                       }, P));
        case SystemId::HiggsAniso:
            return Observable<8>::make("H", on_phase4([](const auto& x, const SystemParams& p) {
                                           return curved::h_higgs_aniso(x, p);
                                       }, P));
        default: throw ContractError("hamiltonian8 called for a reduced system");
    }
}

inline Observable<6> hamiltonian6(SystemId id, const SystemParams& P) {
    switch (id) {
        case SystemId::MiczFlat:
            return Observable<6>::make("H", on_red3([](const auto& x, double s, const SystemParams& p) {
                                           return flat::h_micz(x, s, p);
                                       }, P));
        case SystemId::MiczPseudo:
            return Observable<6>::make("H", on_red3([](const auto& x, double s, const SystemParams& p) {
                                           return curved::h_micz_pseudo(x, s, p);
                                       }, P));
        case SystemId::MiczSphere:
            return Observable<6>::make("H", on_red3([](const auto& x, double s, const SystemParams& p) {
                                           return curved::h_micz_sphere(x, s, p);
                                       }, P));
        default: throw ContractError("hamiltonian6 called for a 4D system");
    }
}

// Claimed constants of motion per system. Entries flagged undeformed_only are
// asserted only when delta_omega_sq = eps_el = 0.
inline std::vector<Observable<8>> constants8(SystemId id, const SystemParams& P,
                                             bool undeformed_extras) {
    std::vector<Observable<8>> out;
    auto jrot = [](int i) {
        return [i](const auto& x, const SystemParams&) { return flat::j_rot(x, i); };
    };
    out.push_back(Observable<8>::make(
        "J", on_phase4([](const auto& x, const SystemParams&) { return flat::j_u1(x); }, P)));
    const bool iso_family = (id == SystemId::OscIso || id == SystemId::Higgs);
    if (iso_family || undeformed_extras) {
        for (int i = 0; i < 3; ++i)
            out.push_back(Observable<8>::make("J" + std::to_string(i + 1),
                                              on_phase4(jrot(i), P)));
        for (int i = 0; i < 3; ++i) {
            if (id == SystemId::OscIso || id == SystemId::OscAniso)
                out.push_back(Observable<8>::make(
                    "A" + std::to_string(i + 1),
                    on_phase4([i](const auto& x, const SystemParams& p) {
                        return flat::a_hidden_vec(x, p, i);
                    }, P)));
            else
                out.push_back(Observable<8>::make(
                    "A" + std::to_string(i + 1),
                    on_phase4([i](const auto& x, const SystemParams& p) {
                        return curved::a_hidden_vec(x, p, i);
                    }, P)));
        }
    } else {
        out.push_back(Observable<8>::make("J3", on_phase4(jrot(2), P)));
        if (id == SystemId::OscAniso)
            out.push_back(Observable<8>::make(
                "A-hidden", on_phase4([](const auto& x, const SystemParams& p) {
                    return flat::a_hidden(x, p);
                }, P)));
        else
            out.push_back(Observable<8>::make(
                "A-hidden", on_phase4([](const auto& x, const SystemParams& p) {
                    return curved::a_hidden(x, p);
                }, P)));
    }
    return out;
}

inline std::vector<Observable<6>> constants6(SystemId id, const SystemParams& P,
                                             bool undeformed_extras) {
    std::vector<Observable<6>> out;
    auto j3 = on_red3([](const auto& x, double s, const SystemParams&) {
        return flat::j_vec(x, s)[2];
    }, P);
    out.push_back(Observable<6>::make("J3", j3));
    if (id == SystemId::MiczFlat)
        out.push_back(Observable<6>::make(
            "A-hidden", on_red3([](const auto& x, double s, const SystemParams& p) {
                return flat::a_hidden_micz(x, s, p);
            }, P)));
    else if (id == SystemId::MiczPseudo)
        out.push_back(Observable<6>::make(
            "A-hidden", on_red3([](const auto& x, double s, const SystemParams& p) {
                return curved::a_hidden_pseudo(x, s, p);
            }, P)));
    else
        out.push_back(Observable<6>::make(
            "A-hidden", on_red3([](const auto& x, double s, const SystemParams& p) {
                return curved::a_hidden_sphere(x, s, p);
            }, P)));
    if (undeformed_extras) {
        for (int i = 0; i < 2; ++i)
            out.push_back(Observable<6>::make(
                "J" + std::to_string(i + 1),
                on_red3([i](const auto& x, double s, const SystemParams&) {
                    return flat::j_vec(x, s)[i];
                }, P)));
        for (int i = 0; i < 3; ++i) {
            if (id == SystemId::MiczFlat)
                out.push_back(Observable<6>::make(
                    "RL" + std::to_string(i + 1),
                    on_red3([i](const auto& x, double s, const SystemParams& p) {
                        return flat::runge_lenz(x, s, p)[i];
                    }, P)));
            else {
                const auto sheet = id == SystemId::MiczPseudo ? curved::Sheet::Pseudo
                                                              : curved::Sheet::Sphere;
                out.push_back(Observable<6>::make(
                    "RL" + std::to_string(i + 1),
                    on_red3([i, sheet](const auto& x, double s, const SystemParams& p) {
                        return curved::runge_lenz(x, s, p, sheet)[i];
                    }, P)));
            }
        }
    }
    return out;
}

// ---- admissible-state samplers (safe sub-domains, recorded in summaries) ----

struct SampleBounds {
    double q_min = 0.1;   // reduced systems: |q| >= q_min
    double q2_max = 0.8;  // pseudosphere targets / 4D charts: q^2 (or z zbar) <= q2_max
    double comp_max = 1.0;
};

inline PhasePoint4C sample_phase4(std::mt19937_64& rng, SystemId id, const SampleBounds& b) {
    std::uniform_real_distribution<double> u(-b.comp_max, b.comp_max);
    for (;;) {
        PhasePoint4C x;
        x.z = {std::complex<double>{u(rng), u(rng)}, std::complex<double>{u(rng), u(rng)}};
        x.pi = {std::complex<double>{u(rng), u(rng)}, std::complex<double>{u(rng), u(rng)}};
        const double t = x.zz_bar();
        const bool curved_sys = (id == SystemId::Higgs || id == SystemId::HiggsAniso);
        if (curved_sys && (t > b.q2_max || t < 1e-3)) continue;
        return x;
    }
}

inline ReducedPoint3 sample_red3(std::mt19937_64& rng, SystemId id, const SystemParams& P,
                                 const SampleBounds& b) {
    std::uniform_real_distribution<double> u(-b.comp_max, b.comp_max);
    for (;;) {
        ReducedPoint3 x;
        x.q = {{u(rng), u(rng), u(rng)}};
        x.p = {{u(rng), u(rng), u(rng)}};
        x.s = P.s;
        const double q2 = dot(x.q, x.q);
        if (q2 < b.q_min * b.q_min) continue;
        if (id == SystemId::MiczPseudo && q2 > b.q2_max) continue;
        return x;
    }
}

// distance to the nearest guarded boundary, for trajectory halting
inline dyn::Guard<8> guard8(SystemId id) {
    if (id == SystemId::OscIso || id == SystemId::OscAniso) return nullptr;
    return [](const std::array<double, 8>& x) {
        const auto p = PhasePoint4C::from_real(std::span<const double, 8>(x));
        return std::abs(1.0 - p.zz_bar());
    };
}

inline dyn::Guard<6> guard6(SystemId id) {
    if (id == SystemId::MiczPseudo)
        return [](const std::array<double, 6>& x) {
            const double q2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            return std::min(std::sqrt(q2), 1.0 - q2);
        };
    return [](const std::array<double, 6>& x) {
        return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    };
}

inline std::vector<std::string> state_labels(int dim) {
    if (dim == 8)
        return {"re_z1", "im_z1", "re_z2", "im_z2", "re_pi1", "im_pi1", "re_pi2", "im_pi2"};
    return {"q1", "q2", "q3", "p1", "p2", "p3"};
}

}  // namespace micz::lab
