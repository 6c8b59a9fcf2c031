#pragma once

// Trajectory integration of Hamiltonian vector fields with conservation-drift
// accounting. Fixed-step RK4 (order checks, reversal tests) and adaptive
// Dormand-Prince 5(4) with a standard step controller. Domain boundaries are
// guarded: trajectories end with an explicit event, never with a non-finite
// state.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "miczlab/core/bracket.hpp"
#include "miczlab/core/errors.hpp"

namespace micz::dyn {

enum class Method { RK4Fixed, RK45Adaptive };
enum class StopReason { Completed, BoundaryGuard, MaxSteps, StepUnderflow };

inline std::string stop_reason_name(StopReason r) {
    switch (r) {
        case StopReason::Completed: return "completed";
        case StopReason::BoundaryGuard: return "boundary-guard";
        case StopReason::MaxSteps: return "max-steps";
        case StopReason::StepUnderflow: return "step-underflow";
    }
    return "?";
}

struct IntegratorConfig {
    Method method = Method::RK45Adaptive;
    double step = 1e-3;    // RK4Fixed
    double rtol = 1e-10;   // RK45Adaptive
    double atol = 1e-12;
    double t_end = 10.0;
    long max_steps = 2'000'000;
    double guard_margin = 1e-6;  // distance-to-boundary threshold

    void validate() const {
        if (step <= 0 || rtol <= 0 || atol <= 0 || guard_margin <= 0 || max_steps <= 0)
            throw ContractError("integrator config requires positive step/tolerances/margins");
    }
};

template <int N>
struct Trajectory {
    std::vector<double> times;
    std::vector<std::array<double, N>> states;
    std::vector<std::string> observable_names;
    std::vector<std::vector<double>> observables;  // row per step
    StopReason stop = StopReason::Completed;

    size_t size() const { return times.size(); }
};

struct DriftRow {
    std::string name;
    double initial = 0.0;
    double max_abs = 0.0;
    double mean_abs = 0.0;
    double max_rel = 0.0;  // max_abs / max(|initial|, 1)
};

template <int N>
std::vector<DriftRow> drift_report(const Trajectory<N>& tr) {
    std::vector<DriftRow> rows;
    if (tr.observable_names.empty() || tr.observables.empty()) return rows;
    const auto& first = tr.observables.front();
    for (size_t k = 0; k < tr.observable_names.size(); ++k) {
        DriftRow row;
        row.name = tr.observable_names[k];
        row.initial = first[k];
        double acc = 0.0;
        for (const auto& r : tr.observables) {
            const double d = std::abs(r[k] - first[k]);
            row.max_abs = std::max(row.max_abs, d);
            acc += d;
        }
        row.mean_abs = acc / static_cast<double>(tr.observables.size());
        row.max_rel = row.max_abs / std::max(std::abs(row.initial), 1.0);
        rows.push_back(row);
    }
    return rows;
}

template <int N>
using Field = std::function<std::array<double, N>(const std::array<double, N>&)>;
// Distance to the nearest domain boundary; <= guard_margin halts the run.
template <int N>
using Guard = std::function<double(const std::array<double, N>&)>;

namespace detail {

template <std::size_t N>
std::array<double, N> axpy(const std::array<double, N>& x, double a,
                           const std::array<double, N>& y) {
    std::array<double, N> r;
    for (std::size_t i = 0; i < N; ++i) r[i] = x[i] + a * y[i];
    return r;
}

template <std::size_t N>
std::array<double, N> rk4_step(const Field<N>& f, const std::array<double, N>& x, double h) {
    const auto k1 = f(x);
    const auto k2 = f(axpy(x, h / 2, k1));
    const auto k3 = f(axpy(x, h / 2, k2));
    const auto k4 = f(axpy(x, h, k3));
    std::array<double, N> r;
    for (std::size_t i = 0; i < N; ++i)
        r[i] = x[i] + h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    return r;
}

// Dormand-Prince 5(4); returns the 5th-order state and the embedded error.
template <std::size_t N>
std::pair<std::array<double, N>, double> dopri_step(const Field<N>& f,
                                                    const std::array<double, N>& x, double h,
                                                    double rtol, double atol) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                            e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;
    const auto k1 = f(x);
    std::array<double, N> y;
    for (std::size_t i = 0; i < N; ++i) y[i] = x[i] + h * a21 * k1[i];
    const auto k2 = f(y);
    for (std::size_t i = 0; i < N; ++i) y[i] = x[i] + h * (a31 * k1[i] + a32 * k2[i]);
    const auto k3 = f(y);
    for (std::size_t i = 0; i < N; ++i) y[i] = x[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    const auto k4 = f(y);
    for (std::size_t i = 0; i < N; ++i)
        y[i] = x[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    const auto k5 = f(y);
    for (std::size_t i = 0; i < N; ++i)
        y[i] = x[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    const auto k6 = f(y);
    std::array<double, N> x5;
    for (std::size_t i = 0; i < N; ++i)
        x5[i] = x[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    const auto k7 = f(x5);
    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double x4 = x[i] + h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                      e6 * k6[i] + e7 * k7[i]);
        const double sc = atol + rtol * std::max(std::abs(x[i]), std::abs(x5[i]));
        const double d = (x5[i] - x4) / sc;
        err += d * d;
    }
    return {x5, std::sqrt(err / static_cast<double>(N))};
}

}  // namespace detail

template <int N>
Trajectory<N> integrate(const Field<N>& field, const std::array<double, N>& x0,
                        const IntegratorConfig& cfg,
                        const std::vector<Observable<N>>& watch = {},
                        const Guard<N>& guard = nullptr) {
    cfg.validate();
    Trajectory<N> tr;
    for (const auto& o : watch) tr.observable_names.push_back(o.name);
    auto record = [&](double t, const std::array<double, N>& x) {
        tr.times.push_back(t);
        tr.states.push_back(x);
        if (!watch.empty()) {
            std::vector<double> row;
            row.reserve(watch.size());
            for (const auto& o : watch)
                row.push_back(o.value(std::span<const double, N>(x)));
            tr.observables.push_back(row);
        }
    };

    std::array<double, N> x = x0;
    double t = 0.0;
    record(t, x);
    const double dir = cfg.t_end >= 0 ? 1.0 : -1.0;
    const double t_end = cfg.t_end;
    double h = cfg.method == Method::RK4Fixed ? dir * cfg.step
                                              : dir * std::min(cfg.step, std::abs(t_end) / 10);
    long steps = 0;

    while (dir * (t_end - t) > 1e-15 * std::max(1.0, std::abs(t_end))) {
        if (steps++ >= cfg.max_steps) {
            tr.stop = StopReason::MaxSteps;
            return tr;
        }
        if (dir * (t + h) > dir * t_end) h = t_end - t;
        if (cfg.method == Method::RK4Fixed) {
            std::array<double, N> xn;
            try {
                xn = detail::rk4_step<N>(field, x, h);
            } catch (const DomainError&) {
                tr.stop = StopReason::BoundaryGuard;
                return tr;
            }
            x = xn;
            t += h;
        } else {
            bool accepted = false;
            while (!accepted) {
                if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(t))) {
                    tr.stop = StopReason::StepUnderflow;
                    return tr;
                }
                try {
                    auto [xn, err] = detail::dopri_step<N>(field, x, h, cfg.rtol, cfg.atol);
                    if (err <= 1.0) {
                        x = xn;
                        t += h;
                        accepted = true;
                    }
                    const double fac =
                        std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
                    h *= fac;
                } catch (const DomainError&) {
                    h *= 0.5;  // trial state crossed a boundary; retry shorter
                }
            }
        }
        bool guarded = false;
        if (guard) {
            try {
                guarded = guard(x) <= cfg.guard_margin;
            } catch (const DomainError&) {
                guarded = true;
            }
        }
        record(t, x);
        if (guarded) {
            tr.stop = StopReason::BoundaryGuard;
            return tr;
        }
    }
    tr.stop = StopReason::Completed;
    return tr;
}

// Convenience: the Hamiltonian flow x' = {x, H} of a structure/Hamiltonian pair.
template <class P, class H>
Field<P::dim> hamiltonian_field(P structure, H h) {
    return [structure, h](const std::array<double, P::dim>& x) {
        return hamiltonian_vector_field(structure, h, std::span<const double, P::dim>(x));
    };
}

}  // namespace micz::dyn
