#pragma once

// Experiment execution: parses TOML configs, runs the configured task, and
// emits a JSON summary (plus CSV time series for simulate tasks). Summaries
// are byte-reproducible for a fixed seed up to the timestamp field.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "miczlab/dynamics/integrate.hpp"
#include "miczlab/ks/reduction.hpp"
#include "miczlab/lab/claims.hpp"
#include "miczlab/lab/systems.hpp"
#include "miczlab/lab/toml.hpp"
#include "miczlab/separation/parabolic.hpp"

namespace micz::lab {

using json = nlohmann::ordered_json;

struct ExperimentConfig {
    std::string task;
    SystemId system = SystemId::OscIso;
    bool has_system = false;
    SystemParams params;
    std::uint64_t seed = 0;
    int n_points = 100;
    std::string output_json = "summary.json";
    std::string output_csv = "trajectory.csv";
    std::vector<double> initial_state;  // empty -> sampled
    int initial_random = 1;             // number of sampled trajectories
    dyn::IntegratorConfig integrator;
    // flat-limit
    std::vector<double> limit_radii{2.0, 20.0, 200.0};
    std::vector<double> limit_state;  // 8 reals (u, w)
    // laplace
    std::vector<double> lb_steps{1e-2, 5e-3, 2.5e-3};
    int lb_points = 20;
    SampleBounds bounds;
};

inline Curvature parse_curvature(const std::string& s) {
    if (s == "flat") return Curvature::Flat;
    if (s == "sphere") return Curvature::Sphere;
    if (s == "pseudosphere") return Curvature::Pseudosphere;
    throw toml::ConfigError("field 'system.curvature' must be flat|sphere|pseudosphere");
}

inline ExperimentConfig parse_config(const toml::Table& t) {
    ExperimentConfig c;
    c.task = t.require<std::string>("task");
    const bool needs_system = (c.task == "check-brackets" || c.task == "simulate");
    if (t.has("system.id")) {
        const auto name = t.require<std::string>("system.id");
        const auto id = parse_system(name);
        if (!id) throw toml::ConfigError("field 'system.id': unknown system '" + name + "'");
        c.system = *id;
        c.has_system = true;
    } else if (needs_system) {
        throw toml::ConfigError("missing required field 'system.id'");
    }
    c.seed = static_cast<std::uint64_t>(t.require<double>("seed"));
    c.n_points = static_cast<int>(t.get_or<double>("n_points", 100.0));
    if (c.n_points <= 0) throw toml::ConfigError("field 'n_points' must be positive");

    c.params.omega = t.get_or<double>("system.omega", 1.0);
    c.params.delta_omega_sq = t.get_or<double>("system.delta_omega_sq", 0.0);
    c.params.eps_el = t.get_or<double>("system.eps_el", 0.0);
    c.params.R0 = t.get_or<double>("system.R0", 1.0);
    c.params.gamma = t.get_or<double>("system.gamma", 0.0);
    c.params.s = t.get_or<double>("system.s", 0.0);
    if (t.has("system.curvature"))
        c.params.curvature = parse_curvature(t.require<std::string>("system.curvature"));
    else if (c.has_system) {
        switch (c.system) {
            case SystemId::Higgs:
            case SystemId::HiggsAniso:
            case SystemId::MiczPseudo: c.params.curvature = Curvature::Pseudosphere; break;
            case SystemId::MiczSphere: c.params.curvature = Curvature::Sphere; break;
            default: c.params.curvature = Curvature::Flat; break;
        }
    }
    if ((c.task == "ks-verify" || c.task == "separation-verify" || c.task == "laplace-check" ||
         c.task == "flat-limit") &&
        c.params.curvature == Curvature::Flat && !t.has("system.curvature"))
        c.params.curvature = Curvature::Pseudosphere;

    c.output_json = t.get_or<std::string>("output", c.task + "-summary.json");
    c.output_csv = t.get_or<std::string>("csv", "trajectory.csv");
    c.initial_state = t.get_or<std::vector<double>>("initial.state", {});
    for (double v : c.initial_state)
        if (!std::isfinite(v))
            throw toml::ConfigError("field 'initial.state' must be finite");
    c.initial_random = static_cast<int>(t.get_or<double>("initial.random", 1.0));
    if (c.initial_random < 1) throw toml::ConfigError("field 'initial.random' must be >= 1");
    if (!c.initial_state.empty() && t.has("initial.random"))
        throw toml::ConfigError("fields 'initial.state' and 'initial.random' are exclusive");

    const auto method = t.get_or<std::string>("integrator.method", "rk45");
    if (method == "rk4") c.integrator.method = dyn::Method::RK4Fixed;
    else if (method == "rk45") c.integrator.method = dyn::Method::RK45Adaptive;
    else throw toml::ConfigError("field 'integrator.method' must be rk4|rk45");
    c.integrator.step = t.get_or<double>("integrator.step", 1e-3);
    c.integrator.rtol = t.get_or<double>("integrator.rtol", 1e-10);
    c.integrator.atol = t.get_or<double>("integrator.atol", 1e-12);
    c.integrator.t_end = t.get_or<double>("integrator.t_end", 10.0);
    c.integrator.max_steps = static_cast<long>(t.get_or<double>("integrator.max_steps", 2e6));
    c.integrator.guard_margin = t.get_or<double>("integrator.guard_margin", 1e-6);

    c.limit_radii = t.get_or<std::vector<double>>("flat_limit.radii", c.limit_radii);
    c.limit_state = t.get_or<std::vector<double>>("flat_limit.state", {});
    c.lb_steps = t.get_or<std::vector<double>>("laplace.h_values", c.lb_steps);
    c.lb_points = static_cast<int>(t.get_or<double>("laplace.n_points", 20.0));
    return c;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw toml::ConfigError("cannot read config file '" + path + "'");
    return parse_config(toml::parse(in));
}

// ---- summary plumbing ----

inline const Claim& claim_by_id(const std::string& id) {
    for (const auto& cl : claim_registry())
        if (cl.id == id) return cl;
    throw ContractError("unknown claim id '" + id + "'");
}

inline std::vector<std::string> adjudications_for(const std::string& anchor) {
    std::vector<std::string> out;
    for (const auto& a : adjudication_ledger())
        if (a.anchor == anchor) out.push_back(a.note);
    return out;
}

class SummaryBuilder {
  public:
    explicit SummaryBuilder(const ExperimentConfig& c) {
        j_["schema"] = "micz-lab/1";
        j_["task"] = c.task;
        if (c.has_system) j_["system"] = system_name(c.system);
        j_["seed"] = c.seed;
        j_["params"] = {{"omega", c.params.omega},
                        {"delta_omega_sq", c.params.delta_omega_sq},
                        {"eps_el", c.params.eps_el},
                        {"R0", c.params.R0},
                        {"curvature", curvature_name(c.params.curvature)},
                        {"gamma", c.params.gamma},
                        {"s", c.params.s}};
        j_["sampling"] = {{"q_min", c.bounds.q_min},
                          {"q2_max", c.bounds.q2_max},
                          {"component_max", c.bounds.comp_max}};
        j_["claims"] = json::array();
    }

    // pass semantics: "residual" value <= tol; "at-least" value >= tol;
    // "in-range" lo <= value <= hi.
    void add_residual(const std::string& id, double value, int n,
                      const json& extra = json::object()) {
        const Claim& cl = claim_by_id(id);
        push(cl, value, value <= cl.tolerance, "residual", n, extra);
    }
    void add_at_least(const std::string& id, double value, int n,
                      const json& extra = json::object()) {
        const Claim& cl = claim_by_id(id);
        push(cl, value, value >= cl.tolerance, "at-least", n, extra);
    }
    void add_in_range(const std::string& id, double value, double lo, double hi, int n,
                      const json& extra = json::object()) {
        const Claim& cl = claim_by_id(id);
        json e = extra;
        e["range"] = {lo, hi};
        push(cl, value, value >= lo && value <= hi, "in-range", n, e);
    }

    bool all_pass() const { return all_pass_; }

    json finish() {
        j_["adjudications"] = json::array();
        for (const auto& a : touched_) j_["adjudications"].push_back(a);
        j_["overall_pass"] = all_pass_;
        const auto now = std::chrono::system_clock::now();
        j_["timestamp"] =
            static_cast<long long>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                       now.time_since_epoch())
                                       .count());
        return j_;
    }

  private:
    void push(const Claim& cl, double value, bool pass, const std::string& kind, int n,
              const json& extra) {
        json e = {{"id", cl.id},       {"anchor", cl.anchor}, {"statement", cl.statement},
                  {"value", value},    {"tolerance", cl.tolerance}, {"kind", kind},
                  {"n_points", n},     {"pass", pass}};
        for (auto it = extra.begin(); it != extra.end(); ++it) e[it.key()] = it.value();
        const auto notes = adjudications_for(cl.anchor);
        if (!notes.empty()) {
            e["notes"] = notes;
            if (std::find(touched_.begin(), touched_.end(), cl.anchor) == touched_.end())
                touched_.push_back(cl.anchor);
        }
        j_["claims"].push_back(e);
        all_pass_ = all_pass_ && pass;
    }

    json j_;
    std::vector<std::string> touched_;
    bool all_pass_ = true;
};

// ---- task: check-brackets ----

template <int N, class P>
double bracket_residual_max(const P& structure, const Observable<N>& H,
                            const Observable<N>& C,
                            const std::vector<std::array<double, N>>& pts) {
    double worst = 0.0;
    for (const auto& x : pts) {
        const std::span<const double, N> xs(x);
        const double h = H.value(xs);
        const double cv = C.value(xs);
        const double scale = std::max({std::abs(h), std::abs(cv), 1.0});
        worst = std::max(worst, std::abs(poisson_bracket(structure, H, C, xs)) / scale);
    }
    return worst;
}

inline std::string claim_id_for_constant(SystemId id, const std::string& name) {
    const std::string sys = system_name(id);
    const bool iso_family = (id == SystemId::OscIso || id == SystemId::Higgs);
    if (name == "J") return sys + "/J";
    if (name == "A-hidden") return sys + "/A-hidden";
    if (name[0] == 'J') {
        if (iso_family) return sys + "/J-vec";
        if (name == "J3") return sys + "/J3";
        return is_reduced(id) ? sys + "/J-vec-undeformed" : sys + "/J-vec";
    }
    if (name[0] == 'A') return sys + "/A-vec";
    return sys + "/RL-undeformed";
}

inline void run_check_brackets(const ExperimentConfig& c, SummaryBuilder& sb) {
    std::mt19937_64 rng(c.seed);
    const bool undeformed =
        c.params.delta_omega_sq == 0.0 && c.params.eps_el == 0.0 && is_deformed(c.system);
    std::map<std::string, double> worst;
    if (!is_reduced(c.system)) {
        std::vector<std::array<double, 8>> pts;
        for (int i = 0; i < c.n_points; ++i)
            pts.push_back(sample_phase4(rng, c.system, c.bounds).real_view());
        const auto H = hamiltonian8(c.system, c.params);
        for (const auto& C : constants8(c.system, c.params, undeformed)) {
            const double r = bracket_residual_max<8>(CanonicalComplex8{}, H, C, pts);
            auto& w = worst[claim_id_for_constant(c.system, C.name)];
            w = std::max(w, r);
        }
    } else {
        std::vector<std::array<double, 6>> pts;
        for (int i = 0; i < c.n_points; ++i)
            pts.push_back(sample_red3(rng, c.system, c.params, c.bounds).real_view());
        const auto H = hamiltonian6(c.system, c.params);
        const MonopoleTwisted6 tw{c.params.s};
        for (const auto& C : constants6(c.system, c.params, undeformed)) {
            const double r = bracket_residual_max<6>(tw, H, C, pts);
            auto& w = worst[claim_id_for_constant(c.system, C.name)];
            w = std::max(w, r);
        }
    }
    for (const auto& [id, r] : worst) sb.add_residual(id, r, c.n_points);
}

// ---- task: simulate ----

template <int N>
void write_csv(const std::string& path, const dyn::Trajectory<N>& tr) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write CSV file '" + path + "'");
    out << std::setprecision(17);
    out << "t";
    for (const auto& lbl : state_labels(N)) out << "," << lbl;
    for (const auto& name : tr.observable_names) out << "," << name;
    out << "\n";
    for (size_t i = 0; i < tr.size(); ++i) {
        out << tr.times[i];
        for (double v : tr.states[i]) out << "," << v;
        if (!tr.observables.empty())
            for (double v : tr.observables[i]) out << "," << v;
        out << "\n";
    }
}

template <int N, class P>
dyn::Trajectory<N> simulate_system(const ExperimentConfig& c, const P& structure,
                                   const Observable<N>& H, std::vector<Observable<N>> watch,
                                   const std::array<double, N>& x0, const dyn::Guard<N>& guard) {
    watch.insert(watch.begin(), H);
    const auto field = dyn::hamiltonian_field(structure, H);
    return dyn::integrate<N>(field, x0, c.integrator, watch, guard);
}

inline json drift_json(const std::vector<dyn::DriftRow>& rows) {
    json out = json::array();
    for (const auto& r : rows)
        out.push_back({{"name", r.name},
                       {"initial", r.initial},
                       {"max_abs", r.max_abs},
                       {"mean_abs", r.mean_abs},
                       {"max_rel", r.max_rel}});
    return out;
}

inline std::string resolve_output(const std::string& path);

inline std::string csv_path_for(const std::string& base, int k, int total) {
    if (total == 1) return base;
    const auto dot = base.rfind('.');
    const std::string stem = dot == std::string::npos ? base : base.substr(0, dot);
    const std::string ext = dot == std::string::npos ? "" : base.substr(dot);
    return stem + "-" + std::to_string(k) + ext;
}

inline void run_simulate(const ExperimentConfig& c, SummaryBuilder& sb, json& extra_out) {
    std::mt19937_64 rng(c.seed);
    const bool undeformed =
        c.params.delta_omega_sq == 0.0 && c.params.eps_el == 0.0 && is_deformed(c.system);
    const int cases = c.initial_state.empty() ? c.initial_random : 1;
    double drift_max = 0.0;
    json case_table = json::array();
    for (int k = 0; k < cases; ++k) {
        const std::string csv = resolve_output(csv_path_for(c.output_csv, k, cases));
        std::string stop;
        json drifts;
        if (!is_reduced(c.system)) {
            std::array<double, 8> x0{};
            if (!c.initial_state.empty()) {
                if (c.initial_state.size() != 8)
                    throw toml::ConfigError("field 'initial.state' must have 8 components");
                std::copy(c.initial_state.begin(), c.initial_state.end(), x0.begin());
            } else {
                x0 = sample_phase4(rng, c.system, c.bounds).real_view();
            }
            auto tr = simulate_system<8>(c, CanonicalComplex8{}, hamiltonian8(c.system, c.params),
                                         constants8(c.system, c.params, undeformed), x0,
                                         guard8(c.system));
            write_csv(csv, tr);
            const auto rows = dyn::drift_report(tr);
            for (const auto& r : rows) drift_max = std::max(drift_max, r.max_rel);
            drifts = drift_json(rows);
            stop = dyn::stop_reason_name(tr.stop);
        } else {
            std::array<double, 6> x0{};
            if (!c.initial_state.empty()) {
                if (c.initial_state.size() != 6)
                    throw toml::ConfigError("field 'initial.state' must have 6 components");
                std::copy(c.initial_state.begin(), c.initial_state.end(), x0.begin());
            } else {
                x0 = sample_red3(rng, c.system, c.params, c.bounds).real_view();
            }
            auto tr = simulate_system<6>(c, MonopoleTwisted6{c.params.s},
                                         hamiltonian6(c.system, c.params),
                                         constants6(c.system, c.params, undeformed), x0,
                                         guard6(c.system));
            write_csv(csv, tr);
            const auto rows = dyn::drift_report(tr);
            for (const auto& r : rows) drift_max = std::max(drift_max, r.max_rel);
            drifts = drift_json(rows);
            stop = dyn::stop_reason_name(tr.stop);
        }
        case_table.push_back({{"csv", csv}, {"stop", stop}, {"drift", drifts}});
    }
    extra_out["cases"] = case_table;
    sb.add_residual("dyn/drift", drift_max, cases, {{"t_end", c.integrator.t_end}});
}

// ---- task: ks-verify ----

inline void run_ks_verify(const ExperimentConfig& c, SummaryBuilder& sb) {
    std::mt19937_64 rng(c.seed);
    std::vector<PhasePoint4C> states;
    for (int i = 0; i < c.n_points; ++i)
        states.push_back(sample_phase4(rng, SystemId::HiggsAniso, c.bounds));

    double img = 0.0;
    for (const auto& x : states)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) img = std::max(img, ks::ks_bracket_residual(x, i, j).max());
    sb.add_residual("ks/bracket-image", img, c.n_points);

    const std::array<std::pair<ks::Source, std::string>, 3> sources = {
        std::pair{ks::Source::Flat, "ks/level-flat"},
        std::pair{ks::Source::Sphere, "ks/level-sphere"},
        std::pair{ks::Source::Pseudosphere, "ks/level-pseudo"}};
    double jres = 0.0, ares = 0.0;
    json kappas = json::object();
    for (const auto& [src, claim] : sources) {
        double lvl = 0.0;
        const size_t nfit = std::min<size_t>(10, states.size());
        const double kappa = ks::fit_kappa(
            std::span<const PhasePoint4C>(states.data(), nfit), c.params, src);
        kappas[claim.substr(claim.find('-') + 1)] = kappa;
        for (const auto& x : states) {
            lvl = std::max(lvl, ks::ks_level_check(x, c.params, src));
            const auto oc = ks::ks_observable_check(x, c.params, src, kappa);
            jres = std::max(jres, oc.j_residual);
            ares = std::max(ares, oc.a_residual);
        }
        sb.add_residual(claim, lvl, c.n_points);
    }
    sb.add_residual("ks/J3-image", jres, 3 * c.n_points);
    sb.add_residual("ks/A-image", ares, 3 * c.n_points, {{"kappa", kappas}});

    // trajectory stays on the frozen target level set (flat + sphere source;
    // the sphere-source oscillator confines the orbit inside the image chart)
    double traj = 0.0;
    for (ks::Source src : {ks::Source::Flat, ks::Source::Sphere}) {
        const SystemParams sp = ks::source_params(c.params, src);
        const SystemId sysid =
            src == ks::Source::Flat ? SystemId::OscAniso : SystemId::HiggsAniso;
        const auto H = hamiltonian8(sysid, sp);
        dyn::IntegratorConfig icfg = c.integrator;
        icfg.t_end = 50.0;
        PhasePoint4C x0;
        x0.z = {std::complex<double>{0.3, -0.08}, std::complex<double>{0.15, 0.2}};
        x0.pi = {std::complex<double>{0.25, 0.1}, std::complex<double>{-0.2, 0.05}};
        const double E0 = ks::source_energy(x0, sp);
        const double s0 = ks::ks_map(x0).s;
        auto tr = dyn::integrate<8>(dyn::hamiltonian_field(CanonicalComplex8{}, H),
                                    x0.real_view(), icfg, {}, guard8(sysid));
        SystemParams tgt = sp;
        tgt.gamma = E0 / 2.0;
        for (const auto& st : tr.states) {
            const auto x = PhasePoint4C::from_real(std::span<const double, 8>(st));
            auto imgp = ks::ks_map(x);
            imgp.reduced.s = s0;
            const auto r6 = imgp.reduced.real_view();
            const auto red = Red3<double>::from_flat(std::span<const double, 6>(r6));
            double h_tgt, e_tgt;
            if (src == ks::Source::Flat) {
                h_tgt = flat::h_micz(red, s0, tgt);
                e_tgt = -0.5 * sp.omega * sp.omega;
            } else {
                h_tgt = curved::h_micz_pseudo(red, s0, tgt);
                e_tgt = -0.5 * sp.omega * sp.omega - sp.eps() * E0 / (2.0 * sp.r0());
            }
            traj = std::max(traj, std::abs(h_tgt - e_tgt));
        }
    }
    sb.add_residual("ks/level-trajectory", traj, 2);
}

// ---- task: separation-verify ----

// beta as a scalar-generic observable on the reduced phase space (used for the
// involution checks and the trajectory drift watch).
template <class S>
S beta_invariant(const Red3<S>& x, double s, const SystemParams& P) {
    using micz::sqrt;
    using std::sqrt;
    const double r0 = P.r0();
    const double eps = P.eps();
    const S q2 = dot(x.q, x.q);
    const S qn = sqrt(q2);
    const S Sw = r0 * (1.0 + q2) / (1.0 - q2);
    const S m = (x.q[0] * x.q[0] + x.q[1] * x.q[1]) * (Sw + r0) * (Sw + r0);
    const S d = 2.0 * Sw * (Sw + r0) * x.q[2] / r0;
    const S rad = sqrt(d * d + 4.0 * m);
    const S xi = 0.5 * (rad + d);
    // chart Jacobian column dq/dxi at generic scalar
    using D3 = Dual<S, 3>;
    const S eta = 0.5 * (rad - d);
    const S phi = micz::atan2(x.q[1], x.q[0]);
    const Vec3<D3> qd = sep::chart_point(D3::seed(xi, 0), D3::seed(eta, 1), D3::seed(phi, 2), r0);
    S p_xi(0.0);
    for (int i = 0; i < 3; ++i) p_xi += x.p[i] * qd[i].d[0];
    const S p_phi = cross(x.q, x.p)[2] - s * (x.q[2] / qn + 1.0);
    const S E = curved::h_micz_pseudo(x, s, P);
    const S rxi = sqrt(r0 * r0 + xi * xi);
    return 2.0 * xi * (r0 * r0 + xi * xi) * p_xi * p_xi / (r0 * r0) +
           (s * p_phi + s * s) * (r0 - rxi) / (r0 * xi) +
           P.delta_omega_sq / (2.0 * r0) * (xi * rxi - eps * xi * xi) - P.gamma * rxi / r0 +
           0.5 * P.eps_el * xi * xi - E * xi + p_phi * p_phi / (2.0 * xi);
}

inline ReducedPoint3 sample_sep_state(std::mt19937_64& rng, const ExperimentConfig& c,
                                      double s) {
    SystemParams sp = c.params;
    sp.s = s;
    for (;;) {
        auto x = sample_red3(rng, SystemId::MiczPseudo, sp, c.bounds);
        if (x.q[0] * x.q[0] + x.q[1] * x.q[1] > 0.01) return x;
    }
}

inline void run_separation_verify(const ExperimentConfig& c, SummaryBuilder& sb) {
    std::mt19937_64 rng(c.seed);
    SystemParams P = c.params;
    if (P.curvature == Curvature::Flat) P.curvature = Curvature::Pseudosphere;

    double chart_eq = 0.0, beta_cons = 0.0, chi_zeta = 0.0;
    for (int i = 0; i < c.n_points; ++i) {
        const double s = (i % 2 == 0) ? 0.0 : P.s;
        SystemParams sp = P;
        sp.s = s;
        const auto x = sample_sep_state(rng, c, s);
        const auto r6 = x.real_view();
        const auto red = Red3<double>::from_flat(std::span<const double, 6>(r6));
        const double E = curved::h_micz_pseudo(red, s, sp);
        const auto ps = sep::parabolic_momenta(x, sp.r0());
        chart_eq = std::max(chart_eq, std::abs(sep::h_micz_parabolic(ps, sp) - E));
        const auto rec = sep::separation_constant(ps, sp, sep::h_micz_parabolic(ps, sp));
        beta_cons = std::max(beta_cons, std::abs(rec.beta_xi - rec.beta_eta));
        const auto cz = sep::hj_residual_chi_zeta(ps, sp, rec.energy, rec.beta_xi);
        chi_zeta = std::max(chi_zeta, std::max(cz.chi, cz.zeta));
    }
    sb.add_residual("sep/chart-equivalence", chart_eq, c.n_points);
    sb.add_residual("sep/beta-consistency", beta_cons, c.n_points);
    sb.add_residual("sep/chi-zeta", chi_zeta, c.n_points);

    // involution: pairwise brackets of H, p_phi, beta under the twisted structure
    const MonopoleTwisted6 tw{P.s};
    auto Hobs = hamiltonian6(SystemId::MiczPseudo, P);
    const double s_inv = P.s;
    const SystemParams Pinv = P;
    auto pphi = [s_inv](auto xs) {
        using S = std::remove_cvref_t<decltype(xs[0])>;
        const auto x = Red3<S>::from_flat(xs);
        using micz::sqrt;
        using std::sqrt;
        return cross(x.q, x.p)[2] - s_inv * (x.q[2] / sqrt(dot(x.q, x.q)) + 1.0);
    };
    auto beta = [s_inv, Pinv](auto xs) {
        using S = std::remove_cvref_t<decltype(xs[0])>;
        return beta_invariant(Red3<S>::from_flat(xs), s_inv, Pinv);
    };
    double invol = 0.0;
    for (int i = 0; i < std::min(c.n_points, 50); ++i) {
        const auto x = sample_sep_state(rng, c, P.s);
        const auto xr = x.real_view();
        const std::span<const double, 6> xs(xr);
        invol = std::max({invol, std::abs(poisson_bracket(tw, Hobs, pphi, xs)),
                          std::abs(poisson_bracket(tw, Hobs, beta, xs)),
                          std::abs(poisson_bracket(tw, pphi, beta, xs))});
    }
    sb.add_residual("sep/involution", invol, std::min(c.n_points, 50));

    // beta drift along a trajectory of the pseudospherical system, T = 50.
    // The deformed potential is singular at the chart boundary, so candidates
    // whose orbits leave the bulk within T are rejected (deterministically).
    dyn::IntegratorConfig icfg = c.integrator;
    icfg.t_end = 50.0;
    icfg.guard_margin = 0.05;
    auto watch = std::vector<Observable<6>>{
        Observable<6>::make("beta", beta),
        Observable<6>::make("p_phi", pphi),
    };
    dyn::Trajectory<6> tr;
    bool found = false;
    for (int attempt = 0; attempt < 40 && !found; ++attempt) {
        auto x0 = sample_sep_state(rng, c, P.s);
        tr = dyn::integrate<6>(dyn::hamiltonian_field(tw, Hobs), x0.real_view(), icfg, watch,
                               guard6(SystemId::MiczPseudo));
        found = tr.stop == dyn::StopReason::Completed;
    }
    double drift = found ? 0.0 : std::numeric_limits<double>::infinity();
    for (const auto& r : dyn::drift_report(tr)) drift = std::max(drift, r.max_rel);
    sb.add_residual("sep/beta-drift", drift, 1,
                    {{"stop", dyn::stop_reason_name(tr.stop)}});
}

// ---- task: laplace-check ----

inline void run_laplace_check(const ExperimentConfig& c, SummaryBuilder& sb) {
    std::mt19937_64 rng(c.seed);
    SystemParams P = c.params;
    if (P.curvature == Curvature::Flat) P.curvature = Curvature::Pseudosphere;
    const double r0 = P.r0();
    const double gamma = P.gamma != 0.0 ? P.gamma : 1.0;
    const double eps_el = P.eps_el != 0.0 ? P.eps_el : 1.0;

    auto kepler = [&](const Vec3d& q) {
        const double q2 = dot(q, q);
        return -gamma * (1.0 + q2) / (2.0 * r0 * std::sqrt(q2));
    };
    auto linear = [&](const Vec3d& q) {
        const double q2 = dot(q, q);
        return 2.0 * eps_el * r0 * (1.0 + q2) * q[2] / ((1.0 - q2) * (1.0 - q2));
    };

    std::uniform_real_distribution<double> u(-0.7, 0.7);
    double kx = 0.0;
    for (int i = 0; i < c.lb_points; ++i) {
        Vec3d q;
        do {
            q = {{u(rng), u(rng), u(rng)}};
        } while (norm(q) < 0.15 || dot(q, q) > 0.6);
        std::vector<double> rs;
        for (double h : c.lb_steps) rs.push_back(curved::laplace_beltrami_residual(kepler, q, r0, h));
        kx = std::max(kx, std::abs(curved::richardson_h2(c.lb_steps, rs)));
    }
    sb.add_residual("lb/kepler-harmonic", kx, c.lb_points);

    const Vec3d probe{{0.0, 0.0, 0.3}};
    std::vector<double> rs;
    for (double h : c.lb_steps) rs.push_back(curved::laplace_beltrami_residual(linear, probe, r0, h));
    const double lx = std::abs(curved::richardson_h2(c.lb_steps, rs));
    sb.add_at_least("lb/linear-nonharmonic", lx, 1, {{"probe", {0.0, 0.0, 0.3}}});
}

// ---- task: flat-limit ----

inline void run_flat_limit(const ExperimentConfig& c, SummaryBuilder& sb, json& extra) {
    SystemParams P = c.params;
    if (P.curvature == Curvature::Flat) P.curvature = Curvature::Pseudosphere;
    PhasePoint4C uw;
    if (!c.limit_state.empty()) {
        if (c.limit_state.size() != 8)
            throw toml::ConfigError("field 'flat_limit.state' must have 8 components");
        uw = PhasePoint4C::from_real(
            std::span<const double, 8>(std::array<double, 8>{
                c.limit_state[0], c.limit_state[1], c.limit_state[2], c.limit_state[3],
                c.limit_state[4], c.limit_state[5], c.limit_state[6], c.limit_state[7]}));
    } else {
        uw.z = {std::complex<double>{0.31, -0.22}, std::complex<double>{-0.12, 0.4}};
        uw.pi = {std::complex<double>{0.5, 0.1}, std::complex<double>{-0.2, 0.3}};
    }
    if (c.limit_radii.size() < 3)
        throw toml::ConfigError("field 'flat_limit.radii' needs at least 3 radii");
    const auto rows = curved::flat_limit_ratio(uw, P, c.limit_radii);
    json tab = json::array();
    for (const auto& r : rows)
        tab.push_back({{"R0", r.R0},
                       {"ratio", r.ratio},
                       {"indeterminate", r.indeterminate},
                       {"domain_error", r.domain_error}});
    extra["ratio_table"] = tab;
    // extrapolate the limit from the two largest radii (second order in 1/R0)
    const auto& a = rows[rows.size() - 2];
    const auto& b = rows[rows.size() - 1];
    const double w = (b.R0 * b.R0) / (a.R0 * a.R0);
    const double climit = (w * b.ratio - a.ratio) / (w - 1.0);
    extra["extrapolated_constant"] = climit;
    extra["analytic_constant"] = curved::flat_limit_constant;
    const double shrink = std::abs(rows[0].ratio - climit) / std::abs(rows[1].ratio - climit);
    sb.add_in_range("limit/second-order", shrink, 80.0, 120.0, (int)rows.size(),
                    {{"constant", climit}});
}

// ---- entry point ----

struct RunResult {
    int exit_code = 0;
    json summary;
    std::string summary_path;
};

inline std::string resolve_output(const std::string& path) {
    if (const char* dir = std::getenv("MICZ_LAB_OUTDIR")) {
        std::filesystem::path p(path);
        return (std::filesystem::path(dir) / p.filename()).string();
    }
    return path;
}

inline RunResult run_task(const ExperimentConfig& cfg) {
    SummaryBuilder sb(cfg);
    json extra;
    ExperimentConfig c = cfg;
    if (c.task == "check-brackets") run_check_brackets(c, sb);
    else if (c.task == "simulate") run_simulate(c, sb, extra);
    else if (c.task == "ks-verify") run_ks_verify(c, sb);
    else if (c.task == "separation-verify") run_separation_verify(c, sb);
    else if (c.task == "laplace-check") run_laplace_check(c, sb);
    else if (c.task == "flat-limit") run_flat_limit(c, sb, extra);
    else throw toml::ConfigError("field 'task': unknown task '" + c.task + "'");

    RunResult r;
    r.summary = sb.finish();
    for (auto it = extra.begin(); it != extra.end(); ++it) r.summary[it.key()] = it.value();
    r.exit_code = r.summary["overall_pass"].get<bool>() ? 0 : 1;
    r.summary_path = resolve_output(cfg.output_json);
    std::ofstream out(r.summary_path);
    if (!out) throw DomainError("cannot write summary file '" + r.summary_path + "'");
    out << r.summary.dump(2) << "\n";
    return r;
}

}  // namespace micz::lab
