#include "pharmonic/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <thread>

#include "pharmonic/counterexample.hpp"
#include "pharmonic/curve_energy.hpp"
#include "pharmonic/discrete_oracle.hpp"
#include "pharmonic/error.hpp"
#include "pharmonic/modulus.hpp"
#include "pharmonic/numerics.hpp"
#include "pharmonic/ode_core.hpp"
#include "pharmonic/radial_minimizer.hpp"

namespace pharm {

using json = nlohmann::ordered_json;

namespace {

constexpr double pi = std::numbers::pi;

json instance_json(const AnnulusPair& a) {
    return {{"r", a.r()}, {"R", a.R()}, {"r_star", a.r_star()}, {"R_star", a.R_star()}};
}

json num(double x) {
    if (std::isfinite(x)) return x;
    return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& body) {
    jobs = std::max(1u, std::min<unsigned>(jobs, unsigned(n)));
    if (jobs <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(jobs);
    for (unsigned t = 0; t < jobs; ++t)
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i; (i = next++) < n;) body(i);
            } catch (...) {
                errs[t] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

json check(const char* name, double value, double limit, bool pass) {
    return {{"name", name}, {"value", num(value)}, {"limit", num(limit)}, {"pass", pass}};
}

/// Collects named checks and tracks the overall verdict.
struct Checks {
    const VerifyOptions& opt;
    json list = json::array();
    bool ok = true;
    explicit Checks(const VerifyOptions& o) : opt(o) {}
    double limit_of(const char* name, double dflt) const {
        auto it = opt.limits.find(name);
        return it == opt.limits.end() ? dflt : it->second;
    }
    void le(const char* name, double value, double limit) {
        limit = limit_of(name, limit);
        add(name, value, limit, value <= limit);
    }
    void lt(const char* name, double value, double limit) {
        limit = limit_of(name, limit);
        add(name, value, limit, value < limit);
    }
    void ge(const char* name, double value, double limit) {
        limit = limit_of(name, limit);
        add(name, value, limit, value >= limit);
    }
    void add(const char* name, double value, double limit, bool pass) {
        list.push_back(check(name, value, limit, pass));
        ok = ok && pass;
    }
};

SuiteResult finish(Suite s, Checks& c, json details, const VerifyOptions& opt) {
    json r;
    r["suite"] = suite_name(s);
    r["seed"] = opt.seed;
    r["pass"] = c.ok;
    r["checks"] = std::move(c.list);
    r["details"] = std::move(details);
    return {r["pass"].get<bool>(), std::move(r)};
}

// ---------------------------------------------------------------------------

SuiteResult suite_ode(const VerifyOptions& opt) {
    std::vector<std::pair<double, AnnulusPair>> inst;
    if (opt.instance)
        inst.emplace_back(opt.p.value_or(1.5), *opt.instance);
    else
        inst = ode_sweep_instances();
    std::vector<json> rows(inst.size());
    std::vector<OdeDiagnostics> diag(inst.size());
    std::vector<int> solved(inst.size(), 0);
    parallel_for(inst.size(), opt.jobs, [&](std::size_t i) {
        const auto& [p, a] = inst[i];
        Exponent e(p);
        auto ph = classify(a, e);
        rows[i] = {{"p", p}, {"instance", instance_json(a)}, {"regime", regime_name(ph.regime)}};
        if (ph.regime == Regime::NoMinimizer) return;
        diag[i] = ode_diagnostics(a, e);
        solved[i] = 1;
        rows[i]["residual_28"] = diag[i].residual_28;
        rows[i]["residual_23"] = diag[i].residual_23;
        rows[i]["weight_identity"] = diag[i].weight_identity;
    });
    double r28 = 0.0, r23 = 0.0, wid = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < inst.size(); ++i) {
        if (!solved[i]) continue;
        ++count;
        r28 = std::max(r28, diag[i].residual_28);
        r23 = std::max(r23, diag[i].residual_23);
        wid = std::max(wid, diag[i].weight_identity);
    }
    Checks c(opt);
    c.ge("solved_instances", count, 1);
    c.lt("max_gauge_residual", r28, 1e-6);
    c.lt("max_conservation_residual", r23, 1e-6);
    c.lt("max_weight_identity", wid, 1e-5);
    return finish(Suite::Ode, c, json(rows), opt);
}

SuiteResult suite_radial(const VerifyOptions& opt) {
    std::vector<std::pair<double, AnnulusPair>> inst;
    if (opt.instance)
        inst.emplace_back(opt.p.value_or(1.5), *opt.instance);
    else
        inst = {{1.5, AnnulusPair(0.5, 1, 0.5, 1)}, {1.2, AnnulusPair(0.4, 1, 0.5, 1)},
                {1.7, AnnulusPair(0.5, 1, 0.3, 1)}, {1.0, AnnulusPair(0.3, 1, 0.6, 1)},
                {1.5, AnnulusPair(0.0, 1, 0.2, 1)}, {1.3, AnnulusPair(0.3, 2, 0.0, 3)}};
    const int comps = std::max(1, opt.trials / 5);
    std::vector<json> rows(inst.size());
    std::vector<double> bound_gap(inst.size()), pl_gap(inst.size()), endpoint(inst.size()), comp_gap(inst.size());
    parallel_for(inst.size(), opt.jobs, [&](std::size_t i) {
        const auto& [p, a] = inst[i];
        Exponent e(p);
        auto m = solve_profile(a, e);
        double E = m.energy();
        double lb = lower_bound_exact(a, e, m);
        double pl = energy_radial(m.profile(), e);
        double ep = std::abs(m.h_at(a.r()) - a.r_star()) + std::abs(m.h_at(a.R()) - a.R_star());
        double worst = HUGE_VAL;
        for (int k = 0; k < comps; ++k) {
            auto cp = random_competitor(a, opt.seed * 1000 + k, 400, k % 2 ? &m.profile() : nullptr, 0.05);
            worst = std::min(worst, (energy_radial(cp, e) - E) / E);
        }
        bound_gap[i] = std::abs(E - lb) / E;
        pl_gap[i] = std::abs(pl - E) / E;
        endpoint[i] = ep;
        comp_gap[i] = worst;
        rows[i] = {{"p", p},
                   {"instance", instance_json(a)},
                   {"regime", regime_name(m.regime())},
                   {"energy", E},
                   {"lower_bound", lb},
                   {"piecewise_linear_energy", pl},
                   {"min_competitor_excess", worst}};
    });
    Checks c(opt);
    c.lt("energy_vs_lower_bound", *std::max_element(bound_gap.begin(), bound_gap.end()), 1e-6);
    c.lt("energy_vs_sampled_profile", *std::max_element(pl_gap.begin(), pl_gap.end()), 1e-6);
    c.lt("endpoint_error", *std::max_element(endpoint.begin(), endpoint.end()), 1e-8);
    c.ge("min_competitor_excess", *std::min_element(comp_gap.begin(), comp_gap.end()), -1e-6);
    return finish(Suite::Radial, c, json(rows), opt);
}

SuiteResult suite_curve(const VerifyOptions& opt) {
    const double two_pi = 2.0 * pi;
    const int n_random = std::max(1, opt.trials * 10);
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<std::size_t> kk(3, 64);
    std::vector<std::size_t> sizes(n_random);
    for (auto& k : sizes) k = kk(rng);
    std::vector<double> b(n_random);
    parallel_for(n_random, opt.jobs, [&](std::size_t i) { b[i] = b_energy(random_curve(opt.seed * 7919 + i, sizes[i])); });
    double min_b = *std::min_element(b.begin(), b.end());

    double circle_err = 0.0;
    for (int k = 0; k < 20; ++k) {
        double rho = double(k) / 19.0;
        circle_err = std::max(circle_err, std::abs(b_energy(circle_curve(rho, 10000), 10000) - two_pi));
    }

    double convexity = -HUGE_VAL, rotation = 0.0;
    std::uniform_real_distribution<double> U(0.0, two_pi);
    for (int k = 0; k < 50; ++k) {
        std::size_t K = kk(rng);
        auto g1 = random_curve(opt.seed * 31 + 2 * k, K), g2 = random_curve(opt.seed * 31 + 2 * k + 1, K);
        std::vector<Point> mid(K);
        for (std::size_t j = 0; j < K; ++j) mid[j] = 0.5 * (g1.vertices()[j] + g2.vertices()[j]);
        convexity = std::max(convexity, b_energy(PolygonalCurve(mid)) - 0.5 * (b_energy(g1) + b_energy(g2)));
        rotation = std::max(rotation, std::abs(b_energy(rotate_curve(g1, U(rng))) - b_energy(g1)));
    }

    std::vector<Point> star;
    for (int k = 0; k < 10; ++k) star.push_back(std::polar(k % 2 ? 0.3 : 0.9, two_pi * k / 10.0));
    PolygonalCurve sc(star);
    double hull_gain = b_energy(convexify(sc)) - b_energy(sc);

    const std::vector<std::size_t> schedule{4, 16, 64, 256};
    auto flow = symmetrization_flow(random_curve(opt.seed, 12), schedule);
    double rise = 0.0;
    for (std::size_t i = 1; i < flow.energies.size(); ++i) rise = std::max(rise, flow.energies[i] - flow.energies[i - 1]);
    double spread = radial_spread(flow.curves.back());

    Checks c(opt);
    c.ge("min_random_B_minus_2pi", min_b - two_pi, -1e-6);
    c.le("circle_error", circle_err, 1e-6);
    c.le("convexity_excess", convexity, 1e-8);
    c.le("rotation_change", rotation, 1e-8);
    c.le("star_hull_change", hull_gain, 1e-8);
    c.le("flow_energy_rise", rise, 1e-8);
    c.lt("flow_radial_spread", spread, 1e-2);
    c.ge("flow_final_B_minus_2pi", flow.energies.back() - two_pi, -1e-3);
    json d;
    d["random_curves"] = n_random;
    d["flow_energies"] = flow.energies;
    return finish(Suite::Curve, c, d, opt);
}

SuiteResult suite_counterexample(const VerifyOptions& opt) {
    const double eps = opt.eps;
    EpsMap m(eps);
    IdentityMap id;
    double e = e_energy(m), E1 = e1_energy(m), ang = angular_part(m);
    double e_id = e_energy(id), E1_id = e1_energy(id);
    double rad_out = 0.0, rad_in = 0.0;
    for (int k = 0; k < 2000; ++k) {
        double th = 2.0 * pi * (k + 0.5) / 2000.0;
        double v = radial_part_at(m, th);
        if (std::abs(th - pi) > 0.5 * eps)
            rad_out = std::max(rad_out, v);
        else
            rad_in = std::max(rad_in, v);
    }
    double inv = 0.0, collinear = 0.0;
    for (int i = 1; i < 40; ++i)
        for (int j = 0; j < 64; ++j) {
            double s = i / 40.0, th = 2.0 * pi * j / 64.0;
            auto z = m(s, th);
            auto [s2, t2] = m.inverse(z);
            inv = std::max({inv, std::abs(s2 - s), std::abs(std::remainder(t2 - th, 2.0 * pi))});
            auto w = m(0.5 * s, th);
            collinear = std::max(collinear, std::abs((z * std::conj(w)).imag()) + (std::abs(w) < std::abs(z) ? 0.0 : 1.0));
        }
    Checks c(opt);
    c.lt("E1_below_sqrt2_pi", E1, std::sqrt(2.0) * pi);
    c.le("sandwich_lower", e / std::sqrt(2.0) - E1, 1e-10);
    c.le("sandwich_upper", E1 - e, 1e-10);
    c.le("identity_e_error", std::abs(e_id - 2.0 * pi), 1e-8 * 2.0 * pi);
    c.le("identity_E1_error", std::abs(E1_id - std::sqrt(2.0) * pi), 1e-8 * std::sqrt(2.0) * pi);
    c.le("radial_part_outside_over_eps", rad_out / eps, 3.0);
    c.le("radial_part_inside", rad_in, 1.0 + 1e-12);
    c.le("inverse_round_trip", inv, 1e-10);
    c.le("radial_lines_preserved", collinear, 1e-12);
    json d;
    d["eps"] = eps;
    d["e"] = e;
    d["E1"] = E1;
    d["angular_part"] = ang;
    d["e_minus_2_over_eps"] = (e - 2.0) / eps;
    return finish(Suite::Counterexample, c, d, opt);
}

SuiteResult suite_fixed_boundary(const VerifyOptions& opt) {
    std::vector<std::pair<double, AnnulusPair>> inst;
    if (opt.instance)
        inst.emplace_back(opt.p.value_or(1.2), *opt.instance);
    else
        inst = {{1.2, AnnulusPair(0.4, 1, 0.5, 1)}, {1.7, AnnulusPair(0.5, 1, 0.3, 1)}};
    json rows = json::array();
    Checks c(opt);
    double worst = HUGE_VAL;
    for (const auto& [p, a] : inst) {
        Exponent e(p);
        auto m = solve_profile(a, e);
        auto g = GridMap2D::radial(a, opt.grid_s, opt.grid_theta, [&](double s) { return m.h_at(s); });
        auto rep = perturbation_probe(g, e, opt.trials, opt.amplitude, opt.seed);
        worst = std::min(worst, rep.min_delta);
        auto j = probe_report_json(g, e, rep);
        j["regime"] = regime_name(m.regime());
        j["radial_energy"] = m.energy();
        rows.push_back(std::move(j));
    }
    c.ge("min_delta", worst, -1e-6);
    return finish(Suite::FixedBoundary, c, rows, opt);
}

SuiteResult suite_duality(const VerifyOptions& opt) {
    Exponent one(1.0);
    require(!opt.p || *opt.p == 1.0, ErrorCode::InvalidArgument, "the duality suite runs at p = 1");
    std::vector<AnnulusPair> inst;
    if (opt.instance)
        inst.push_back(*opt.instance);
    else
        inst = {AnnulusPair(0.5, 1, 0.6, 1), AnnulusPair(0.4, 1, 0.3, 1), AnnulusPair(0.2, 1, 0.25, 1),
                AnnulusPair(0.5, 2, 1.5, 4)};
    json rows = json::array();
    double worst = 0.0;
    for (const auto& a : inst) {
        auto [e1, e2] = dual_energy_check(a);
        double rel = std::abs(e1 - e2) / std::max(e1, e2);
        worst = std::max(worst, rel);
        rows.push_back({{"instance", instance_json(a)}, {"forward", e1}, {"backward", e2}, {"rel_diff", rel}});
    }
    double trip = 0.0;
    for (double y : {1.2, 1.5, 2.0, 3.0, 5.0, 10.0}) {
        auto x = modulus_m1_inverse(y);
        trip = std::max(trip, std::abs(modulus_mp(one, x).value() - y) / y);
    }
    Checks c(opt);
    c.le("max_pair_rel_diff", worst, 1e-4);
    c.le("m1_inverse_round_trip", trip, 1e-6);
    return finish(Suite::Duality, c, rows, opt);
}

} // namespace

const char* suite_name(Suite s) {
    switch (s) {
    case Suite::Ode: return "ode";
    case Suite::Radial: return "radial";
    case Suite::Curve: return "curve";
    case Suite::Counterexample: return "counterexample";
    case Suite::FixedBoundary: return "fixed-boundary";
    case Suite::Duality: return "duality";
    }
    return "?";
}

Suite parse_suite(const std::string& name) {
    for (Suite s : {Suite::Ode, Suite::Radial, Suite::Curve, Suite::Counterexample, Suite::FixedBoundary, Suite::Duality})
        if (name == suite_name(s)) return s;
    fail(ErrorCode::InvalidArgument, "unknown suite: " + name);
}

std::vector<std::pair<double, AnnulusPair>> ode_sweep_instances() {
    std::vector<std::pair<double, AnnulusPair>> v;
    for (double p : {1.0, 1.2, 1.4, 1.6, 1.8})
        for (double rs : {0.15, 0.24, 0.4, 0.5, 0.6}) v.emplace_back(p, AnnulusPair(0.3, 1.0, rs, 1.0));
    return v;
}

OdeDiagnostics ode_diagnostics(const AnnulusPair& a, const Exponent& p, std::size_t samples) {
    require(samples >= 2, ErrorCode::InvalidArgument, "need at least two sample points");
    auto m = solve_profile(a, p);
    OdeDiagnostics d;
    const auto& g = m.gauge();
    // gauge residuals on the normalized scale, away from the stencil reach
    {
        double lo = std::max(g.lo(), 1e-6), hi = g.hi();
        double pad = std::exp(5e-3);
        lo *= pad;
        hi /= pad;
        if (hi > lo) {
            for (double s : geometric_grid(lo, hi, samples)) {
                if (g.branch() != Branch::Constant) d.residual_28 = std::max(d.residual_28, std::abs(ode_residual_28(g, s)));
                d.residual_23 = std::max(d.residual_23, std::abs(ode_residual_23(g, s)));
            }
        }
    }
    // rho1' = rho2 on the non-constant part, original scale
    {
        const double R = a.R();
        double lo = std::max(m.collapse_radius(), a.r() > 0.0 ? a.r() : 1e-6 * R);
        const double pad = std::exp(5e-3);
        lo *= pad;
        double hi = R / pad;
        if (hi > lo) {
            for (double s : geometric_grid(lo, hi, samples)) {
                double h = 1e-4 * s;
                double dr = (-m.rho1(s + 2 * h) + 8 * m.rho1(s + h) - 8 * m.rho1(s - h) + m.rho1(s - 2 * h)) / (12 * h);
                d.weight_identity = std::max(d.weight_identity, std::abs(dr - m.rho2(s)));
            }
        }
    }
    return d;
}

SuiteResult run_suite(Suite s, const VerifyOptions& opt) {
    switch (s) {
    case Suite::Ode: return suite_ode(opt);
    case Suite::Radial: return suite_radial(opt);
    case Suite::Curve: return suite_curve(opt);
    case Suite::Counterexample: return suite_counterexample(opt);
    case Suite::FixedBoundary: return suite_fixed_boundary(opt);
    case Suite::Duality: return suite_duality(opt);
    }
    fail(ErrorCode::InvalidArgument, "unknown suite");
}

} // namespace pharm
