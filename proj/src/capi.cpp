#include "pharmonic/pharmonic.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <map>
#include <new>
#include <sstream>
#include <string>

#include "json.hpp"
#include "pharmonic/counterexample.hpp"
#include "pharmonic/curve_energy.hpp"
#include "pharmonic/discrete_oracle.hpp"
#include "pharmonic/error.hpp"
#include "pharmonic/modulus.hpp"
#include "pharmonic/radial_minimizer.hpp"
#include "pharmonic/verify.hpp"

struct pharm_minimizer {
    pharm::RadialMinimizer impl;
};

namespace {

thread_local std::string last_error;

pharm_status to_status(pharm::ErrorCode c) { return static_cast<pharm_status>(static_cast<int>(c)); }

template <class F>
pharm_status guarded(F&& f) {
    try {
        f();
        last_error.clear();
        return PHARM_OK;
    } catch (const pharm::Error& e) {
        last_error = e.what();
        return to_status(e.code());
    } catch (const nlohmann::json::exception& e) {
        last_error = e.what();
        return PHARM_ERR_INVALID_ARGUMENT;
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return PHARM_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return PHARM_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown error";
        return PHARM_ERR_INTERNAL;
    }
}

void need(const void* p, const char* what) {
    if (!p) pharm::fail(pharm::ErrorCode::InvalidArgument, std::string("null pointer: ") + what);
}

pharm::AnnulusPair pair_of(const pharm_instance* a) {
    need(a, "instance");
    return pharm::AnnulusPair(a->r, a->R, a->r_star, a->R_star);
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

double to_c(const pharm::ExtendedReal& x) { return x.to_double(); }

} // namespace

extern "C" {

const char* pharm_version(void) { return "1.0.0"; }

const char* pharm_last_error(void) { return last_error.c_str(); }

const char* pharm_status_string(pharm_status s) {
    switch (s) {
    case PHARM_OK: return "ok";
    case PHARM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PHARM_ERR_DOMAIN: return "domain error";
    case PHARM_ERR_REGIME: return "regime error";
    case PHARM_ERR_BRACKET: return "bracketing failure";
    case PHARM_ERR_CONVERGENCE: return "convergence failure";
    case PHARM_ERR_IO: return "i/o error";
    case PHARM_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* pharm_regime_name(int regime) {
    switch (regime) {
    case PHARM_HOMEOMORPHIC: return pharm::regime_name(pharm::Regime::Homeomorphic);
    case PHARM_COLLAPSED: return pharm::regime_name(pharm::Regime::Collapsed);
    case PHARM_NO_MINIMIZER: return pharm::regime_name(pharm::Regime::NoMinimizer);
    default: return "Unknown";
    }
}

void pharm_string_free(char* s) { std::free(s); }

pharm_status pharm_classify(const pharm_instance* a, double p, pharm_phase* out) {
    return guarded([&] {
        need(out, "out");
        auto rep = pharm::classify(pair_of(a), pharm::Exponent(p));
        pharm_phase ph{};
        ph.regime = static_cast<int>(rep.regime);
        ph.domain_ratio = to_c(rep.domain_ratio);
        ph.target_ratio = to_c(rep.target_ratio);
        ph.m_value = to_c(rep.m_value);
        ph.has_m_inverse = rep.m_inverse_value.has_value();
        ph.m_inverse_value = rep.m_inverse_value ? to_c(*rep.m_inverse_value) : 0.0;
        ph.has_collapse_radius = rep.collapse_radius.has_value();
        ph.collapse_radius = rep.collapse_radius.value_or(0.0);
        ph.on_boundary = rep.on_boundary;
        *out = ph;
    });
}

pharm_status pharm_modulus(double p, double x, double* out) {
    return guarded([&] {
        need(out, "out");
        *out = to_c(pharm::modulus_mp(pharm::Exponent(p), pharm::ExtendedReal::from_double(x)));
    });
}

pharm_status pharm_m1_inverse(double y, double* out) {
    return guarded([&] {
        need(out, "out");
        *out = to_c(pharm::modulus_m1_inverse(pharm::ExtendedReal::from_double(y)));
    });
}

pharm_status pharm_collapse_radius(const pharm_instance* a, double p, double* out) {
    return guarded([&] {
        need(out, "out");
        *out = pharm::collapse_radius(pair_of(a), pharm::Exponent(p));
    });
}

pharm_status pharm_minimizer_solve(const pharm_instance* a, double p, size_t nodes, pharm_minimizer** out) {
    return guarded([&] {
        need(out, "out");
        *out = nullptr;
        pharm::SolveOptions opt;
        if (nodes) opt.nodes = nodes;
        *out = new pharm_minimizer{pharm::solve_profile(pair_of(a), pharm::Exponent(p), opt)};
    });
}

void pharm_minimizer_free(pharm_minimizer* m) { delete m; }

pharm_status pharm_minimizer_regime(const pharm_minimizer* m, int* out) {
    return guarded([&] {
        need(m, "minimizer");
        need(out, "out");
        *out = static_cast<int>(m->impl.regime());
    });
}

pharm_status pharm_minimizer_energy(const pharm_minimizer* m, double* out) {
    return guarded([&] {
        need(m, "minimizer");
        need(out, "out");
        *out = m->impl.energy();
    });
}

pharm_status pharm_minimizer_lower_bound(const pharm_minimizer* m, double* out) {
    return guarded([&] {
        need(m, "minimizer");
        need(out, "out");
        *out = pharm::lower_bound_exact(m->impl.instance(), pharm::Exponent(m->impl.p()), m->impl);
    });
}

pharm_status pharm_minimizer_collapse_radius(const pharm_minimizer* m, double* out) {
    return guarded([&] {
        need(m, "minimizer");
        need(out, "out");
        *out = m->impl.collapse_radius();
    });
}

pharm_status pharm_minimizer_integration_constant(const pharm_minimizer* m, double* out) {
    return guarded([&] {
        need(m, "minimizer");
        need(out, "out");
        *out = m->impl.integration_constant();
    });
}

pharm_status pharm_minimizer_eval(const pharm_minimizer* m, double s, double* h, double* g, double* rho1, double* rho2) {
    return guarded([&] {
        need(m, "minimizer");
        double hv = m->impl.h_at(s);
        double gv = m->impl.gauge_at(s).t;
        double r1 = m->impl.rho1(s), r2 = m->impl.rho2(s);
        if (h) *h = hv;
        if (g) *g = gv;
        if (rho1) *rho1 = r1;
        if (rho2) *rho2 = r2;
    });
}

pharm_status pharm_minimizer_node_count(const pharm_minimizer* m, size_t* out) {
    return guarded([&] {
        need(m, "minimizer");
        need(out, "out");
        *out = m->impl.profile().all_nodes().size();
    });
}

pharm_status pharm_minimizer_nodes(const pharm_minimizer* m, double* s, double* h, size_t cap) {
    return guarded([&] {
        need(m, "minimizer");
        need(s, "s");
        need(h, "h");
        auto ns = m->impl.profile().all_nodes();
        auto vs = m->impl.profile().all_values();
        for (size_t i = 0; i < ns.size() && i < cap; ++i) {
            s[i] = ns[i];
            h[i] = vs[i];
        }
    });
}

pharm_status pharm_minimizer_profile_csv(const pharm_minimizer* m, char** out) {
    return guarded([&] {
        need(m, "minimizer");
        need(out, "out");
        std::ostringstream os;
        pharm::write_profile_csv(os, m->impl);
        *out = dup_string(os.str());
    });
}

pharm_status pharm_energy_radial(const pharm_instance* a, double p, const double* s, const double* h, size_t n,
                                 double* out) {
    return guarded([&] {
        need(s, "s");
        need(h, "h");
        need(out, "out");
        auto pair = pair_of(a);
        pharm::require(n >= 2, pharm::ErrorCode::InvalidArgument, "profile needs at least two samples");
        std::vector<double> xs(s, s + n), hs(h, h + n);
        std::optional<double> origin;
        if (xs.front() == 0.0) {
            origin = hs.front();
            xs.erase(xs.begin());
            hs.erase(hs.begin());
        }
        pharm::RadialProfile prof(pair, pharm::SampledFunction(std::move(xs), std::move(hs)), origin);
        *out = pharm::energy_radial(prof, pharm::Exponent(p));
    });
}

pharm_status pharm_dp_minimize(const pharm_instance* a, double p, size_t N, size_t M, double* energy,
                               double* plateau_edge) {
    return guarded([&] {
        auto L = pharm::ProfileLattice::make(pair_of(a), N, M);
        auto r = pharm::dp_minimize(L, pharm::Exponent(p));
        if (energy) *energy = r.energy;
        if (plateau_edge) *plateau_edge = r.plateau_edge;
    });
}

pharm_status pharm_curve_energy(const double* xy, size_t K, size_t quad_points, double* out) {
    return guarded([&] {
        need(xy, "xy");
        need(out, "out");
        std::vector<pharm::Point> v(K);
        for (size_t k = 0; k < K; ++k) v[k] = {xy[2 * k], xy[2 * k + 1]};
        *out = pharm::b_energy(pharm::PolygonalCurve(std::move(v)), quad_points ? quad_points : 10000);
    });
}

pharm_status pharm_counterexample_energies(double eps, int sub, double* e, double* e1, double* angular) {
    return guarded([&] {
        pharm::EpsMap m(eps);
        pharm::QuadSpec q;
        if (sub > 0) q = {sub, sub};
        pharm::require(sub >= 0, pharm::ErrorCode::InvalidArgument, "subdivision count must be non-negative");
        if (e) *e = pharm::e_energy(m, q);
        if (e1) *e1 = pharm::e1_energy(m, q);
        if (angular) *angular = pharm::angular_part(m, q);
    });
}

pharm_status pharm_counterexample_sample_csv(double eps, int n_s, int n_theta, char** out) {
    return guarded([&] {
        need(out, "out");
        std::ostringstream os;
        pharm::write_map_samples(os, pharm::EpsMap(eps), n_s, n_theta);
        *out = dup_string(os.str());
    });
}

pharm_status pharm_verify(const char* suite, const char* options_json, char** report_json, int* passed) {
    return guarded([&] {
        need(suite, "suite");
        need(report_json, "report_json");
        *report_json = nullptr;
        pharm::VerifyOptions opt;
        if (options_json && *options_json) {
            auto j = nlohmann::json::parse(options_json);
            pharm::require(j.is_object(), pharm::ErrorCode::InvalidArgument, "verify options must be a JSON object");
            if (j.contains("p")) opt.p = j["p"].get<double>();
            if (j.contains("r") || j.contains("r_star")) {
                opt.instance = pharm::AnnulusPair(j.value("r", 0.0), j.value("R", 1.0), j.value("r_star", 0.0),
                                                  j.value("R_star", 1.0));
            }
            opt.eps = j.value("eps", opt.eps);
            opt.seed = j.value("seed", opt.seed);
            opt.trials = j.value("trials", opt.trials);
            opt.amplitude = j.value("amplitude", opt.amplitude);
            opt.grid_s = j.value("grid_s", opt.grid_s);
            opt.grid_theta = j.value("grid_theta", opt.grid_theta);
            opt.jobs = j.value("jobs", opt.jobs);
            if (j.contains("limits")) opt.limits = j["limits"].get<std::map<std::string, double>>();
        }
        auto res = pharm::run_suite(pharm::parse_suite(suite), opt);
        *report_json = dup_string(res.report.dump(2));
        if (passed) *passed = res.pass ? 1 : 0;
    });
}

} // extern "C"
