// Command-line front end over the pharmonic C API.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pharmonic/pharmonic.h"

using ojson = nlohmann::ordered_json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_verify_failed = 1;
constexpr int exit_invalid = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ApiError : std::runtime_error {
    pharm_status status;
    ApiError(pharm_status s, const std::string& what) : std::runtime_error(what), status(s) {}
};

void check(pharm_status s) {
    if (s != PHARM_OK) throw ApiError(s, std::string(pharm_status_string(s)) + ": " + pharm_last_error());
}

/// Shortest round-trip decimal; "inf"/"-inf"/"nan" for non-finite values.
std::string fmt(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

ojson num(double x) {
    if (std::isfinite(x)) return x;
    return fmt(x);
}

double parse_real(const std::string& s) {
    if (s == "inf" || s == "+inf" || s == "Inf") return HUGE_VAL;
    double v = 0.0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw UsageError("not a number: " + s);
    return v;
}

struct Config {
    double p = 1.5;
    double r = 0.5, R = 1.0, r_star = 0.5, R_star = 1.0;
    double eps = 0.01;
    std::uint64_t seed = 1;
    unsigned jobs = 1;
    std::string out;

    pharm_instance instance() const { return {r, R, r_star, R_star}; }
};

ojson instance_json(const Config& c) {
    return {{"r", num(c.r)}, {"R", num(c.R)}, {"r_star", num(c.r_star)}, {"R_star", num(c.R_star)}};
}

void emit(const Config& c, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw ApiError(PHARM_ERR_IO, "cannot open output file: " + c.out);
    f << text;
    if (!f) throw ApiError(PHARM_ERR_IO, "write failed: " + c.out);
}

void emit_json(const Config& c, const ojson& j) { emit(c, j.dump(2) + "\n"); }

void require_grid(std::size_t n, const char* what) {
    if (n < 8) throw UsageError(std::string(what) + " must be at least 8");
}

void require_positive(double x, const char* what) {
    if (!(x > 0.0)) throw UsageError(std::string(what) + " must be positive");
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = i + 1 == n ? hi : lo * std::pow(hi / lo, double(i) / double(n - 1));
    return v;
}

// ---------------------------------------------------------------------------

int cmd_phase(const Config& c) {
    auto a = c.instance();
    pharm_phase ph;
    check(pharm_classify(&a, c.p, &ph));
    ojson j;
    j["command"] = "phase";
    j["seed"] = c.seed;
    j["p"] = c.p;
    j["instance"] = instance_json(c);
    j["regime"] = pharm_regime_name(ph.regime);
    j["domain_ratio"] = num(ph.domain_ratio);
    j["target_ratio"] = num(ph.target_ratio);
    j["m_value"] = num(ph.m_value);
    j["m_inverse_value"] = ph.has_m_inverse ? num(ph.m_inverse_value) : ojson(nullptr);
    j["collapse_radius"] = ph.has_collapse_radius ? num(ph.collapse_radius) : ojson(nullptr);
    j["on_boundary"] = ph.on_boundary != 0;
    emit_json(c, j);
    return exit_ok;
}

struct ModulusArgs {
    std::vector<std::string> xs;
    double x_max = 100.0;
    std::size_t n = 64;
};

int cmd_modulus(const Config& c, const ModulusArgs& m) {
    std::vector<double> xs;
    if (!m.xs.empty()) {
        for (auto& s : m.xs) xs.push_back(parse_real(s));
    } else {
        require_grid(m.n, "--n");
        if (!(m.x_max > 1.0)) throw UsageError("--x-max must exceed 1");
        xs = geometric_grid(1.0, m.x_max, m.n);
    }
    std::ostringstream os;
    os << "p,x,m_p\n";
    for (double x : xs) {
        double y;
        check(pharm_modulus(c.p, x, &y));
        os << fmt(c.p) << ',' << fmt(x) << ',' << fmt(y) << '\n';
    }
    emit(c, os.str());
    return exit_ok;
}

int cmd_profile(const Config& c, std::size_t nodes) {
    if (nodes) require_grid(nodes, "--nodes");
    auto a = c.instance();
    pharm_minimizer* raw = nullptr;
    check(pharm_minimizer_solve(&a, c.p, nodes, &raw));
    std::unique_ptr<pharm_minimizer, decltype(&pharm_minimizer_free)> m(raw, &pharm_minimizer_free);
    char* csv = nullptr;
    check(pharm_minimizer_profile_csv(m.get(), &csv));
    std::string text(csv);
    pharm_string_free(csv);
    emit(c, text);
    return exit_ok;
}

struct EnergyArgs {
    std::string profile;
    std::size_t nodes = 0;
    std::size_t dp_n = 0, dp_m = 0;
};

/// Reads the first two columns of a CSV with a header line.
void read_profile(const std::string& path, std::vector<double>& s, std::vector<double>& h) {
    std::ifstream f(path);
    if (!f) throw ApiError(PHARM_ERR_IO, "cannot open profile: " + path);
    std::string line;
    std::getline(f, line);
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::string a, b;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',')) throw UsageError("malformed profile row: " + line);
        if (!b.empty() && b.back() == '\r') b.pop_back();
        s.push_back(parse_real(a));
        h.push_back(parse_real(b));
    }
}

int cmd_energy(const Config& c, const EnergyArgs& e) {
    auto a = c.instance();
    ojson j;
    j["command"] = "energy";
    j["seed"] = c.seed;
    j["p"] = c.p;
    j["instance"] = instance_json(c);
    pharm_phase ph;
    check(pharm_classify(&a, c.p, &ph));
    j["regime"] = pharm_regime_name(ph.regime);
    if (ph.regime != PHARM_NO_MINIMIZER && c.p < 2.0) {
        pharm_minimizer* raw = nullptr;
        check(pharm_minimizer_solve(&a, c.p, e.nodes, &raw));
        std::unique_ptr<pharm_minimizer, decltype(&pharm_minimizer_free)> m(raw, &pharm_minimizer_free);
        double en, lb, cc;
        check(pharm_minimizer_energy(m.get(), &en));
        check(pharm_minimizer_lower_bound(m.get(), &lb));
        check(pharm_minimizer_integration_constant(m.get(), &cc));
        j["minimizer_energy"] = num(en);
        j["lower_bound"] = num(lb);
        j["integration_constant"] = num(cc);
    }
    if (!e.profile.empty()) {
        std::vector<double> s, h;
        read_profile(e.profile, s, h);
        double en;
        check(pharm_energy_radial(&a, c.p, s.data(), h.data(), s.size(), &en));
        j["profile"] = e.profile;
        j["profile_energy"] = num(en);
    }
    if (e.dp_n || e.dp_m) {
        require_grid(e.dp_n, "--dp-n");
        require_grid(e.dp_m, "--dp-m");
        double en, edge;
        check(pharm_dp_minimize(&a, c.p, e.dp_n, e.dp_m, &en, &edge));
        j["dp"] = {{"N", e.dp_n}, {"M", e.dp_m}, {"energy", num(en)}, {"plateau_edge", num(edge)}};
    }
    emit_json(c, j);
    return exit_ok;
}

struct VerifyArgs {
    std::string suite;
    bool have_p = false, have_instance = false;
    int trials = 100;
    double amplitude = 1e-2;
    std::size_t grid_s = 64, grid_theta = 128;
    std::vector<std::string> limits;
};

int cmd_verify(const Config& c, const VerifyArgs& v) {
    require_grid(v.grid_s, "--grid-s");
    require_grid(v.grid_theta, "--grid-theta");
    require_positive(v.amplitude, "--amplitude");
    if (v.trials < 1) throw UsageError("--trials must be positive");
    ojson opt;
    if (v.have_p) opt["p"] = c.p;
    if (v.have_instance) {
        opt["r"] = c.r;
        opt["R"] = c.R;
        opt["r_star"] = c.r_star;
        opt["R_star"] = c.R_star;
    }
    opt["eps"] = c.eps;
    opt["seed"] = c.seed;
    opt["trials"] = v.trials;
    opt["amplitude"] = v.amplitude;
    opt["grid_s"] = v.grid_s;
    opt["grid_theta"] = v.grid_theta;
    opt["jobs"] = c.jobs;
    ojson lim = ojson::object();
    for (auto& kv : v.limits) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw UsageError("--limit expects NAME=VALUE");
        lim[kv.substr(0, eq)] = parse_real(kv.substr(eq + 1));
    }
    opt["limits"] = lim;
    char* report = nullptr;
    int passed = 0;
    check(pharm_verify(v.suite.c_str(), opt.dump().c_str(), &report, &passed));
    std::string text(report);
    pharm_string_free(report);
    emit(c, text + "\n");
    return passed ? exit_ok : exit_verify_failed;
}

struct SweepArgs {
    std::vector<double> ps;
    double domain_min = 1.05, domain_max = 20.0;
    double target_min = 1.05, target_max = 200.0;
    std::size_t n = 64;
};

int cmd_sweep(const Config& c, const SweepArgs& s) {
    require_grid(s.n, "--n");
    if (!(s.domain_min > 1.0 && s.domain_max > s.domain_min)) throw UsageError("domain ratio range must satisfy 1 < min < max");
    if (!(s.target_min > 1.0 && s.target_max > s.target_min)) throw UsageError("target ratio range must satisfy 1 < min < max");
    std::vector<double> ps = s.ps.empty() ? std::vector<double>{c.p} : s.ps;
    auto dom = geometric_grid(s.domain_min, s.domain_max, s.n);
    auto tgt = geometric_grid(s.target_min, s.target_max, s.n);
    const std::size_t rows = ps.size() * dom.size();
    std::vector<std::string> chunks(rows);
    std::vector<std::string> errors(rows);
    std::vector<pharm_status> codes(rows, PHARM_OK);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k; (k = next++) < rows;) {
            const double p = ps[k / dom.size()], x = dom[k % dom.size()];
            std::string out;
            for (double y : tgt) {
                pharm_instance a{1.0 / x, 1.0, 1.0 / y, 1.0};
                pharm_phase ph;
                pharm_status st = pharm_classify(&a, p, &ph);
                if (st != PHARM_OK) {
                    codes[k] = st;
                    errors[k] = pharm_last_error();
                    break;
                }
                out += fmt(p) + ',' + fmt(x) + ',' + fmt(y) + ',' + pharm_regime_name(ph.regime) + ',' +
                       fmt(ph.m_value) + ',' + (ph.has_m_inverse ? fmt(ph.m_inverse_value) : std::string()) + '\n';
            }
            chunks[k] = std::move(out);
        }
    };
    const unsigned jobs = std::max(1u, std::min<unsigned>(c.jobs, unsigned(rows)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (std::size_t k = 0; k < rows; ++k)
        if (codes[k] != PHARM_OK) throw ApiError(codes[k], std::string(pharm_status_string(codes[k])) + ": " + errors[k]);
    std::string text = "p,domain_ratio,target_ratio,regime,m_value,m1_inverse\n";
    for (auto& ch : chunks) text += ch;
    emit(c, text);
    return exit_ok;
}

int cmd_sample(const Config& c, int n_s, int n_theta) {
    if (n_s < 8 || n_theta < 8) throw UsageError("--ns and --ntheta must be at least 8");
    char* csv = nullptr;
    check(pharm_counterexample_sample_csv(c.eps, n_s, n_theta, &csv));
    std::string text(csv);
    pharm_string_free(csv);
    emit(c, text);
    return exit_ok;
}

void add_instance(CLI::App* sub, Config& c) {
    sub->add_option("--r", c.r, "inner radius of the domain (0 = punctured disk)")->capture_default_str();
    sub->add_option("--R", c.R, "outer radius of the domain")->capture_default_str();
    sub->add_option("--rstar", c.r_star, "inner radius of the target")->capture_default_str();
    sub->add_option("--Rstar", c.R_star, "outer radius of the target")->capture_default_str();
}

void add_common(CLI::App* sub, Config& c) {
    sub->add_option("--out", c.out, "output file (default stdout)");
    sub->add_option("--seed", c.seed, "random seed, recorded in JSON output")->capture_default_str();
    sub->add_option("--jobs", c.jobs, "worker thread cap")->capture_default_str()->check(CLI::Range(1u, 1024u));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radial p-harmonic minimizers between planar annuli"};
    app.require_subcommand(1);
    app.set_version_flag("--version", pharm_version());
    Config c;

    auto* phase = app.add_subcommand("phase", "classify an instance (JSON)");
    phase->add_option("--p", c.p, "exponent p >= 1")->capture_default_str();
    add_instance(phase, c);
    add_common(phase, c);

    ModulusArgs margs;
    auto* modulus = app.add_subcommand("modulus", "table of the critical modulus m_p (CSV)");
    modulus->add_option("--p", c.p, "exponent p >= 1")->capture_default_str();
    modulus->add_option("--x", margs.xs, "explicit arguments (repeatable; 'inf' allowed)");
    modulus->add_option("--x-max", margs.x_max, "upper end of the geometric grid on [1, x_max]")->capture_default_str();
    modulus->add_option("--n", margs.n, "grid size (>= 8)")->capture_default_str();
    add_common(modulus, c);

    std::size_t nodes = 0;
    auto* profile = app.add_subcommand("profile", "radial minimizer samples s,H0,g,rho1,rho2 (CSV)");
    profile->add_option("--p", c.p, "exponent 1 <= p < 2")->capture_default_str();
    profile->add_option("--nodes", nodes, "samples on the non-constant part (0 = library default 2001)")
        ->capture_default_str();
    add_instance(profile, c);
    add_common(profile, c);

    EnergyArgs eargs;
    auto* energy = app.add_subcommand("energy", "minimizer energy, lower bound, optional profile and lattice DP (JSON)");
    energy->add_option("--p", c.p, "exponent p >= 1")->capture_default_str();
    energy->add_option("--profile", eargs.profile, "CSV whose first two columns are s,H (s = 0 row gives H(0))");
    energy->add_option("--nodes", eargs.nodes, "minimizer samples (0 = library default)")->capture_default_str();
    energy->add_option("--dp-n", eargs.dp_n, "lattice radii for the DP oracle (0 = skip)")->capture_default_str();
    energy->add_option("--dp-m", eargs.dp_m, "lattice levels for the DP oracle")->capture_default_str();
    add_instance(energy, c);
    add_common(energy, c);

    VerifyArgs vargs;
    auto* verify = app.add_subcommand("verify", "run a verification suite (JSON; exit 1 on failure)");
    verify->add_option("suite", vargs.suite, "ode | radial | curve | counterexample | fixed-boundary | duality")
        ->required()
        ->check(CLI::IsMember({"ode", "radial", "curve", "counterexample", "fixed-boundary", "duality"}));
    auto* vp = verify->add_option("--p", c.p, "exponent (suite default instances when unset)");
    auto* vr = verify->add_option("--r", c.r, "instance inner radius (suite defaults when no radius is given)");
    auto* vR = verify->add_option("--R", c.R, "instance outer radius");
    auto* vrs = verify->add_option("--rstar", c.r_star, "target inner radius");
    auto* vRs = verify->add_option("--Rstar", c.R_star, "target outer radius");
    verify->add_option("--eps", c.eps, "counterexample parameter in (0, 1/4)")->capture_default_str();
    verify->add_option("--trials", vargs.trials, "competitors / perturbations; random curves = 10 x trials")
        ->capture_default_str();
    verify->add_option("--amplitude", vargs.amplitude, "perturbation amplitude relative to R*")->capture_default_str();
    verify->add_option("--grid-s", vargs.grid_s, "radial grid size of the polar energy (>= 8)")->capture_default_str();
    verify->add_option("--grid-theta", vargs.grid_theta, "angular grid size (>= 8)")->capture_default_str();
    verify->add_option("--limit", vargs.limits,
                       "override a check limit, NAME=VALUE (repeatable). Defaults: max_gauge_residual 1e-6, "
                       "max_conservation_residual 1e-6, max_weight_identity 1e-5, energy_vs_lower_bound 1e-6, "
                       "energy_vs_sampled_profile 1e-6, endpoint_error 1e-8, min_competitor_excess -1e-6, "
                       "min_random_B_minus_2pi -1e-6, circle_error 1e-6, convexity_excess 1e-8, rotation_change 1e-8, "
                       "star_hull_change 1e-8, flow_energy_rise 1e-8, flow_radial_spread 1e-2, "
                       "flow_final_B_minus_2pi -1e-3, sandwich_lower 1e-10, sandwich_upper 1e-10, "
                       "radial_part_inside 1+1e-12, inverse_round_trip 1e-10, radial_lines_preserved 1e-12, "
                       "min_delta -1e-6, max_pair_rel_diff 1e-4, m1_inverse_round_trip 1e-6");
    add_common(verify, c);

    SweepArgs sargs;
    auto* sweep = app.add_subcommand("sweep", "phase diagram over (R/r, R*/r*) (CSV)");
    sweep->add_option("--p", sargs.ps, "exponents (repeatable; default 1.5)");
    sweep->add_option("--domain-min", sargs.domain_min, "smallest R/r")->capture_default_str();
    sweep->add_option("--domain-max", sargs.domain_max, "largest R/r")->capture_default_str();
    sweep->add_option("--target-min", sargs.target_min, "smallest R*/r*")->capture_default_str();
    sweep->add_option("--target-max", sargs.target_max, "largest R*/r*")->capture_default_str();
    sweep->add_option("--n", sargs.n, "points per axis, geometric (>= 8)")->capture_default_str();
    add_common(sweep, c);

    int n_s = 32, n_theta = 64;
    auto* sample = app.add_subcommand("counterexample-sample", "samples of the eps map s,theta,|h|,arg h (CSV)");
    sample->add_option("--eps", c.eps, "parameter in (0, 1/4)")->capture_default_str();
    sample->add_option("--ns", n_s, "radial samples (>= 8)")->capture_default_str();
    sample->add_option("--ntheta", n_theta, "angular samples (>= 8)")->capture_default_str();
    add_common(sample, c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_invalid;
    }

    try {
        if (*phase) return cmd_phase(c);
        if (*modulus) return cmd_modulus(c, margs);
        if (*profile) return cmd_profile(c, nodes);
        if (*energy) return cmd_energy(c, eargs);
        if (*verify) {
            vargs.have_p = vp->count() > 0;
            vargs.have_instance = vr->count() + vR->count() + vrs->count() + vRs->count() > 0;
            return cmd_verify(c, vargs);
        }
        if (*sweep) return cmd_sweep(c, sargs);
        if (*sample) return cmd_sample(c, n_s, n_theta);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_invalid;
    } catch (const ApiError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.status == PHARM_ERR_INTERNAL ? exit_verify_failed : exit_invalid;
    }
    return exit_invalid;
}
