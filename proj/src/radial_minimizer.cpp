#include "pharmonic/radial_minimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

#include "pharmonic/error.hpp"
#include "pharmonic/format.hpp"
#include "pharmonic/numerics.hpp"

namespace pharm {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double identity_log_tol = 1e-13;

/// Boundary-matching integral  int_r^1 kappa(g) ds/s = K(C) - K(C - L) on a branch table.
double boundary_integral(const PhiTable& t, double C, double L) {
    return t.weight_integral(t.locate(C)) - t.weight_integral(t.locate(std::max(0.0, C - L)));
}

double solve_constant(const PhiTable& table, double L, double target, bool increasing) {
    auto f = [&](double C) {
        double I = boundary_integral(table, C, L) - target;
        return increasing ? I : -I;
    };
    double lo = L;
    if (f(lo) >= 0.0) return lo;
    double width = 1.0;
    double hi = L + width;
    while (f(hi) < 0.0) {
        lo = hi;
        width *= 2.0;
        hi = L + width;
        if (width > 1e6) fail(ErrorCode::Bracket, "integration constant could not be bracketed");
    }
    return bisect_root(f, lo, hi);
}

double plateau_energy(double p, double rs, double a, double b) {
    // 2 pi r*^p int_a^b s^{1-p} ds
    if (rs == 0.0) return 0.0;
    double e = (2.0 - p == 0.0) ? std::log(b / a) : (std::pow(b, 2.0 - p) - std::pow(a, 2.0 - p)) / (2.0 - p);
    return two_pi * std::pow(rs, p) * e;
}

} // namespace

RadialMinimizer::RadialMinimizer(const AnnulusPair& a, double p, PhaseReport phase, GaugeFunction g, double R0,
                                 double logK1, RadialProfile prof)
    : pair_(a), norm_(normalize(a)), p_(p), phase_(std::move(phase)), gauge_(std::move(g)), R0_(R0), logK1_(logK1),
      profile_(std::move(prof)) {}

double RadialMinimizer::h_norm(double s) const {
    const double r = norm_.pair.r(), rs = norm_.pair.r_star();
    if (!(s >= r - 1e-12 && s <= 1.0 + 1e-12)) fail(ErrorCode::Domain, "profile evaluated outside [r, R]");
    if (gauge_.branch() == Branch::Constant) return r > 0.0 ? s * rs / r : s;
    if (s <= R0_) return rs;
    if (s >= 1.0) return 1.0;
    return std::exp(gauge_.weight(s) - logK1_);
}

GaugeValue RadialMinimizer::g_norm(double s) const {
    if (gauge_.branch() != Branch::Constant && s <= R0_ && phase_.regime == Regime::Collapsed) return {0.0, 1.0, -0.5};
    return gauge_.gauge(std::clamp(s, std::max(gauge_.lo(), 0.0), 1.0));
}

double RadialMinimizer::h_at(double s) const {
    return norm_.scale.target * h_norm(s / norm_.scale.domain);
}

GaugeValue RadialMinimizer::gauge_at(double s) const { return g_norm(s / norm_.scale.domain); }

double RadialMinimizer::rho1(double s) const {
    double sn = s / norm_.scale.domain;
    GaugeValue g = g_norm(sn);
    double H = h_norm(sn);
    double v = std::pow(sn, 2.0 - p_) * std::sqrt(g.t) * std::pow(H, p_ - 1.0) / std::pow(g.one_minus_t, 0.5 * (p_ - 1.0));
    return std::pow(norm_.scale.domain, 2.0 - p_) * std::pow(norm_.scale.target, p_ - 1.0) * v;
}

double RadialMinimizer::rho2(double s) const {
    double sn = s / norm_.scale.domain;
    GaugeValue g = g_norm(sn);
    double H = h_norm(sn);
    double v = std::pow(sn, 1.0 - p_) * std::pow(H, p_ - 1.0) * std::pow(g.one_minus_t, 1.0 - 0.5 * p_);
    return std::pow(norm_.scale.target / norm_.scale.domain, p_ - 1.0) * v;
}

RadialMinimizer solve_profile(const AnnulusPair& a, const Exponent& p, const SolveOptions& opt) {
    p.require_minimizer_range();
    require(opt.nodes >= 8, ErrorCode::InvalidArgument, "profile needs at least 8 nodes");
    PhaseReport phase = classify(a, p);
    if (phase.regime == Regime::NoMinimizer) fail(ErrorCode::Regime, "no radial minimizer exists for this instance");
    Normalized n = normalize(a);
    const double r = n.pair.r(), rs = n.pair.r_star();
    const double pv = p.value();

    std::optional<GaugeFunction> gauge;
    double R0 = r;
    bool identity = (r == 0.0 && rs == 0.0) || (r > 0.0 && rs > 0.0 && std::abs(std::log(rs / r)) < identity_log_tol);
    if (identity) {
        gauge = GaugeFunction::constant(pv, r, 1.0);
    } else if (phase.regime == Regime::Collapsed) {
        R0 = *phase.collapse_radius / a.R();
        gauge.emplace(PhiTable::shared(pv, Branch::Below), -std::log(R0), R0, 1.0);
    } else if (rs > r) {
        auto table = PhiTable::shared(pv, Branch::Below);
        double L = -std::log(r);
        double C = solve_constant(*table, L, -std::log(rs), true);
        gauge.emplace(table, C, r, 1.0);
    } else {
        auto table = PhiTable::shared(pv, Branch::Above);
        double L = -std::log(r);
        double C = rs == 0.0 ? L : solve_constant(*table, L, -std::log(rs), false);
        gauge.emplace(table, C, r, 1.0);
    }
    double logK1 = gauge->weight(1.0);

    // samples of the exact profile on the normalized scale
    std::vector<double> s, h;
    std::optional<double> origin;
    auto eval = [&](double x) {
        if (gauge->branch() == Branch::Constant) return r > 0.0 ? x * rs / r : x;
        if (x <= R0) return rs;
        return std::exp(gauge->weight(x) - logK1);
    };
    double start = R0;
    if (r == 0.0) {
        origin = rs;
        start = identity ? RadialProfile::default_cutoff : R0;
    }
    if (phase.regime == Regime::Collapsed) {
        double plo = r > 0.0 ? r : std::min(RadialProfile::default_cutoff, 0.5 * R0);
        std::size_t np = std::max<std::size_t>(8, opt.nodes / 16);
        for (double x : geometric_grid(plo, R0, np)) {
            s.push_back(x);
            h.push_back(rs);
        }
        s.pop_back();
        h.pop_back();
    }
    for (double x : geometric_grid(start, 1.0, opt.nodes)) {
        s.push_back(x);
        h.push_back(eval(x));
    }
    if (r > 0.0) h.front() = std::abs(h.front() - rs) <= RadialProfile::endpoint_tol ? rs : h.front();
    h.back() = 1.0;
    for (std::size_t i = 1; i < h.size(); ++i) h[i] = std::max(h[i], h[i - 1]);
    for (auto& x : s) x *= a.R();
    for (auto& x : h) x *= a.R_star();
    if (origin) *origin *= a.R_star();
    RadialProfile prof(a, SampledFunction(std::move(s), std::move(h)), origin);

    RadialMinimizer m(a, pv, phase, *gauge, R0, logK1, std::move(prof));

    // exact energy on the normalized scale
    double E = 0.0;
    if (gauge->branch() == Branch::Constant) {
        E = std::pow(2.0, 0.5 * pv) * std::numbers::pi * (1.0 - r * r);
    } else {
        auto integrand = [&](double x) {
            double sx = std::exp(x);
            GaugeValue g = gauge->gauge(sx);
            double H = std::exp(gauge->weight(sx) - logK1);
            return std::pow(H, pv) * std::pow(sx, 2.0 - pv) / std::pow(g.one_minus_t, 0.5 * pv);
        };
        double a0 = std::log(R0);
        const int pieces = 16;
        for (int i = 0; i < pieces; ++i) {
            double x0 = a0 * (1.0 - double(i) / pieces), x1 = a0 * (1.0 - double(i + 1) / pieces);
            E += adaptive_gk(integrand, x0, x1, opt.energy_rel_tol, 1e-15);
        }
        E *= two_pi;
        if (phase.regime == Regime::Collapsed) E += plateau_energy(pv, rs, r, R0);
    }
    m.energy_ = E * n.scale.energy_factor(pv);
    return m;
}

double energy_radial(const RadialProfile& h, const Exponent& p) {
    const double pv = p.value();
    std::vector<double> s = h.all_nodes(), v = h.all_values();
    double E = 0.0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        double a = s[i], b = s[i + 1];
        double m = (v[i + 1] - v[i]) / (b - a);
        double h0 = v[i];
        if (a == 0.0 && h0 > 0.0) {
            if (pv >= 2.0) return HUGE_VAL;
            // s = b w^k with k = 1/(2-p) removes the s^{1-p} endpoint singularity
            double k = 1.0 / (2.0 - pv);
            auto f = [&](double w) {
                double x = b * std::pow(w, k);
                double q = m * m * x * x + (h0 + m * x) * (h0 + m * x);
                return std::pow(b, 2.0 - pv) * k * std::pow(q, 0.5 * pv);
            };
            for (int j = 0; j < 8; ++j) E += gauss20(f, j / 8.0, (j + 1) / 8.0);
            continue;
        }
        auto f = [&](double x) {
            double H = h0 + m * (x - a);
            double q = m * m + (H / x) * (H / x);
            return std::pow(q, 0.5 * pv) * x;
        };
        // graded pieces with ratio <= 2 so the s^{1-p} behaviour near a small a stays resolved
        const int pieces = b > 2.0 * a ? int(std::ceil(std::log2(b / a))) : 1;
        const double q = std::pow(b / a, 1.0 / pieces);
        double lo = a;
        for (int j = 0; j < pieces; ++j) {
            double hi = j + 1 == pieces ? b : lo * q;
            E += gauss20(f, lo, hi);
            lo = hi;
        }
    }
    return two_pi * E;
}

double lower_bound_exact(const AnnulusPair& a, const Exponent& p, const RadialMinimizer& m) {
    const AnnulusPair& b = m.instance();
    if (!(a.r() == b.r() && a.R() == b.R() && a.r_star() == b.r_star() && a.R_star() == b.R_star() &&
          p.value() == m.p()))
        fail(ErrorCode::Regime, "lower bound requested for a different instance than the minimizer");
    if (m.regime() == Regime::NoMinimizer) fail(ErrorCode::Regime, "no minimizer");
    Normalized n = normalize(a);
    const double pv = p.value(), r = n.pair.r(), rs = n.pair.r_star();
    auto A = [&](double s, const GaugeValue& g) {
        return std::pow(s, 2.0 - pv) * std::sqrt(g.t) / std::pow(g.one_minus_t, 0.5 * (pv - 1.0));
    };
    double outer = A(1.0, m.gauge_at(a.R()));
    double inner = 0.0;
    double plateau = 0.0;
    if (m.regime() == Regime::Collapsed) {
        double R0 = m.collapse_radius() / a.R();
        plateau = plateau_energy(pv, rs, r, R0);
    } else if (r > 0.0 && rs > 0.0) {
        inner = A(r, m.gauge_at(a.r())) * std::pow(rs, pv);
    }
    return (two_pi * (outer - inner) + plateau) * n.scale.energy_factor(pv);
}

WeightPair weights(const RadialMinimizer& m) {
    const auto& nodes = m.profile().samples().nodes();
    std::vector<double> r1(nodes.size()), r2(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        r1[i] = m.rho1(nodes[i]);
        r2[i] = m.rho2(nodes[i]);
    }
    return {SampledFunction(nodes, std::move(r1)), SampledFunction(nodes, std::move(r2))};
}

std::pair<double, double> dual_energy_check(const AnnulusPair& a) {
    Exponent one(1.0);
    AnnulusPair b = a.swapped();
    if (classify(a, one).regime != Regime::Homeomorphic || classify(b, one).regime != Regime::Homeomorphic)
        fail(ErrorCode::Regime, "duality check needs both directions in the Homeomorphic regime");
    return {solve_profile(a, one).energy(), solve_profile(b, one).energy()};
}

RadialProfile random_competitor(const AnnulusPair& a, std::uint64_t seed, std::size_t nodes, const RadialProfile* base,
                                double amplitude) {
    require(nodes >= 8, ErrorCode::InvalidArgument, "competitor needs at least 8 nodes");
    std::mt19937_64 rng(seed);
    std::vector<double> s;
    std::optional<double> origin;
    if (a.r() == 0.0) {
        s = geometric_grid(RadialProfile::default_cutoff * a.R(), a.R(), nodes);
        origin = a.r_star();
    } else {
        s = geometric_grid(a.r(), a.R(), nodes);
    }
    std::vector<double> v(s.size());
    const double rs = a.r_star(), Rs = a.R_star();
    if (base) {
        std::normal_distribution<double> nd(0.0, 1.0);
        double c[5];
        for (int k = 1; k <= 4; ++k) c[k] = nd(rng) / k;
        double l0 = std::log(s.front()), l1 = std::log(s.back());
        for (std::size_t i = 0; i < s.size(); ++i) {
            double x = (std::log(s[i]) - l0) / (l1 - l0);
            double phi = 0.0;
            for (int k = 1; k <= 4; ++k) phi += c[k] * std::sin(k * std::numbers::pi * x);
            v[i] = base->at(s[i]) * std::exp(amplitude * phi);
        }
    } else {
        std::exponential_distribution<double> ex(1.0);
        std::uniform_real_distribution<double> un(0.0, 1.0);
        std::vector<double> inc(s.size() - 1);
        for (auto& d : inc) d = ex(rng) * (un(rng) < 0.25 ? 8.0 : 0.2);
        std::shuffle(inc.begin(), inc.end(), rng);
        double total = 0.0;
        for (double d : inc) total += d;
        double acc = 0.0;
        v[0] = rs;
        for (std::size_t i = 1; i < s.size(); ++i) {
            acc += inc[i - 1];
            v[i] = rs + (Rs - rs) * acc / total;
        }
        std::vector<double> sm(v);
        for (std::size_t i = 1; i + 1 < v.size(); ++i) {
            std::size_t lo = i >= 3 ? i - 3 : 0, hi = std::min(v.size() - 1, i + 3);
            double acc2 = 0.0;
            for (std::size_t j = lo; j <= hi; ++j) acc2 += v[j];
            sm[i] = acc2 / double(hi - lo + 1);
        }
        v = sm;
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = std::clamp(v[i], rs, Rs);
        if (i > 0) v[i] = std::max(v[i], v[i - 1]);
    }
    if (!origin) v.front() = rs;
    v.back() = Rs;
    return RadialProfile(a, SampledFunction(std::move(s), std::move(v)), origin);
}

void write_profile_csv(std::ostream& os, const RadialMinimizer& m) {
    os << "s,H0,g,rho1,rho2\n";
    for (double s : m.profile().samples().nodes()) {
        os << fmt_real(s) << ',' << fmt_real(m.h_at(s)) << ',' << fmt_real(m.gauge_at(s).t) << ','
           << fmt_real(m.rho1(s)) << ',' << fmt_real(m.rho2(s)) << '\n';
    }
}

} // namespace pharm
