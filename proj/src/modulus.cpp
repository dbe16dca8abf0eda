#include "pharmonic/modulus.hpp"

#include <cmath>

#include "pharmonic/error.hpp"
#include "pharmonic/numerics.hpp"
#include "pharmonic/ode_core.hpp"

namespace pharm {

const char* regime_name(Regime r) {
    switch (r) {
    case Regime::Homeomorphic: return "Homeomorphic";
    case Regime::Collapsed: return "Collapsed";
    case Regime::NoMinimizer: return "NoMinimizer";
    }
    return "?";
}

double log_modulus(double p, double y) {
    require(y >= 0.0, ErrorCode::Domain, "log_modulus needs y >= 0");
    if (std::isinf(y)) return HUGE_VAL;
    auto table = PhiTable::shared(p, Branch::Below);
    return table->weight_integral(table->locate(y));
}

ExtendedReal modulus_mp(const Exponent& p, const ExtendedReal& x) {
    p.require_minimizer_range();
    if (x.is_infinite()) return ExtendedReal::infinity();
    require(x.value() >= 1.0, ErrorCode::Domain, "m_p is defined for x >= 1");
    return std::exp(log_modulus(p, std::log(x.value())));
}

namespace {

/// y >= 0 with log_modulus(p, y) = target (target >= 0); +inf past the double range.
double solve_log_modulus(double p, double target) {
    if (target <= 0.0) return 0.0;
    // M(y) < y, so the root lies above target
    double lo = target, hi = 2.0 * target + 1.0;
    while (log_modulus(p, hi) < target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e4) return HUGE_VAL;
    }
    return bisect_root([&](double y) { return log_modulus(p, y) - target; }, lo, hi);
}

} // namespace

ExtendedReal modulus_m1_inverse(const ExtendedReal& y) {
    if (y.is_infinite()) return ExtendedReal::infinity();
    require(y.value() >= 1.0, ErrorCode::Domain, "m_1^{-1} is defined for y >= 1");
    double z = solve_log_modulus(1.0, std::log(y.value()));
    if (z > 709.0) return ExtendedReal::infinity();
    return std::exp(z);
}

PhaseReport classify(const AnnulusPair& a, const Exponent& p) {
    p.require_minimizer_range();
    PhaseReport rep;
    rep.p = p.value();
    Normalized n = normalize(a);
    double r = n.pair.r(), rs = n.pair.r_star();
    rep.domain_ratio = r > 0.0 ? ExtendedReal(1.0 / r) : ExtendedReal::infinity();
    rep.target_ratio = rs > 0.0 ? ExtendedReal(1.0 / rs) : ExtendedReal::infinity();
    rep.m_value = modulus_mp(p, rep.domain_ratio);
    bool p_one = p.value() == 1.0;
    if (p_one) rep.m_inverse_value = modulus_m1_inverse(rep.domain_ratio);

    const ExtendedReal& T = rep.target_ratio;
    const ExtendedReal& m = rep.m_value;
    auto near = [](const ExtendedReal& x, const ExtendedReal& y) {
        if (x.is_infinite() || y.is_infinite()) return x == y;
        return std::abs(x.value() - y.value()) <= phase_rel_tol * std::max(x.value(), y.value());
    };
    auto below = [&](const ExtendedReal& x, const ExtendedReal& y) { return x < y && !near(x, y); };

    if (below(T, m)) {
        rep.regime = Regime::Collapsed;
        rep.collapse_radius = collapse_radius(a, p);
        return rep;
    }
    if (p_one && below(*rep.m_inverse_value, T)) {
        rep.regime = Regime::NoMinimizer;
        return rep;
    }
    rep.regime = Regime::Homeomorphic;
    if (near(T, m) && !(r == rs)) {
        rep.on_boundary = true;
        rep.collapse_radius = a.r();
    }
    if (p_one && near(T, *rep.m_inverse_value) && !(r == rs)) rep.on_boundary = true;
    return rep;
}

double collapse_radius(const AnnulusPair& a, const Exponent& p) {
    p.require_minimizer_range();
    Normalized n = normalize(a);
    double r = n.pair.r(), rs = n.pair.r_star();
    ExtendedReal T = rs > 0.0 ? ExtendedReal(1.0 / rs) : ExtendedReal::infinity();
    ExtendedReal m = modulus_mp(p, r > 0.0 ? ExtendedReal(1.0 / r) : ExtendedReal::infinity());
    if (!(T < m) || T.is_infinite() || std::abs(T.value() - m.to_double()) <= phase_rel_tol * T.value())
        fail(ErrorCode::Regime, "collapse radius requested outside the Collapsed regime");
    double y0 = solve_log_modulus(p, -std::log(rs));
    if (r > 0.0) y0 = std::min(y0, -std::log(r));
    return a.R() * std::exp(-y0);
}

} // namespace pharm
