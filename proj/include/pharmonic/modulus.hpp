#pragma once

#include <optional>

#include "pharmonic/extended_real.hpp"
#include "pharmonic/geometry.hpp"

namespace pharm {

enum class Regime { Homeomorphic, Collapsed, NoMinimizer };

const char* regime_name(Regime r);

struct PhaseReport {
    Regime regime = Regime::Homeomorphic;
    double p = 1.0;
    ExtendedReal domain_ratio;   ///< R/r
    ExtendedReal target_ratio;   ///< R*/r*
    ExtendedReal m_value;        ///< m_p(R/r)
    std::optional<ExtendedReal> m_inverse_value;  ///< m_1^{-1}(R/r), p = 1 only
    /// Collapsed: R0 on the original scale.  Boundary tie: r (degenerate collapse radius).
    std::optional<double> collapse_radius;
    bool on_boundary = false;
};

/// Relative tolerance of the phase-boundary comparisons.
inline constexpr double phase_rel_tol = 1e-9;

/// log m_p(e^y) for y >= 0.
double log_modulus(double p, double y);

/// m_p(x) for x >= 1 (m_p(1) = 1 by convention, m_p(inf) = inf).
ExtendedReal modulus_mp(const Exponent& p, const ExtendedReal& x);

/// x with m_1(x) = y, for y >= 1; inf when the root overflows double range.
ExtendedReal modulus_m1_inverse(const ExtendedReal& y);

PhaseReport classify(const AnnulusPair& a, const Exponent& p);

/// R0 in (r, R) with m_p(R/R0) = R*/r*; requires the Collapsed regime.
double collapse_radius(const AnnulusPair& a, const Exponent& p);

} // namespace pharm
