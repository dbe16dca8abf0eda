#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>

#include "pharmonic/geometry.hpp"
#include "pharmonic/modulus.hpp"
#include "pharmonic/ode_core.hpp"

namespace pharm {

struct WeightPair {
    SampledFunction rho1;
    SampledFunction rho2;
};

struct SolveOptions {
    std::size_t nodes = 2001;   ///< profile samples on the non-constant part
    double energy_rel_tol = 1e-12;
};

/**
 * Radial minimizer of the p-energy between annuli, 1 <= p < 2.
 *
 * All pointwise accessors take and return values on the original scale; the
 * profile is evaluated exactly through the gauge, not from the samples.
 */
class RadialMinimizer {
public:
    const AnnulusPair& instance() const { return pair_; }
    const Normalized& normalized() const { return norm_; }
    double p() const { return p_; }
    Regime regime() const { return phase_.regime; }
    const PhaseReport& phase() const { return phase_; }
    const GaugeFunction& gauge() const { return gauge_; }
    const RadialProfile& profile() const { return profile_; }
    /// E_p of the exact profile (adaptive quadrature, closed-form plateau).
    double energy() const { return energy_; }
    double integration_constant() const { return gauge_.C(); }
    /// Start of the non-constant part: R0 when Collapsed, r otherwise.
    double collapse_radius() const { return R0_ * norm_.scale.domain; }

    double h_at(double s) const;
    GaugeValue gauge_at(double s) const;
    double rho1(double s) const;
    double rho2(double s) const;

private:
    friend RadialMinimizer solve_profile(const AnnulusPair&, const Exponent&, const SolveOptions&);
    RadialMinimizer(const AnnulusPair& a, double p, PhaseReport phase, GaugeFunction g, double R0, double logK1,
                    RadialProfile prof);

    double h_norm(double s) const;
    GaugeValue g_norm(double s) const;

    AnnulusPair pair_;
    Normalized norm_;
    double p_;
    PhaseReport phase_;
    GaugeFunction gauge_;
    double R0_;      ///< normalized
    double logK1_;   ///< weight at s = 1
    RadialProfile profile_;
    double energy_ = 0.0;
};

RadialMinimizer solve_profile(const AnnulusPair& a, const Exponent& p, const SolveOptions& opt = {});

/// 2 pi int (H'^2 + (H/s)^2)^{p/2} s ds with H piecewise linear between samples.
double energy_radial(const RadialProfile& h, const Exponent& p);

/// The telescoped boundary term 2 pi [s^{2-p} sqrt(g)/(1-g)^{(p-1)/2} H^p] (plus the plateau energy when collapsed).
double lower_bound_exact(const AnnulusPair& a, const Exponent& p, const RadialMinimizer& m);

WeightPair weights(const RadialMinimizer& m);

/// E_1 of the minimizers A -> A* and A* -> A (p = 1, both Homeomorphic).
std::pair<double, double> dual_energy_check(const AnnulusPair& a);

/**
 * Seeded random monotone profile with the instance's endpoint values.
 * With a base profile the competitor is a smooth multiplicative perturbation of it
 * (relative size amplitude); otherwise a smoothed random increasing step sequence.
 */
RadialProfile random_competitor(const AnnulusPair& a, std::uint64_t seed, std::size_t nodes = 400,
                                const RadialProfile* base = nullptr, double amplitude = 0.05);

/// CSV with header s,H0,g,rho1,rho2 on the profile nodes.
void write_profile_csv(std::ostream& os, const RadialMinimizer& m);

} // namespace pharm
