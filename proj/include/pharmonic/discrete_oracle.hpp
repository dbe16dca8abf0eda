#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pharmonic/geometry.hpp"

namespace pharm {

/**
 * Discretized class of monotone radial profiles: N radii and M value levels.
 *
 * Radii are log-uniform on [r, R]; when r = 0 the first node is the origin and
 * the rest are log-uniform from origin_cutoff*R.  Levels are log-uniform on
 * [r*, R*] (uniform when r* = 0) and include both endpoints exactly.  For
 * M >= graded_min_levels the first level gaps above r* are refined
 * geometrically, from graded_ratio times the uniform log-gap up to it.
 */
struct ProfileLattice {
    AnnulusPair instance;
    std::vector<double> s_nodes;
    std::vector<double> h_levels;

    static constexpr std::size_t graded_min_levels = 200;
    static constexpr double graded_ratio = 1e-4;

    static ProfileLattice make(const AnnulusPair& a, std::size_t N, std::size_t M, double origin_cutoff = 1e-6);
    ProfileLattice(AnnulusPair a, std::vector<double> s, std::vector<double> h);
};

/// Radial p-energy of the linear segment from (s_i, h0) to (s_j, h1), Simpson's rule
/// (substituted Gauss rule on an origin segment).  j defaults to i + 1.
double segment_cost(const ProfileLattice& L, double p, std::size_t i, double h0, double h1, std::size_t j = 0);

struct DpVertex {
    std::uint32_t node;    ///< radius index
    std::uint32_t level;   ///< level index
};

/// Path class: consecutive vertices at most max_stride radii and max_jump levels apart.
struct DpOptions {
    std::size_t max_stride = 16;
    std::size_t max_jump = 128;
};

struct DpResult {
    RadialProfile profile;
    double energy;
    std::vector<DpVertex> path;   ///< vertices of the optimal path, first to last radius
    double plateau_edge;          ///< last vertex radius with H = r*
    bool jump_saturated;          ///< some step of the optimal path uses exactly max_jump levels
};

/**
 * Exact minimum of the discretized energy over monotone lattice paths r* -> R*.
 *
 * A path is piecewise linear between lattice vertices with non-decreasing levels.
 * Segments leaving the origin may jump any number of levels.  Cost O(max_stride max_jump N M).
 */
DpResult dp_minimize(const ProfileLattice& L, const Exponent& p, const DpOptions& opt = {});

/// Brute-force minimum over every path of the same class (tiny lattices only).
double dp_exhaustive(const ProfileLattice& L, const Exponent& p, const DpOptions& opt = {});

enum class OuterRing { Fixed, Slipping };

/**
 * Map sampled on a polar grid (s_i, theta_j): radii uniform on [r, R], theta
 * periodic with n_theta points.  Row 0 is the inner ring (the origin when r = 0),
 * the last row is the outer ring.
 */
class GridMap2D {
public:
    using Fn = std::function<std::complex<double>(double s, double theta)>;

    GridMap2D(const AnnulusPair& a, std::size_t n_s, std::size_t n_theta, OuterRing mode, const Fn& f);
    static GridMap2D radial(const AnnulusPair& a, std::size_t n_s, std::size_t n_theta,
                            const std::function<double(double)>& H, OuterRing mode = OuterRing::Fixed);
    static GridMap2D identity(const AnnulusPair& a, std::size_t n_s, std::size_t n_theta,
                              OuterRing mode = OuterRing::Fixed);

    const AnnulusPair& instance() const { return pair_; }
    OuterRing mode() const { return mode_; }
    std::size_t n_s() const { return ns_; }
    std::size_t n_theta() const { return nt_; }
    double radius(std::size_t i) const { return s_[i]; }
    double theta(std::size_t j) const;
    double ds() const { return s_[1] - s_[0]; }
    double dtheta() const;

    std::complex<double>& at(std::size_t i, std::size_t j) { return v_[i * nt_ + j]; }
    const std::complex<double>& at(std::size_t i, std::size_t j) const { return v_[i * nt_ + j]; }
    std::vector<std::complex<double>>& data() { return v_; }
    const std::vector<std::complex<double>>& data() const { return v_; }

    /// Enforce the admissible set: values in the closed target annulus, inner ring on the inner
    /// circle (a single point at the origin when r = 0), outer ring fixed or on the outer circle.
    void project();
    /// Largest violation of the constraints enforced by project().
    double constraint_violation() const;
    /// Cyclic shift of the theta index by k (with the matching rotation of values).
    GridMap2D rotated(std::size_t k) const;

private:
    AnnulusPair pair_;
    OuterRing mode_;
    std::size_t ns_, nt_;
    std::vector<double> s_;
    std::vector<std::complex<double>> v_;
};

/// Discrete int int (|h_s|^2 + |h_theta/s|^2)^{p/2} s ds dtheta with staggered radial differences.
/// reg > 0 replaces |Dh|^2 by |Dh|^2 + reg.
double grid_energy(const GridMap2D& m, const Exponent& p, double reg = 0.0);

struct ProbeReport {
    double base_energy = 0.0;
    std::vector<double> deltas;
    double min_delta = 0.0;
    double amplitude = 0.0;
    std::uint64_t seed = 0;
};

/// Random smooth perturbations vanishing on the outer ring; inner ring may only slide.
ProbeReport perturbation_probe(const GridMap2D& base, const Exponent& p, int trials, double amplitude,
                               std::uint64_t seed);

/// Perturbation of one angular mode: radial part vanishes on both rings, tangential part on the outer ring.
GridMap2D perturbed(const GridMap2D& base, double radial_amp, double tangential_amp, int n_radial, int m_angular,
                    double phase);

struct DescentResult {
    GridMap2D map;
    double energy;
    std::vector<double> history;   ///< energy after each accepted step, starting with the seed
    int accepted = 0;
    bool stalled = false;
};

/// Projected descent with forward-difference gradients and step halving; outer ring may slip.
DescentResult descend_free_outer(const GridMap2D& seed, const Exponent& p, int steps, double reg = 1e-12);

/// Report object {instance, p, grid, energies, deltas, seed}.
nlohmann::ordered_json probe_report_json(const GridMap2D& base, const Exponent& p, const ProbeReport& rep);

} // namespace pharm
