#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "pharmonic/geometry.hpp"

namespace pharm {

enum class Branch { Below, Above, Constant };

const char* branch_name(Branch b);

/// A point t in (0,1) carried together with accurately computed 1 - t and t - 1/2.
struct GaugeValue {
    double t;
    double one_minus_t;
    double t_minus_half;

    static GaugeValue from_t(double t) { return {t, 1.0 - t, t - 0.5}; }
};

/// sqrt(1/2): the branch coordinate u runs over [0, u_max).
inline constexpr double u_max = 0.70710678118654752440;

/**
 * Position on a branch.  Below: u = sqrt(t).  Above: u = sqrt(1 - t).
 * gap = u_max - u is stored separately so points near t = 1/2 keep full
 * relative precision.
 */
struct BranchPoint {
    double u;
    double gap;

    static BranchPoint from_u(double u) { return {u, u_max - u}; }
    static BranchPoint from_gap(double gap) { return {u_max - gap, gap}; }
    static BranchPoint from_t(Branch b, double t);
};

GaugeValue gauge_value(Branch b, const BranchPoint& x);

/// phi_p(t) = (1 - (2-p)t) / (2 sqrt(t) sqrt(1-t) (1 - pt - (2-p) sqrt(t(1-t)))).
double phi_p(double p, double t);
double phi_p(double p, const GaugeValue& g);

/// Denominator factor 1 - pt - (2-p) sqrt(t(1-t)), evaluated without cancellation near t = 1/2.
double phi_denominator(double p, const GaugeValue& g);

/**
 * Tabulated integral function of phi_p on one branch.
 *
 * Below: F(u) = Phi_p(u^2), Phi_p(0) = 0.
 * Above: F(u) = Psi_p(1 - u^2), Psi_p(1) = 0, where Psi_p(t) = -int_1^t phi_p.
 * Both are increasing in u and grow like a*log(1/gap) + b toward the pole.
 *
 * The table also carries the cumulative weight K(u) = int kappa dF with
 * kappa = sqrt(t/(1-t)).  On the Above branch with p > 1 that integral diverges
 * logarithmically at u = 0 and K is normalized as log u + int_0^u (kappa F' - 1/u).
 */
class PhiTable {
public:
    static constexpr double default_delta = 1e-8;
    static constexpr int default_nodes = 32;

    static std::shared_ptr<const PhiTable> build(const Exponent& p, Branch branch, double delta = default_delta,
                                                 int n_nodes = default_nodes);
    /// Process-wide cached table with default resolution.
    static std::shared_ptr<const PhiTable> shared(double p, Branch branch);

    double p() const { return p_; }
    Branch branch() const { return branch_; }
    double delta() const { return delta_; }
    bool weight_regularized() const { return regularized_; }

    /// d F / d u at a branch point.
    double integrand(double u, double gap) const;
    /// kappa dF/du, minus 1/u when the weight is regularized.
    double weight_integrand(double u, double gap) const;

    double integral(const BranchPoint& x) const;
    double weight_integral(const BranchPoint& x) const;
    /// Inverse of integral(): the branch point with F = y (y >= 0).
    BranchPoint locate(double y) const;

    double tail_slope() const { return tail_a_; }
    double tail_offset() const { return tail_b_; }
    /// Table samples of F against u.
    SampledFunction samples() const;
    std::size_t node_count() const { return nodes_.size(); }
    double last_gap() const { return nodes_.back().gap; }

    PhiTable(const PhiTable&) = delete;
    PhiTable& operator=(const PhiTable&) = delete;

private:
    struct Node {
        double u, gap, F, K;
    };
    PhiTable(double p, Branch b, double delta);
    void fill(int n_nodes);
    std::size_t panel_of(double gap) const;
    double partial(std::size_t k, double x, bool weight) const;

    double p_;
    Branch branch_;
    double delta_;
    bool regularized_;
    std::vector<Node> nodes_;
    double tail_a_ = 0.5, tail_b_ = 0.0, tail_d_ = 0.0;
};

/// t with Phi_p(t) = y (Below) or Psi_p(t) = y (Above), clamped strictly inside the branch.
double invert_phi(const PhiTable& table, double y);

/**
 * Gauge g(s) = Phi_p^{-1}(log s + C) (Below), Psi_p^{-1}(log s + C) (Above), or 1/2.
 * Defined on [lo, hi] with lo > 0 and log lo + C >= 0.
 */
class GaugeFunction {
public:
    static GaugeFunction constant(double p, double lo, double hi);
    GaugeFunction(std::shared_ptr<const PhiTable> table, double C, double lo, double hi);

    Branch branch() const { return branch_; }
    double p() const { return p_; }
    double C() const { return C_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    const PhiTable* table() const { return table_.get(); }

    BranchPoint point(double s) const;
    GaugeValue gauge(double s) const;
    double value(double s) const { return gauge(s).t; }
    /// K(point(s)): log H(s) = weight(s) - weight(1) on a solved profile.
    double weight(double s) const;

private:
    GaugeFunction(double p, double lo, double hi);
    double argument(double s) const;

    Branch branch_;
    double p_;
    double C_ = 0.0;
    double lo_, hi_;
    std::shared_ptr<const PhiTable> table_;
};

double gauge_at(const GaugeFunction& g, double s);

/// d/ds[s^{2-p} sqrt(g)/(1-g)^{(p-1)/2}] - s^{1-p}(1-pg)/(1-g)^{p/2} by 4th-order differences in log s.
double ode_residual_23(const GaugeFunction& g, double s, double rel_step = 1e-4);
double ode_residual_23(const std::function<double(double)>& g, double p, double s, double rel_step = 1e-4);

/// g'(s) phi_p(g(s)) - 1/s by 4th-order differences in log s.
double ode_residual_28(const GaugeFunction& g, double s, double rel_step = 1e-4);
double ode_residual_28(const std::function<double(double)>& g, double p, double s, double rel_step = 1e-4);

} // namespace pharm
