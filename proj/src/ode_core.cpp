#include "pharmonic/ode_core.hpp"

#include <algorithm>
#include <cfloat>
#include <map>
#include <mutex>

#include "pharmonic/error.hpp"
#include "pharmonic/numerics.hpp"

namespace pharm {

const char* branch_name(Branch b) {
    switch (b) {
    case Branch::Below: return "Below";
    case Branch::Above: return "Above";
    case Branch::Constant: return "Constant";
    }
    return "?";
}

BranchPoint BranchPoint::from_t(Branch b, double t) {
    require(t >= 0.0 && t <= 1.0, ErrorCode::Domain, "t outside [0,1]");
    if (b == Branch::Below) {
        require(t < 0.5, ErrorCode::Domain, "Below branch needs t < 1/2");
        double u = std::sqrt(t);
        return {u, (0.5 - t) / (u_max + u)};
    }
    require(b == Branch::Above && t > 0.5, ErrorCode::Domain, "Above branch needs t > 1/2");
    double u = std::sqrt(1.0 - t);
    return {u, (t - 0.5) / (u_max + u)};
}

GaugeValue gauge_value(Branch b, const BranchPoint& x) {
    double u2 = x.u * x.u;
    double half_dist = x.gap * (2.0 * u_max - x.gap);
    if (b == Branch::Below) return {u2, 1.0 - u2, -half_dist};
    return {1.0 - u2, u2, half_dist};
}

double phi_denominator(double p, const GaugeValue& g) {
    double t = g.t, omt = g.one_minus_t;
    double T1 = (t > 0.5) ? (1.0 - p) + p * omt : 1.0 - p * t;
    double T2 = (2.0 - p) * std::sqrt(t * omt);
    if (T1 > 0.0) {
        // conjugate form: T1^2 - T2^2 = A (t - 1/2)(t - t2)
        double q = p * p - 2.0 * p + 2.0;
        double A = 2.0 * q;
        double one_minus_t2 = (p - 1.0) * (p - 1.0) / q;
        double t_minus_t2 = (t > 0.5) ? one_minus_t2 - omt : g.t_minus_half + (p * p - 2.0 * p) / (2.0 * q);
        return A * g.t_minus_half * t_minus_t2 / (T1 + T2);
    }
    return T1 - T2;
}

double phi_p(double p, const GaugeValue& g) {
    require(g.t > 0.0 && g.one_minus_t > 0.0 && g.t_minus_half != 0.0, ErrorCode::Domain,
            "phi_p requires t in (0,1) \\ {1/2}");
    double num = (g.t > 0.5) ? (p - 1.0) + (2.0 - p) * g.one_minus_t : 1.0 - (2.0 - p) * g.t;
    return num / (2.0 * std::sqrt(g.t) * std::sqrt(g.one_minus_t) * phi_denominator(p, g));
}

double phi_p(double p, double t) { return phi_p(p, GaugeValue::from_t(t)); }

// ---------------------------------------------------------------------------

PhiTable::PhiTable(double p, Branch b, double delta)
    : p_(p), branch_(b), delta_(delta), regularized_(b == Branch::Above && p > 1.0) {}

double PhiTable::integrand(double u, double gap) const {
    GaugeValue g = gauge_value(branch_, {u, gap});
    if (branch_ == Branch::Below) {
        double D = phi_denominator(p_, g);
        return (1.0 - (2.0 - p_) * g.t) / (std::sqrt(g.one_minus_t) * D);
    }
    if (u < 1e-150) return p_ > 1.0 ? 1.0 : 0.0;
    double num = (p_ - 1.0) + (2.0 - p_) * g.one_minus_t;
    double D = phi_denominator(p_, g);
    return num / (std::sqrt(g.t) * -D);
}

double PhiTable::weight_integrand(double u, double gap) const {
    GaugeValue g = gauge_value(branch_, {u, gap});
    double D = phi_denominator(p_, g);
    if (branch_ == Branch::Below) return u * (1.0 - (2.0 - p_) * g.t) / (g.one_minus_t * D);
    if (regularized_) {
        if (u == 0.0) return -(2.0 - p_) / (p_ - 1.0);
        return (2.0 * u - (2.0 - p_) * std::sqrt(g.t)) / -D;
    }
    if (u < 1e-150) return 1.0;
    double num = (p_ - 1.0) + (2.0 - p_) * g.one_minus_t;
    return num / (u * -D);
}

void PhiTable::fill(int n_nodes) {
    require(n_nodes >= 2, ErrorCode::InvalidArgument, "phi table needs at least 2 uniform nodes");
    require(delta_ > 0.0 && delta_ < 0.1, ErrorCode::InvalidArgument, "delta must lie in (0, 0.1)");
    const double half = 0.5 * u_max;
    for (int i = 0; i <= n_nodes; ++i) {
        double u = half * double(i) / double(n_nodes);
        double gap = u_max - u;
        if (i == n_nodes) {
            u = half;
            gap = half;
        }
        nodes_.push_back({u, gap, 0.0, 0.0});
    }
    // distance to 1/2 in t is about sqrt(2)*gap
    const double gap_min = delta_ / std::sqrt(2.0);
    double gap = half;
    while (gap > gap_min) {
        gap *= 0.5;
        nodes_.push_back({u_max - gap, gap, 0.0, 0.0});
    }
    double F = 0.0, K = 0.0;
    for (std::size_t k = 0; k + 1 < nodes_.size(); ++k) {
        const Node& a = nodes_[k];
        double h = a.gap - nodes_[k + 1].gap;
        auto f = [&](double x) { return integrand(a.u + x, a.gap - x); };
        auto w = [&](double x) { return weight_integrand(a.u + x, a.gap - x); };
        F += adaptive_gk(f, 0.0, h, 1e-12);
        K += adaptive_gk(w, 0.0, h, 1e-12, 1e-14);
        nodes_[k + 1].F = F;
        nodes_[k + 1].K = K;
    }
    for (std::size_t k = 0; k + 1 < nodes_.size(); ++k)
        if (!(nodes_[k + 1].F > nodes_[k].F)) fail(ErrorCode::Convergence, "phi table is not strictly increasing");
    const Node& l = nodes_.back();
    const Node& m = nodes_[nodes_.size() - 2];
    tail_a_ = (l.F - m.F) / std::log(m.gap / l.gap);
    tail_b_ = l.F - tail_a_ * std::log(1.0 / l.gap);
    tail_d_ = (regularized_ ? std::log(l.u) + l.K : l.K) - l.F;
}

std::shared_ptr<const PhiTable> PhiTable::build(const Exponent& p, Branch branch, double delta, int n_nodes) {
    p.require_minimizer_range();
    require(branch != Branch::Constant, ErrorCode::InvalidArgument, "no table for the constant branch");
    std::shared_ptr<PhiTable> t(new PhiTable(p.value(), branch, delta));
    t->fill(n_nodes);
    return t;
}

std::shared_ptr<const PhiTable> PhiTable::shared(double p, Branch branch) {
    static std::mutex mu;
    static std::map<std::pair<double, int>, std::shared_ptr<const PhiTable>> cache;
    auto key = std::make_pair(p, int(branch));
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto table = build(Exponent(p), branch);
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(key, table).first->second;
}

std::size_t PhiTable::panel_of(double gap) const {
    // nodes_ gaps are strictly decreasing; find k with gap_k >= gap > gap_{k+1}
    std::size_t lo = 0, hi = nodes_.size() - 1;
    while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        if (nodes_[mid].gap >= gap)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

double PhiTable::partial(std::size_t k, double x, bool weight) const {
    if (x <= 0.0) return 0.0;
    const Node& a = nodes_[k];
    if (weight) return gauss20([&](double xi) { return weight_integrand(a.u + xi, a.gap - xi); }, 0.0, x);
    return gauss20([&](double xi) { return integrand(a.u + xi, a.gap - xi); }, 0.0, x);
}

double PhiTable::integral(const BranchPoint& x) const {
    if (x.u <= 0.0) return 0.0;
    if (x.gap <= nodes_.back().gap) return tail_a_ * std::log(1.0 / std::max(x.gap, DBL_MIN)) + tail_b_;
    std::size_t k = panel_of(x.gap);
    return nodes_[k].F + partial(k, nodes_[k].gap - x.gap, false);
}

double PhiTable::weight_integral(const BranchPoint& x) const {
    if (x.gap <= nodes_.back().gap) return integral(x) + tail_d_;
    if (regularized_ && x.u <= 0.0) return -HUGE_VAL;
    if (x.u <= 0.0) return 0.0;
    std::size_t k = panel_of(x.gap);
    double J = nodes_[k].K + partial(k, nodes_[k].gap - x.gap, true);
    return regularized_ ? std::log(x.u) + J : J;
}

BranchPoint PhiTable::locate(double y) const {
    require(!std::isnan(y), ErrorCode::Domain, "locate: NaN argument");
    if (y <= 0.0) return {0.0, u_max};
    const Node& last = nodes_.back();
    if (y >= last.F) {
        double gap = std::exp(-(y - tail_b_) / tail_a_);
        gap = std::max(gap, DBL_MIN);
        return {u_max - gap, gap};
    }
    std::size_t lo = 0, hi = nodes_.size() - 1;
    while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        if (nodes_[mid].F <= y)
            lo = mid;
        else
            hi = mid;
    }
    const Node& a = nodes_[lo];
    const Node& b = nodes_[lo + 1];
    double h = a.gap - b.gap;
    double target = y - a.F;
    double xl = 0.0, xr = h;
    double x = h * target / (b.F - a.F);
    for (int it = 0; it < 80; ++it) {
        double r = partial(lo, x, false) - target;
        if (r == 0.0) break;
        if (r < 0.0)
            xl = x;
        else
            xr = x;
        double d = integrand(a.u + x, a.gap - x);
        double xn = x - r / d;
        if (!(xn > xl && xn < xr)) xn = 0.5 * (xl + xr);
        double step = std::abs(xn - x);
        x = xn;
        if (step <= 4.0 * DBL_EPSILON * h || xr - xl <= 4.0 * DBL_EPSILON * h) break;
    }
    return {a.u + x, a.gap - x};
}

SampledFunction PhiTable::samples() const {
    std::vector<double> u, F;
    for (const auto& n : nodes_) {
        u.push_back(n.u);
        F.push_back(n.F);
    }
    return SampledFunction(std::move(u), std::move(F));
}

double invert_phi(const PhiTable& table, double y) {
    require(y >= 0.0, ErrorCode::Domain, "invert_phi requires y >= 0");
    GaugeValue g = gauge_value(table.branch(), table.locate(y));
    if (table.branch() == Branch::Below) return std::min(g.t, std::nextafter(0.5, 0.0));
    return std::max(g.t, std::nextafter(0.5, 1.0));
}

// ---------------------------------------------------------------------------

GaugeFunction::GaugeFunction(double p, double lo, double hi) : branch_(Branch::Constant), p_(p), lo_(lo), hi_(hi) {}

GaugeFunction GaugeFunction::constant(double p, double lo, double hi) {
    require(lo >= 0.0 && hi > lo, ErrorCode::InvalidArgument, "gauge domain must satisfy 0 <= lo < hi");
    return GaugeFunction(p, lo, hi);
}

GaugeFunction::GaugeFunction(std::shared_ptr<const PhiTable> table, double C, double lo, double hi)
    : branch_(table->branch()), p_(table->p()), C_(C), lo_(lo), hi_(hi), table_(std::move(table)) {
    require(lo > 0.0 && hi > lo, ErrorCode::InvalidArgument, "gauge domain must satisfy 0 < lo < hi");
    require(std::log(lo) + C >= -1e-12, ErrorCode::InvalidArgument, "integration constant needs C >= -log lo");
}

double GaugeFunction::argument(double s) const {
    double tol = 1e-12 * hi_;
    if (!(s >= lo_ - tol && s <= hi_ + tol)) fail(ErrorCode::Domain, "gauge evaluated outside its domain");
    return std::max(0.0, std::log(s) + C_);
}

BranchPoint GaugeFunction::point(double s) const {
    if (branch_ == Branch::Constant) {
        argument(s);
        return {u_max, 0.0};
    }
    return table_->locate(argument(s));
}

GaugeValue GaugeFunction::gauge(double s) const {
    if (branch_ == Branch::Constant) {
        argument(s);
        return {0.5, 0.5, 0.0};
    }
    return gauge_value(branch_, point(s));
}

double GaugeFunction::weight(double s) const {
    if (branch_ == Branch::Constant) return std::log(s);
    return table_->weight_integral(point(s));
}

double gauge_at(const GaugeFunction& g, double s) { return g.value(s); }

namespace {

/// 4th-order centered derivative in log s, returned as d/ds.
template <class F>
double log_derivative(F&& f, double s, double h) {
    double fp1 = f(s * std::exp(h)), fm1 = f(s * std::exp(-h));
    double fp2 = f(s * std::exp(2 * h)), fm2 = f(s * std::exp(-2 * h));
    return (8.0 * (fp1 - fm1) - (fp2 - fm2)) / (12.0 * h * s);
}

void check_stencil(double lo, double hi, double s, double h) {
    if (!(s * std::exp(-2 * h) >= lo && s * std::exp(2 * h) <= hi))
        fail(ErrorCode::Domain, "finite-difference stencil leaves the gauge domain");
}

double lhs23(double p, double s, const GaugeValue& g) {
    return std::pow(s, 2.0 - p) * std::sqrt(g.t) / std::pow(g.one_minus_t, 0.5 * (p - 1.0));
}

double rhs23(double p, double s, const GaugeValue& g) {
    double one_minus_pg = (g.t > 0.5) ? (1.0 - p) + p * g.one_minus_t : 1.0 - p * g.t;
    return std::pow(s, 1.0 - p) * one_minus_pg / std::pow(g.one_minus_t, 0.5 * p);
}

} // namespace

double ode_residual_23(const GaugeFunction& g, double s, double rel_step) {
    check_stencil(g.lo(), g.hi(), s, rel_step);
    double p = g.p();
    double d = log_derivative([&](double x) { return lhs23(p, x, g.gauge(x)); }, s, rel_step);
    return d - rhs23(p, s, g.gauge(s));
}

double ode_residual_23(const std::function<double(double)>& g, double p, double s, double rel_step) {
    double d = log_derivative([&](double x) { return lhs23(p, x, GaugeValue::from_t(g(x))); }, s, rel_step);
    return d - rhs23(p, s, GaugeValue::from_t(g(s)));
}

double ode_residual_28(const GaugeFunction& g, double s, double rel_step) {
    require(g.branch() != Branch::Constant, ErrorCode::Domain, "gauge residual needs a non-constant gauge");
    check_stencil(g.lo(), g.hi(), s, rel_step);
    double dg = log_derivative([&](double x) { return g.gauge(x).t_minus_half; }, s, rel_step);
    return dg * phi_p(g.p(), g.gauge(s)) - 1.0 / s;
}

double ode_residual_28(const std::function<double(double)>& g, double p, double s, double rel_step) {
    double dg = log_derivative(g, s, rel_step);
    return dg * phi_p(p, g(s)) - 1.0 / s;
}

} // namespace pharm
