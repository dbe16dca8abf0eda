#include "pharmonic/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "pharmonic/error.hpp"
#include "pharmonic/numerics.hpp"

namespace pharm {

Exponent::Exponent(double p) : p_(p) {
    require(std::isfinite(p) && p >= 1.0, ErrorCode::InvalidArgument, "exponent must satisfy p >= 1");
}

void Exponent::require_minimizer_range() const {
    require(p_ < 2.0, ErrorCode::Domain, "minimizer construction requires 1 <= p < 2");
}

double ScaleFactors::energy_factor(double p) const { return std::pow(target, p) * std::pow(domain, 2.0 - p); }

AnnulusPair::AnnulusPair(double r, double R, double r_star, double R_star)
    : r_(r), R_(R), r_star_(r_star), R_star_(R_star) {
    bool ok = std::isfinite(r) && std::isfinite(R) && std::isfinite(r_star) && std::isfinite(R_star) && r >= 0.0 &&
              R > r && r_star >= 0.0 && R_star > r_star;
    require(ok, ErrorCode::InvalidArgument, "annulus pair requires 0 <= r < R and 0 <= r* < R*");
}

Normalized normalize(const AnnulusPair& a) {
    if (a.is_normalized()) return {a, ScaleFactors{}};
    return {AnnulusPair(a.r() / a.R(), 1.0, a.r_star() / a.R_star(), 1.0), ScaleFactors{a.R(), a.R_star()}};
}

SampledFunction::SampledFunction(std::vector<double> nodes, std::vector<double> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
    require(nodes_.size() >= 2, ErrorCode::InvalidArgument, "sampled function needs at least two nodes");
    require(nodes_.size() == values_.size(), ErrorCode::InvalidArgument, "nodes/values size mismatch");
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i)
        require(nodes_[i] < nodes_[i + 1], ErrorCode::InvalidArgument, "nodes must be strictly increasing");
    for (double v : values_) require(std::isfinite(v), ErrorCode::InvalidArgument, "non-finite sample value");
}

std::size_t SampledFunction::segment(double x) const {
    if (!(x >= nodes_.front() && x <= nodes_.back())) fail(ErrorCode::Domain, "evaluation outside sampled range");
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    std::size_t k = std::size_t(it - nodes_.begin());
    if (k == 0) k = 1;
    if (k >= nodes_.size()) k = nodes_.size() - 1;
    return k - 1;
}

double SampledFunction::operator()(double x) const {
    std::size_t k = segment(x);
    double x0 = nodes_[k], x1 = nodes_[k + 1];
    if (x == x1) return values_[k + 1];
    double lam = (x - x0) / (x1 - x0);
    return values_[k] + lam * (values_[k + 1] - values_[k]);
}

double SampledFunction::slope(double x) const {
    std::size_t k = segment(x);
    return (values_[k + 1] - values_[k]) / (nodes_[k + 1] - nodes_[k]);
}

RadialProfile::RadialProfile(const AnnulusPair& a, SampledFunction samples, std::optional<double> origin_value)
    : pair_(a), samples_(std::move(samples)), origin_(origin_value) {
    const auto& x = samples_.nodes();
    const auto& v = samples_.values();
    double tolR = endpoint_tol * std::max(1.0, a.R());
    double tolH = endpoint_tol * std::max(1.0, a.R_star());
    if (origin_) {
        require(a.r() == 0.0, ErrorCode::InvalidArgument, "origin value only for punctured disks");
        require(x.front() > 0.0, ErrorCode::InvalidArgument, "origin cutoff must be positive");
        require(std::abs(*origin_ - a.r_star()) <= tolH, ErrorCode::InvalidArgument, "H(0) must equal r*");
        require(v.front() >= *origin_ - tolH, ErrorCode::InvalidArgument, "profile must be non-decreasing");
    } else {
        require(std::abs(x.front() - a.r()) <= tolR, ErrorCode::InvalidArgument, "profile must start at r");
        require(std::abs(v.front() - a.r_star()) <= tolH, ErrorCode::InvalidArgument, "H(r) must equal r*");
    }
    require(std::abs(x.back() - a.R()) <= tolR, ErrorCode::InvalidArgument, "profile must end at R");
    require(std::abs(v.back() - a.R_star()) <= tolH, ErrorCode::InvalidArgument, "H(R) must equal R*");
    double slack = 1e-13 * std::max(1.0, a.R_star());
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        require(v[i + 1] >= v[i] - slack, ErrorCode::InvalidArgument, "profile must be non-decreasing");
}

double RadialProfile::at(double s) const {
    if (origin_ && s >= 0.0 && s < samples_.front()) {
        double lam = s / samples_.front();
        return *origin_ + lam * (samples_.values().front() - *origin_);
    }
    return samples_(s);
}

std::vector<double> RadialProfile::all_nodes() const {
    std::vector<double> out;
    if (origin_) out.push_back(0.0);
    out.insert(out.end(), samples_.nodes().begin(), samples_.nodes().end());
    return out;
}

std::vector<double> RadialProfile::all_values() const {
    std::vector<double> out;
    if (origin_) out.push_back(*origin_);
    out.insert(out.end(), samples_.values().begin(), samples_.values().end());
    return out;
}

double evaluate_profile(const RadialProfile& h, double s) { return h.at(s); }

RadialProfile linear_profile(const AnnulusPair& a, std::size_t n) {
    double k = a.R_star() / a.R();
    require(std::abs(a.r() * k - a.r_star()) <= RadialProfile::endpoint_tol * std::max(1.0, a.R_star()),
            ErrorCode::InvalidArgument, "linear profile needs r*/R* = r/R");
    if (a.r() == 0.0) {
        auto s = geometric_grid(RadialProfile::default_cutoff * a.R(), a.R(), n);
        std::vector<double> v(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) v[i] = k * s[i];
        v.back() = a.R_star();
        return RadialProfile(a, SampledFunction(std::move(s), std::move(v)), 0.0);
    }
    auto s = geometric_grid(a.r(), a.R(), n);
    std::vector<double> v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) v[i] = k * s[i];
    v.front() = a.r_star();
    v.back() = a.R_star();
    return RadialProfile(a, SampledFunction(std::move(s), std::move(v)));
}

} // namespace pharm
