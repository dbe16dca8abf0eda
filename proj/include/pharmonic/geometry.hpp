#pragma once

#include <optional>
#include <vector>

namespace pharm {

/// Energy exponent p >= 1.
class Exponent {
public:
    explicit Exponent(double p);
    double value() const { return p_; }
    operator double() const { return p_; }  // NOLINT
    bool in_minimizer_range() const { return p_ < 2.0; }
    /// Throws Domain unless 1 <= p < 2.
    void require_minimizer_range() const;

private:
    double p_;
};

struct ScaleFactors {
    double domain = 1.0;  ///< R
    double target = 1.0;  ///< R*
    /// Energy of the original instance = energy_factor(p) * energy of the normalized one.
    double energy_factor(double p) const;
};

class AnnulusPair {
public:
    AnnulusPair(double r, double R, double r_star, double R_star);

    double r() const { return r_; }
    double R() const { return R_; }
    double r_star() const { return r_star_; }
    double R_star() const { return R_star_; }

    bool is_normalized() const { return R_ == 1.0 && R_star_ == 1.0; }
    /// Domain and target exchanged: the instance A* -> A.
    AnnulusPair swapped() const { return AnnulusPair(r_star_, R_star_, r_, R_); }

private:
    double r_, R_, r_star_, R_star_;
};

struct Normalized {
    AnnulusPair pair;
    ScaleFactors scale;
};

Normalized normalize(const AnnulusPair& a);

/**
 * Piecewise-linear function on a strictly increasing grid.
 * Evaluation outside [front, back] throws.
 */
class SampledFunction {
public:
    SampledFunction(std::vector<double> nodes, std::vector<double> values);

    double operator()(double x) const;
    /// Slope of the linear piece containing x (right piece at interior nodes).
    double slope(double x) const;

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return nodes_.size(); }
    double front() const { return nodes_.front(); }
    double back() const { return nodes_.back(); }

private:
    std::size_t segment(double x) const;
    std::vector<double> nodes_;
    std::vector<double> values_;
};

/**
 * Non-decreasing radial profile H on [r, R] with H(r) = r*, H(R) = R*.
 *
 * When r = 0 the samples start at a positive cutoff and origin_value holds the
 * limit H(0); evaluation on [0, cutoff] interpolates linearly from the origin.
 */
class RadialProfile {
public:
    static constexpr double endpoint_tol = 1e-9;
    static constexpr double default_cutoff = 1e-6;

    RadialProfile(const AnnulusPair& a, SampledFunction samples, std::optional<double> origin_value = std::nullopt);

    const AnnulusPair& instance() const { return pair_; }
    const SampledFunction& samples() const { return samples_; }
    std::optional<double> origin_value() const { return origin_; }
    double inner() const { return pair_.r(); }
    double outer() const { return pair_.R(); }

    double at(double s) const;

    /// Nodes including the origin when present.
    std::vector<double> all_nodes() const;
    std::vector<double> all_values() const;

private:
    AnnulusPair pair_;
    SampledFunction samples_;
    std::optional<double> origin_;
};

double evaluate_profile(const RadialProfile& h, double s);

/// Identity-type profile H(s) = (R*/R) s sampled on n nodes (geometric, plus origin when r = 0).
RadialProfile linear_profile(const AnnulusPair& a, std::size_t n);

} // namespace pharm
