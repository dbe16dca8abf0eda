#pragma once

#include <complex>
#include <iosfwd>
#include <vector>

namespace pharm {

/**
 * Self-map of the punctured unit disk sending radial lines to radial lines:
 * s e^{i theta} -> f(alpha, s) e^{i alpha} with alpha = alpha(theta).
 * Piecewise smooth; breakpoints list the kinks in theta and s.
 */
class RadialLineMap {
public:
    virtual ~RadialLineMap() = default;

    virtual double angle(double theta) const = 0;
    virtual double angle_slope(double theta) const = 0;
    virtual double radius(double alpha, double s) const = 0;
    virtual double radius_ds(double alpha, double s) const = 0;
    virtual double radius_dalpha(double alpha, double s) const = 0;
    /// Breakpoints in theta within [0, 2 pi], including both ends.
    virtual std::vector<double> theta_breaks() const = 0;
    /// Breakpoints in s within [0, 1], including both ends.
    virtual std::vector<double> s_breaks() const = 0;

    std::complex<double> operator()(double s, double theta) const;
    /// |h_s| and |h_theta| at (s, theta).
    double abs_hs(double s, double theta) const;
    double abs_htheta(double s, double theta) const;
};

class IdentityMap final : public RadialLineMap {
public:
    double angle(double theta) const override { return theta; }
    double angle_slope(double) const override { return 1.0; }
    double radius(double, double s) const override { return s; }
    double radius_ds(double, double) const override { return 1.0; }
    double radius_dalpha(double, double) const override { return 0.0; }
    std::vector<double> theta_breaks() const override;
    std::vector<double> s_breaks() const override;
};

/// Circle reparametrization: S_eps(pi) onto the complement of S_eps(0), fixing pi.  Result in [0, 2 pi).
double h1_angle(double eps, double theta);
double h1_angle_inverse(double eps, double alpha);
double h1_slope(double eps, double theta);

/**
 * Radial redistribution on the line at angle alpha: zone (1) |alpha| <= eps/2 pushes [0, eps]
 * onto [0, 1 - eps]; zone (2) |alpha| >= eps pushes [1 - eps, 1] onto [eps, 1]; in between
 * the two maps are mixed with weight linear in |alpha|.
 */
double h2_radial(double eps, double alpha, double s);
double h2_radial_inverse(double eps, double alpha, double rho);

/// The composition h^(eps) = H2 o H1, eps in (0, 1/4).
class EpsMap final : public RadialLineMap {
public:
    explicit EpsMap(double eps);
    double eps() const { return eps_; }

    double angle(double theta) const override { return h1_angle(eps_, theta); }
    double angle_slope(double theta) const override { return h1_slope(eps_, theta); }
    double radius(double alpha, double s) const override { return h2_radial(eps_, alpha, s); }
    double radius_ds(double alpha, double s) const override;
    double radius_dalpha(double alpha, double s) const override;
    std::vector<double> theta_breaks() const override;
    std::vector<double> s_breaks() const override;

    /// Preimage (s, theta) of a point of the punctured disk.
    std::pair<double, double> inverse(std::complex<double> z) const;

private:
    double eps_;
};

/// Sub-cells per breakpoint-aligned cell; each sub-cell uses a 4 x 4 Gauss rule.
struct QuadSpec {
    int theta_sub = 64;
    int s_sub = 64;
};

/// e[h] = int int s |h_s| + |h_theta| ds dtheta.
double e_energy(const RadialLineMap& m, const QuadSpec& q = {});
/// E_1[h] = int int (|h_s|^2 + |h_theta / s|^2)^{1/2} s ds dtheta.
double e1_energy(const RadialLineMap& m, const QuadSpec& q = {});
/// int int |h_theta| ds dtheta.
double angular_part(const RadialLineMap& m, const QuadSpec& q = {});
/// int_0^1 s |h_s| ds on the line at angle theta (exact on the linear pieces).
double radial_part_at(const RadialLineMap& m, double theta);

/// CSV "s,theta,abs_h,arg_h" on an n_s x n_theta grid (s in (0, 1), theta in [0, 2 pi)).
void write_map_samples(std::ostream& os, const RadialLineMap& m, int n_s, int n_theta);

} // namespace pharm
