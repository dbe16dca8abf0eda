#include "pharmonic/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "pharmonic/error.hpp"
#include "pharmonic/format.hpp"
#include "pharmonic/numerics.hpp"

namespace pharm {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * pi;

double wrap_2pi(double x) {
    double y = std::fmod(x, two_pi);
    if (y < 0.0) y += two_pi;
    return y >= two_pi ? 0.0 : y;
}

/// Representative of alpha in (-pi, pi].
double wrap_pi(double a) {
    double y = wrap_2pi(a);
    return y > pi ? y - two_pi : y;
}

void check_eps(double eps) {
    require(eps > 0.0 && eps < 0.25, ErrorCode::InvalidArgument, "eps must lie in (0, 1/4)");
}

double f1(double eps, double s) { return s < eps ? s * (1.0 - eps) / eps : (1.0 - eps) + (s - eps) * eps / (1.0 - eps); }
double f1_ds(double eps, double s) { return s < eps ? (1.0 - eps) / eps : eps / (1.0 - eps); }
double f2(double eps, double s) {
    return s < 1.0 - eps ? s * eps / (1.0 - eps) : eps + (s - (1.0 - eps)) * (1.0 - eps) / eps;
}
double f2_ds(double eps, double s) { return s < 1.0 - eps ? eps / (1.0 - eps) : (1.0 - eps) / eps; }

/// Zone (2) weight: 0 on |alpha| <= eps/2, 1 on |alpha| >= eps.
double mix_weight(double eps, double alpha) {
    double a = std::abs(wrap_pi(alpha));
    return std::clamp((a - 0.5 * eps) / (0.5 * eps), 0.0, 1.0);
}

double mix_weight_dalpha(double eps, double alpha) {
    double w = wrap_pi(alpha), a = std::abs(w);
    if (a <= 0.5 * eps || a >= eps) return 0.0;
    return (w > 0 ? 1.0 : -1.0) / (0.5 * eps);
}

std::vector<double> finish(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end(), [](double a, double b) { return std::abs(a - b) < 1e-15; }), v.end());
    return v;
}

template <class F>
double integrate_cells(const RadialLineMap& m, const QuadSpec& q, F&& integrand) {
    require(q.theta_sub >= 1 && q.s_sub >= 1, ErrorCode::InvalidArgument, "quadrature subdivisions must be positive");
    static const double x4[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
    static const double w4[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};
    const auto tb = m.theta_breaks();
    const auto sb = m.s_breaks();
    double total = 0.0;
    for (std::size_t a = 0; a + 1 < tb.size(); ++a) {
        const double ht = (tb[a + 1] - tb[a]) / q.theta_sub;
        for (int i = 0; i < q.theta_sub; ++i) {
            const double t0 = tb[a] + ht * i;
            for (int gi = 0; gi < 4; ++gi) {
                const double th = t0 + 0.5 * ht * (1.0 + x4[gi]);
                const double wt = 0.5 * ht * w4[gi];
                double inner = 0.0;
                for (std::size_t b = 0; b + 1 < sb.size(); ++b) {
                    const double hs = (sb[b + 1] - sb[b]) / q.s_sub;
                    for (int j = 0; j < q.s_sub; ++j) {
                        const double s0 = sb[b] + hs * j;
                        for (int gj = 0; gj < 4; ++gj) {
                            const double s = s0 + 0.5 * hs * (1.0 + x4[gj]);
                            inner += 0.5 * hs * w4[gj] * integrand(s, th);
                        }
                    }
                }
                total += wt * inner;
            }
        }
    }
    return total;
}

} // namespace

std::complex<double> RadialLineMap::operator()(double s, double theta) const {
    double a = angle(theta);
    return std::polar(radius(a, s), a);
}

double RadialLineMap::abs_hs(double s, double theta) const { return std::abs(radius_ds(angle(theta), s)); }

double RadialLineMap::abs_htheta(double s, double theta) const {
    double a = angle(theta);
    return angle_slope(theta) * std::hypot(radius_dalpha(a, s), radius(a, s));
}

std::vector<double> IdentityMap::theta_breaks() const { return {0.0, pi, two_pi}; }
std::vector<double> IdentityMap::s_breaks() const { return {0.0, 1.0}; }

double h1_angle(double eps, double theta) {
    check_eps(eps);
    // x in [pi - eps/2, 3 pi - eps/2)
    const double lo = pi - 0.5 * eps;
    double x = lo + wrap_2pi(theta - lo);
    double y;
    if (x <= pi + 0.5 * eps)
        y = pi + (x - pi) * (two_pi - eps) / eps;
    else
        y = (two_pi - 0.5 * eps) + (x - (pi + 0.5 * eps)) * eps / (two_pi - eps);
    return wrap_2pi(y);
}

double h1_angle_inverse(double eps, double alpha) {
    check_eps(eps);
    // y in [eps/2, 2 pi + eps/2)
    double y = 0.5 * eps + wrap_2pi(alpha - 0.5 * eps);
    double x;
    if (y <= two_pi - 0.5 * eps)
        x = pi + (y - pi) * eps / (two_pi - eps);
    else
        x = (pi + 0.5 * eps) + (y - (two_pi - 0.5 * eps)) * (two_pi - eps) / eps;
    return wrap_2pi(x);
}

double h1_slope(double eps, double theta) {
    check_eps(eps);
    const double lo = pi - 0.5 * eps;
    double x = lo + wrap_2pi(theta - lo);
    return x <= pi + 0.5 * eps ? (two_pi - eps) / eps : eps / (two_pi - eps);
}

double h2_radial(double eps, double alpha, double s) {
    check_eps(eps);
    require(s >= 0.0 && s <= 1.0, ErrorCode::Domain, "h2_radial needs s in [0, 1]");
    double w = mix_weight(eps, alpha);
    return (1.0 - w) * f1(eps, s) + w * f2(eps, s);
}

double h2_radial_inverse(double eps, double alpha, double rho) {
    check_eps(eps);
    require(rho >= 0.0 && rho <= 1.0, ErrorCode::Domain, "h2_radial_inverse needs rho in [0, 1]");
    if (rho == 0.0 || rho == 1.0) return rho;
    return bisect_root([&](double s) { return h2_radial(eps, alpha, s) - rho; }, 0.0, 1.0);
}

EpsMap::EpsMap(double eps) : eps_(eps) { check_eps(eps); }

double EpsMap::radius_ds(double alpha, double s) const {
    double w = mix_weight(eps_, alpha);
    return (1.0 - w) * f1_ds(eps_, s) + w * f2_ds(eps_, s);
}

double EpsMap::radius_dalpha(double alpha, double s) const {
    return mix_weight_dalpha(eps_, alpha) * (f2(eps_, s) - f1(eps_, s));
}

std::vector<double> EpsMap::theta_breaks() const {
    std::vector<double> v{0.0, two_pi};
    v.push_back(pi - 0.5 * eps_);
    v.push_back(pi + 0.5 * eps_);
    for (double a : {-eps_, -0.5 * eps_, 0.0, 0.5 * eps_, eps_}) v.push_back(h1_angle_inverse(eps_, a));
    return finish(std::move(v));
}

std::vector<double> EpsMap::s_breaks() const { return finish({0.0, eps_, 1.0 - eps_, 1.0}); }

std::pair<double, double> EpsMap::inverse(std::complex<double> z) const {
    double rho = std::abs(z);
    require(rho > 0.0 && rho < 1.0, ErrorCode::Domain, "inverse needs a point of the punctured disk");
    double alpha = std::arg(z);
    return {h2_radial_inverse(eps_, alpha, rho), h1_angle_inverse(eps_, alpha)};
}

double e_energy(const RadialLineMap& m, const QuadSpec& q) {
    return integrate_cells(m, q, [&](double s, double th) { return s * m.abs_hs(s, th) + m.abs_htheta(s, th); });
}

double e1_energy(const RadialLineMap& m, const QuadSpec& q) {
    return integrate_cells(m, q, [&](double s, double th) { return std::hypot(s * m.abs_hs(s, th), m.abs_htheta(s, th)); });
}

double angular_part(const RadialLineMap& m, const QuadSpec& q) {
    return integrate_cells(m, q, [&](double s, double th) { return m.abs_htheta(s, th); });
}

double radial_part_at(const RadialLineMap& m, double theta) {
    static const double x2[2] = {-0.5773502691896258, 0.5773502691896258};
    const auto sb = m.s_breaks();
    double total = 0.0;
    for (std::size_t b = 0; b + 1 < sb.size(); ++b) {
        const double c = 0.5 * (sb[b] + sb[b + 1]), h = 0.5 * (sb[b + 1] - sb[b]);
        for (double x : x2) {
            double s = c + h * x;
            total += h * s * m.abs_hs(s, theta);
        }
    }
    return total;
}

void write_map_samples(std::ostream& os, const RadialLineMap& m, int n_s, int n_theta) {
    require(n_s >= 1 && n_theta >= 1, ErrorCode::InvalidArgument, "sample grid must be non-empty");
    os << "s,theta,abs_h,arg_h\n";
    for (int i = 1; i <= n_s; ++i) {
        double s = double(i) / double(n_s + 1);
        for (int j = 0; j < n_theta; ++j) {
            double th = two_pi * double(j) / double(n_theta);
            auto z = m(s, th);
            os << fmt_real(s) << ',' << fmt_real(th) << ',' << fmt_real(std::abs(z)) << ',' << fmt_real(std::arg(z))
               << '\n';
        }
    }
}

} // namespace pharm
