#include "pharmonic/curve_energy.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "pharmonic/error.hpp"
#include "pharmonic/format.hpp"

namespace pharm {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr std::size_t max_exact_vertices = 1 << 16;

double cross(Point a, Point b) { return a.real() * b.imag() - a.imag() * b.real(); }

Point closest_on_segment(Point a, Point b, Point z) {
    Point d = b - a;
    double n = std::norm(d);
    if (n == 0.0) return a;
    double u = std::clamp(((z - a) * std::conj(d)).real() / n, 0.0, 1.0);
    return a + u * d;
}

} // namespace

PolygonalCurve::PolygonalCurve(std::vector<Point> vertices, double phase) : v_(std::move(vertices)), phase_(phase) {
    require(!v_.empty(), ErrorCode::InvalidArgument, "curve needs at least one vertex");
    require(std::isfinite(phase_), ErrorCode::InvalidArgument, "curve phase must be finite");
    for (const auto& z : v_)
        require(std::isfinite(z.real()) && std::isfinite(z.imag()) && std::abs(z) <= 1.0 + 1e-12,
                ErrorCode::Domain, "curve vertex outside the closed unit disk");
}

double PolygonalCurve::spacing() const { return two_pi / double(v_.size()); }

Point PolygonalCurve::operator()(double t) const {
    const std::size_t K = v_.size();
    double x = (t - phase_) / spacing();
    double fl = std::floor(x);
    double u = x - fl;
    auto k = std::size_t(((long long)fl % (long long)K + (long long)K) % (long long)K);
    return (1.0 - u) * v_[k] + u * v_[(k + 1) % K];
}

double PolygonalCurve::length() const {
    double L = 0.0;
    for (std::size_t k = 0; k < v_.size(); ++k) L += std::abs(v_[(k + 1) % v_.size()] - v_[k]);
    return L;
}

PolygonalCurve circle_curve(double rho, std::size_t K, double phase) {
    require(K >= 1 && rho >= 0.0 && rho <= 1.0, ErrorCode::InvalidArgument, "circle needs K >= 1, 0 <= rho <= 1");
    std::vector<Point> v(K);
    for (std::size_t k = 0; k < K; ++k) v[k] = std::polar(rho, phase + two_pi * double(k) / double(K));
    return PolygonalCurve(std::move(v), phase);
}

PolygonalCurve random_curve(std::uint64_t seed, std::size_t K) {
    require(K >= 1, ErrorCode::InvalidArgument, "random curve needs K >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<Point> v(K);
    for (auto& z : v) {
        double rad = std::sqrt(U(rng));
        z = std::polar(std::min(rad, 1.0), two_pi * U(rng));
    }
    return PolygonalCurve(std::move(v));
}

double b_energy(const PolygonalCurve& c, std::size_t quad_points) {
    const std::size_t K = c.size();
    require(quad_points >= K, ErrorCode::InvalidArgument, "quad_points must be at least the vertex count");
    const std::size_t n = (quad_points + K - 1) / K;
    const double h = c.spacing() / double(n);
    const auto& v = c.vertices();
    double dist = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        const Point a = v[k], b = v[(k + 1) % K];
        const double t0 = c.phase() + c.spacing() * double(k);
        for (std::size_t m = 0; m <= n; ++m) {
            double u = double(m) / double(n);
            double w = (m == 0 || m == n) ? 0.5 : 1.0;
            dist += w * std::abs(std::polar(1.0, t0 + h * double(m)) - ((1.0 - u) * a + u * b));
        }
    }
    return dist * h + c.length();
}

PolygonalCurve rotate_curve(const PolygonalCurve& c, double theta) {
    const Point rot = std::polar(1.0, theta);
    std::vector<Point> v = c.vertices();
    for (auto& z : v) z *= rot;
    double ph = std::fmod(c.phase() + theta, two_pi);
    return PolygonalCurve(std::move(v), ph);
}

PolygonalCurve nfold_average(const PolygonalCurve& c, std::size_t N) {
    require(N >= 1, ErrorCode::InvalidArgument, "nfold_average needs N >= 1");
    if (N == 1) return c;
    const std::size_t K = c.size();
    std::size_t L = std::lcm(K, N);
    if (L > max_exact_vertices) L = N * ((K + N - 1) / N);
    std::vector<Point> v(L, Point(0.0, 0.0));
    for (std::size_t m = 0; m < L; ++m) {
        const double t = c.phase() + two_pi * double(m) / double(L);
        Point acc = 0.0;
        for (std::size_t j = 0; j < N; ++j) {
            const double th = two_pi * double(j) / double(N);
            acc += std::polar(1.0, th) * c(t - th);
        }
        v[m] = acc / double(N);
        if (std::abs(v[m]) > 1.0) v[m] /= std::abs(v[m]);
    }
    return PolygonalCurve(std::move(v), c.phase());
}

std::vector<Point> convex_hull(std::vector<Point> pts, double eps) {
    require(!pts.empty(), ErrorCode::InvalidArgument, "convex hull of an empty set");
    std::sort(pts.begin(), pts.end(), [](Point a, Point b) {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() <= 2) return pts;
    std::vector<Point> h(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= eps) --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= eps) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    if (h.size() == 2 && h[0] == h[1]) h.resize(1);
    return h;
}

Point closest_on_hull(const std::vector<Point>& hull, Point z) {
    require(!hull.empty(), ErrorCode::InvalidArgument, "empty hull");
    if (hull.size() == 1) return hull[0];
    Point best = hull[0];
    double bd = HUGE_VAL;
    const std::size_t n = hull.size();
    const std::size_t edges = n == 2 ? 1 : n;
    for (std::size_t k = 0; k < edges; ++k) {
        Point q = closest_on_segment(hull[k], hull[(k + 1) % n], z);
        double d = std::norm(z - q);
        if (d < bd) {
            bd = d;
            best = q;
        }
    }
    return best;
}

PolygonalCurve convexify(const PolygonalCurve& c, std::size_t samples) {
    require(samples >= 1, ErrorCode::InvalidArgument, "convexify needs samples >= 1");
    const auto hull = convex_hull(c.vertices());
    std::vector<Point> v(samples);
    for (std::size_t m = 0; m < samples; ++m)
        v[m] = closest_on_hull(hull, std::polar(1.0, c.phase() + two_pi * double(m) / double(samples)));
    return PolygonalCurve(std::move(v), c.phase());
}

FlowResult symmetrization_flow(const PolygonalCurve& c, const std::vector<std::size_t>& schedule,
                               std::size_t quad_points) {
    FlowResult f;
    f.curves.push_back(c);
    f.energies.push_back(b_energy(c, std::max(quad_points, c.size())));
    for (std::size_t N : schedule) {
        auto next = convexify(nfold_average(f.curves.back(), N));
        f.energies.push_back(b_energy(next, std::max(quad_points, next.size())));
        f.curves.push_back(std::move(next));
    }
    return f;
}

double radial_spread(const PolygonalCurve& c) {
    double lo = HUGE_VAL, hi = 0.0;
    for (const auto& z : c.vertices()) {
        lo = std::min(lo, std::abs(z));
        hi = std::max(hi, std::abs(z));
    }
    return hi > 0.0 ? (hi - lo) / hi : 0.0;
}

void write_curve_csv(std::ostream& os, const PolygonalCurve& c) {
    os << "x,y\n";
    for (const auto& z : c.vertices()) os << fmt_real(z.real()) << ',' << fmt_real(z.imag()) << '\n';
}

PolygonalCurve read_curve_csv(std::istream& is) {
    std::vector<Point> v;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.find_first_of("xX") != std::string::npos) continue;
        }
        auto comma = line.find(',');
        if (comma == std::string::npos) fail(ErrorCode::Io, "curve CSV line without a comma: " + line);
        try {
            v.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            fail(ErrorCode::Io, "malformed curve CSV line: " + line);
        }
    }
    return PolygonalCurve(std::move(v));
}

void write_flow_csv(std::ostream& os, const FlowResult& f, const std::vector<std::size_t>& schedule) {
    os << "step,N,energy,k,x,y\n";
    for (std::size_t s = 0; s < f.curves.size(); ++s) {
        std::size_t N = s == 0 ? 1 : schedule.at(s - 1);
        const auto& v = f.curves[s].vertices();
        for (std::size_t k = 0; k < v.size(); ++k)
            os << s << ',' << N << ',' << fmt_real(f.energies[s]) << ',' << k << ',' << fmt_real(v[k].real()) << ','
               << fmt_real(v[k].imag()) << '\n';
    }
}

} // namespace pharm
