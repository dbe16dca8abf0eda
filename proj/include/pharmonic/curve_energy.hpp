#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace pharm {

using Point = std::complex<double>;

/**
 * Closed polygon in the closed unit disk with vertices at uniform parameter spacing.
 *
 * Vertex k sits at parameter phase + 2 pi k / K; the curve is linear in the
 * parameter between consecutive vertices and closes from the last vertex back
 * to the first.  K = 1 is a constant curve.
 */
class PolygonalCurve {
public:
    explicit PolygonalCurve(std::vector<Point> vertices, double phase = 0.0);

    const std::vector<Point>& vertices() const { return v_; }
    std::size_t size() const { return v_.size(); }
    double phase() const { return phase_; }
    double spacing() const;

    /// gamma(t), 2 pi periodic.
    Point operator()(double t) const;
    /// Polygon perimeter (exact).
    double length() const;

private:
    std::vector<Point> v_;
    double phase_;
};

/// Centered circle of radius rho with K vertices.
PolygonalCurve circle_curve(double rho, std::size_t K, double phase = 0.0);

/// K points uniform in the closed disk (seeded).
PolygonalCurve random_curve(std::uint64_t seed, std::size_t K);

/**
 * B(gamma) = int |e^{it} - gamma(t)| dt + length.  The distance term uses the
 * trapezoid rule on ceil(quad_points / K) equal sub-intervals of every edge.
 */
double b_energy(const PolygonalCurve& c, std::size_t quad_points = 10000);

/// t -> e^{i theta} gamma(t - theta).
PolygonalCurve rotate_curve(const PolygonalCurve& c, double theta);

/// Average of the N rotated copies theta_k = 2 pi k / N.
PolygonalCurve nfold_average(const PolygonalCurve& c, std::size_t N);

/// Convex hull, counter-clockwise, collinear points dropped.  One or two points when degenerate.
std::vector<Point> convex_hull(std::vector<Point> pts, double eps = 1e-12);

/// Closest point to z on the boundary of the convex polygon (or point / segment) hull.
Point closest_on_hull(const std::vector<Point>& hull, Point z);

/// Hull boundary of the vertex set, parametrized by t -> closest hull point to e^{it} on `samples` parameters.
PolygonalCurve convexify(const PolygonalCurve& c, std::size_t samples = 4096);

struct FlowResult {
    std::vector<PolygonalCurve> curves;   ///< starting curve, then one per schedule entry
    std::vector<double> energies;
};

/// nfold_average followed by convexify for each N in the schedule.
FlowResult symmetrization_flow(const PolygonalCurve& c, const std::vector<std::size_t>& schedule,
                               std::size_t quad_points = 10000);

/// (max |v| - min |v|) / max |v| over the vertices; 0 for the origin.
double radial_spread(const PolygonalCurve& c);

/// CSV "x,y" per vertex.
void write_curve_csv(std::ostream& os, const PolygonalCurve& c);
PolygonalCurve read_curve_csv(std::istream& is);
/// CSV "step,N,energy,k,x,y" for every curve of a flow.
void write_flow_csv(std::ostream& os, const FlowResult& f, const std::vector<std::size_t>& schedule);

} // namespace pharm
