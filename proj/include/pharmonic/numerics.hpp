#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace pharm {

/// Bisection on a continuous function with f(lo), f(hi) of opposite sign (or zero).
/// Stops when the bracket stops shrinking in floating point or after max_iter halvings.
double bisect_root(const std::function<double(double)>& f, double lo, double hi, int max_iter = 200,
                   double x_tol = 0.0);

/// n points from a to b (both > 0) with constant ratio; endpoints are exact.
std::vector<double> geometric_grid(double a, double b, std::size_t n);
std::vector<double> uniform_grid(double a, double b, std::size_t n);

/// 20-point Gauss-Legendre rule on [a, b].
double gauss20(const std::function<double(double)>& f, double a, double b);

/// Adaptive 31-point Gauss-Kronrod with relative tolerance; throws Convergence if the
/// error estimate stays above max(abs_tol, rel_tol*|I|).
double adaptive_gk(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-13,
                   double abs_tol = 0.0, unsigned max_depth = 15, double* err_out = nullptr);

/// 4-point Gauss rule used on smooth cells.
double gauss4(const std::function<double(double)>& f, double a, double b);

} // namespace pharm
