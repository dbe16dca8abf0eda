#include "doctest.h"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "pharmonic/error.hpp"
#include "pharmonic/geometry.hpp"
#include "pharmonic/radial_minimizer.hpp"

using namespace pharm;

namespace {

constexpr double pi = std::numbers::pi;

/// Quadratic profile from r* to R* on [r, R], sampled on n uniform nodes.
RadialProfile quadratic_profile(const AnnulusPair& a, std::size_t n) {
    std::vector<double> s(n), h(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x = double(i) / double(n - 1);
        s[i] = a.r() + (a.R() - a.r()) * x;
        h[i] = a.r_star() + (a.R_star() - a.r_star()) * x * x;
    }
    s.back() = a.R();
    h.back() = a.R_star();
    return RadialProfile(a, SampledFunction(s, h));
}

} // namespace

TEST_CASE("exponent range") {
    CHECK_THROWS_AS(Exponent(0.99), Error);
    CHECK_THROWS_AS(Exponent(std::nan("")), Error);
    CHECK_NOTHROW(Exponent(1.0));
    CHECK_NOTHROW(Exponent(3.0));
    CHECK_NOTHROW(Exponent(1.5).require_minimizer_range());
    CHECK_THROWS_AS(Exponent(2.0).require_minimizer_range(), Error);
    CHECK(Exponent(1.99).in_minimizer_range());
    CHECK_FALSE(Exponent(2.0).in_minimizer_range());
}

TEST_CASE("annulus pair validation") {
    CHECK_NOTHROW(AnnulusPair(0.0, 1.0, 0.0, 1.0));
    CHECK_THROWS_AS(AnnulusPair(1.0, 1.0, 0.5, 1.0), Error);
    CHECK_THROWS_AS(AnnulusPair(-0.1, 1.0, 0.5, 1.0), Error);
    CHECK_THROWS_AS(AnnulusPair(0.5, 1.0, 0.7, 0.6), Error);
    CHECK_THROWS_AS(AnnulusPair(0.5, INFINITY, 0.5, 1.0), Error);
    auto s = AnnulusPair(0.2, 2.0, 0.3, 4.0).swapped();
    CHECK(s.r() == 0.3);
    CHECK(s.R() == 4.0);
    CHECK(s.r_star() == 0.2);
    CHECK(s.R_star() == 2.0);
}

TEST_CASE("normalize") {
    auto n1 = normalize(AnnulusPair(0.5, 1.0, 0.25, 1.0));
    CHECK(n1.pair.r() == 0.5);
    CHECK(n1.pair.r_star() == 0.25);
    CHECK(n1.scale.domain == 1.0);
    CHECK(n1.scale.target == 1.0);

    auto n2 = normalize(AnnulusPair(1.0, 2.0, 0.5, 2.0));
    CHECK(n2.pair.r() == 0.5);
    CHECK(n2.pair.R() == 1.0);
    CHECK(n2.pair.r_star() == 0.25);
    CHECK(n2.pair.R_star() == 1.0);
    CHECK(n2.pair.is_normalized());

    SUBCASE("idempotent") {
        auto a = AnnulusPair(0.3, 3.0, 0.7, 1.4);
        auto once = normalize(a).pair;
        auto twice = normalize(once).pair;
        CHECK(once.r() == twice.r());
        CHECK(once.R() == twice.R());
        CHECK(once.r_star() == twice.r_star());
        CHECK(once.R_star() == twice.R_star());
    }
}

TEST_CASE("energy back-scaling matches a dilated profile") {
    const AnnulusPair big(0.6, 3.0, 0.5, 2.5);
    const auto norm = normalize(big);
    for (double p : {1.0, 1.3, 2.0, 3.0}) {
        double direct = energy_radial(quadratic_profile(big, 801), Exponent(p));
        double scaled = norm.scale.energy_factor(p) * energy_radial(quadratic_profile(norm.pair, 801), Exponent(p));
        CHECK(direct == doctest::Approx(scaled).epsilon(1e-12));
        CHECK(norm.scale.energy_factor(p) == doctest::Approx(std::pow(2.5, p) * std::pow(3.0, 2.0 - p)));
    }
}

TEST_CASE("sampled function") {
    SampledFunction f({0.0, 1.0}, {0.0, 1.0});
    CHECK(f(0.25) == doctest::Approx(0.25));
    CHECK(f(0.0) == 0.0);
    CHECK(f(1.0) == 1.0);
    CHECK(f.slope(0.5) == doctest::Approx(1.0));
    CHECK_THROWS_AS(f(1.0 + 1e-9), Error);
    CHECK_THROWS_AS(f(-1e-9), Error);

    SampledFunction g({1.0, 2.0, 4.0}, {0.0, 2.0, 3.0});
    CHECK(g(1.5) == doctest::Approx(1.0));
    CHECK(g(3.0) == doctest::Approx(2.5));
    CHECK(g.slope(2.0) == doctest::Approx(0.5));

    CHECK_THROWS_AS(SampledFunction({0.0}, {1.0}), Error);
    CHECK_THROWS_AS(SampledFunction({0.0, 0.0}, {1.0, 2.0}), Error);
    CHECK_THROWS_AS(SampledFunction({0.0, 1.0, 0.5}, {0.0, 1.0, 2.0}), Error);
    CHECK_THROWS_AS(SampledFunction({0.0, 1.0}, {0.0}), Error);
}

TEST_CASE("radial profile invariants") {
    const AnnulusPair a(0.5, 1.0, 0.5, 1.0);
    auto id = linear_profile(a, 50);
    CHECK(evaluate_profile(id, 0.7) == doctest::Approx(0.7).epsilon(1e-14));
    CHECK_THROWS_AS(evaluate_profile(id, 0.4), Error);

    CHECK_THROWS_AS(RadialProfile(a, SampledFunction({0.5, 0.7, 1.0}, {0.5, 0.8, 0.75})), Error);
    CHECK_THROWS_AS(RadialProfile(a, SampledFunction({0.5, 1.0}, {0.5 + 1e-6, 1.0})), Error);
    CHECK_THROWS_AS(RadialProfile(a, SampledFunction({0.5, 1.0}, {0.5, 1.0 - 1e-6})), Error);
    CHECK_NOTHROW(RadialProfile(a, SampledFunction({0.5, 1.0}, {0.5 + 1e-10, 1.0})));
    CHECK_THROWS_AS(RadialProfile(a, SampledFunction({0.4, 1.0}, {0.5, 1.0})), Error);

    SUBCASE("punctured disk with origin value") {
        const AnnulusPair d(0.0, 1.0, 0.0, 1.0);
        RadialProfile p(d, SampledFunction({1e-6, 1.0}, {1e-6, 1.0}), 0.0);
        CHECK(p.at(0.25) == doctest::Approx(0.25));
        CHECK(p.at(0.0) == 0.0);
        CHECK(p.at(5e-7) == doctest::Approx(5e-7));
        CHECK(p.all_nodes().front() == 0.0);
        CHECK(p.all_nodes().size() == 3);
        CHECK_THROWS_AS(RadialProfile(d, SampledFunction({1e-6, 1.0}, {1e-6, 1.0}), 0.1), Error);
        auto lin = linear_profile(d, 20);
        CHECK(lin.origin_value().value() == 0.0);
        CHECK(lin.samples().front() == doctest::Approx(RadialProfile::default_cutoff));
    }

    SUBCASE("collapsed profile is constant on the plateau") {
        const AnnulusPair c(0.2, 1.0, 0.4, 1.0);
        RadialProfile p(c, SampledFunction({0.2, 0.6, 1.0}, {0.4, 0.4, 1.0}));
        CHECK(evaluate_profile(p, 0.3) == 0.4);
        CHECK(evaluate_profile(p, 0.59) == 0.4);
        CHECK(evaluate_profile(p, 0.8) == doctest::Approx(0.7));
    }
}

TEST_CASE("linear profile is geometric and exact") {
    const AnnulusPair a(0.25, 2.0, 0.5, 4.0);
    auto h = linear_profile(a, 40);
    const auto& s = h.samples().nodes();
    REQUIRE(s.size() == 40);
    CHECK(s.front() == 0.25);
    CHECK(s.back() == 2.0);
    double ratio = s[1] / s[0];
    for (std::size_t i = 1; i + 1 < s.size(); ++i) CHECK(s[i + 1] / s[i] == doctest::Approx(ratio).epsilon(1e-12));
    for (double x : {0.25, 0.3, 1.0, 1.9}) CHECK(h.at(x) == doctest::Approx(2.0 * x).epsilon(1e-14));
    boost::math::quadrature::tanh_sinh<double> ts;
    for (double p : {1.0, 1.7}) {
        double oracle = 2.0 * pi * ts.integrate([&](double x) { return std::pow(8.0, p / 2.0) * x; }, 0.25, 2.0);
        CHECK(energy_radial(h, Exponent(p)) == doctest::Approx(oracle).epsilon(1e-12));
    }
}
