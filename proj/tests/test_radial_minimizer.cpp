#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "pharmonic/error.hpp"
#include "pharmonic/radial_minimizer.hpp"

using namespace pharm;

namespace {

constexpr double pi = std::numbers::pi;

struct Inst {
    double p, r, rs;
};

const Inst homeomorphic[] = {{1.2, 0.4, 0.5}, {1.7, 0.5, 0.3}, {1.5, 0.3, 0.35}, {1.0, 0.4, 0.45}, {1.3, 0.3, 0.0}};
const Inst collapsed[] = {{1.5, 0.1, 0.8}, {1.2, 0.3, 0.8}, {1.0, 0.2, 0.7}, {1.8, 0.05, 0.5}, {1.3, 0.0, 0.3}};

double identity_energy(double p, double r) { return std::pow(2.0, p / 2.0) * pi * (1.0 - r * r); }

/// int_lo^1 sqrt(g)/(s sqrt(1-g)) ds from the solved gauge.
double boundary_integral(const RadialMinimizer& m, double lo) {
    boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate(
        [&](double s) {
            auto g = m.gauge_at(s);
            return std::sqrt(g.t) / (s * std::sqrt(g.one_minus_t));
        },
        lo, 1.0);
}

} // namespace

TEST_CASE("identity instance") {
    for (double p : {1.0, 1.3, 1.5, 1.9})
        for (double r : {0.0, 0.25, 0.5}) {
            CAPTURE(p);
            CAPTURE(r);
            auto m = solve_profile(AnnulusPair(r, 1.0, r, 1.0), Exponent(p));
            CHECK(m.regime() == Regime::Homeomorphic);
            CHECK(m.gauge().branch() == Branch::Constant);
            for (double s : {r, 0.6, 0.9, 1.0}) CHECK(m.h_at(s) == doctest::Approx(s).epsilon(1e-12));
            CHECK(m.energy() == doctest::Approx(identity_energy(p, r)).epsilon(1e-12));
            CHECK(energy_radial(m.profile(), Exponent(p)) == doctest::Approx(identity_energy(p, r)).epsilon(1e-12));
            CHECK(lower_bound_exact(m.instance(), Exponent(p), m) ==
                  doctest::Approx(identity_energy(p, r)).epsilon(1e-12));
            const double c = std::sqrt(0.5) * std::pow(2.0, (p - 1.0) / 2.0);
            for (double s : {0.55, 0.8}) {
                CHECK(m.rho1(s) == doctest::Approx(s * c).epsilon(1e-12));
                CHECK(m.rho2(s) == doctest::Approx(c).epsilon(1e-12));
            }
        }
}

TEST_CASE("energy_radial closed forms") {
    SUBCASE("identity on the punctured disk, p = 1") {
        auto h = linear_profile(AnnulusPair(0.0, 1.0, 0.0, 1.0), 64);
        CHECK(energy_radial(h, Exponent(1.0)) == doctest::Approx(std::sqrt(2.0) * pi).epsilon(1e-12));
    }
    SUBCASE("identity on A(0.5, 1), p = 1.5") {
        auto h = linear_profile(AnnulusPair(0.5, 1.0, 0.5, 1.0), 10);
        CHECK(energy_radial(h, Exponent(1.5)) == doctest::Approx(std::pow(2.0, 0.75) * pi * 0.75).epsilon(1e-12));
    }
    SUBCASE("plateau contributes 2 pi r*^p int s^{1-p} ds") {
        const double p = 1.4, r = 0.2, rs = 0.4, R0 = 0.5;
        AnnulusPair a(r, 1.0, rs, 1.0);
        RadialProfile h(a, SampledFunction({r, R0, 1.0}, {rs, rs, 1.0}));
        const double plateau = 2.0 * pi * std::pow(rs, p) * (std::pow(R0, 2.0 - p) - std::pow(r, 2.0 - p)) / (2.0 - p);
        const double k = (1.0 - rs) / (1.0 - R0);
        boost::math::quadrature::tanh_sinh<double> ts;
        const double ramp = 2.0 * pi * ts.integrate(
                                           [&](double s) {
                                               double H = rs + k * (s - R0);
                                               return std::pow(k * k + (H / s) * (H / s), p / 2.0) * s;
                                           },
                                           R0, 1.0);
        CHECK(energy_radial(h, Exponent(p)) == doctest::Approx(plateau + ramp).epsilon(1e-10));
    }
    SUBCASE("plateau from the origin") {
        const double p = 1.6, rs = 0.3, R0 = 0.4;
        AnnulusPair a(0.0, 1.0, rs, 1.0);
        RadialProfile h(a, SampledFunction({1e-6, R0, 1.0}, {rs, rs, 1.0}), rs);
        const double plateau = 2.0 * pi * std::pow(rs, p) * std::pow(R0, 2.0 - p) / (2.0 - p);
        const double k = (1.0 - rs) / (1.0 - R0);
        boost::math::quadrature::tanh_sinh<double> ts;
        const double ramp = 2.0 * pi * ts.integrate(
                                           [&](double s) {
                                               double H = rs + k * (s - R0);
                                               return std::pow(k * k + (H / s) * (H / s), p / 2.0) * s;
                                           },
                                           R0, 1.0);
        CHECK(energy_radial(h, Exponent(p)) == doctest::Approx(plateau + ramp).epsilon(1e-10));
    }
}

TEST_CASE("homeomorphic minimizers") {
    for (auto c : homeomorphic) {
        CAPTURE(c.p);
        CAPTURE(c.r);
        CAPTURE(c.rs);
        AnnulusPair a(c.r, 1.0, c.rs, 1.0);
        auto m = solve_profile(a, Exponent(c.p));
        REQUIRE(m.regime() == Regime::Homeomorphic);
        CHECK(m.h_at(c.r) == doctest::Approx(c.rs).epsilon(1e-8));
        CHECK(m.h_at(1.0) == 1.0);
        if (c.rs > 0.0) CHECK(boundary_integral(m, c.r) == doctest::Approx(-std::log(c.rs)).epsilon(1e-8));
        auto& prof = m.profile();
        auto hs = prof.all_values();
        for (std::size_t i = 1; i < hs.size(); ++i) CHECK(hs[i] > hs[i - 1]);
        CHECK(lower_bound_exact(a, Exponent(c.p), m) == doctest::Approx(m.energy()).epsilon(1e-6));
        CHECK(energy_radial(prof, Exponent(c.p)) == doctest::Approx(m.energy()).epsilon(1e-5));
        CHECK(energy_radial(prof, Exponent(c.p)) >= m.energy() - 1e-12);
        // log-derivative of the profile from the gauge
        for (double s : {0.55, 0.75, 0.95}) {
            double h = 1e-5 * s;
            double d = (std::log(m.h_at(s + h)) - std::log(m.h_at(s - h))) / (2.0 * h);
            auto g = m.gauge_at(s);
            CHECK(d == doctest::Approx(std::sqrt(g.t) / (s * std::sqrt(g.one_minus_t))).epsilon(1e-6));
        }
    }
}

TEST_CASE("collapsed minimizers") {
    for (auto c : collapsed) {
        CAPTURE(c.p);
        CAPTURE(c.r);
        CAPTURE(c.rs);
        AnnulusPair a(c.r, 1.0, c.rs, 1.0);
        auto m = solve_profile(a, Exponent(c.p));
        REQUIRE(m.regime() == Regime::Collapsed);
        const double R0 = m.collapse_radius();
        CHECK(R0 == doctest::Approx(collapse_radius(a, Exponent(c.p))).epsilon(1e-12));
        CHECK(m.h_at(c.r) == c.rs);
        CHECK(m.h_at(0.5 * (c.r + R0)) == c.rs);
        CHECK(m.h_at(R0) == doctest::Approx(c.rs).epsilon(1e-12));
        CHECK(m.h_at(R0 + 1e-3) > c.rs);
        CHECK(m.gauge_at(R0).t == 0.0);
        CHECK(m.rho1(R0) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(boundary_integral(m, R0) == doctest::Approx(-std::log(c.rs)).epsilon(1e-8));
        for (double s : {0.3 * R0, 0.9 * R0})
            if (s > c.r) CHECK(m.rho2(s) == doctest::Approx(std::pow(c.rs / s, c.p - 1.0)).epsilon(1e-12));

        const double plateau =
            2.0 * pi * std::pow(c.rs, c.p) * (std::pow(R0, 2.0 - c.p) - std::pow(c.r, 2.0 - c.p)) / (2.0 - c.p);
        auto g1 = m.gauge_at(1.0);
        const double outer =
            2.0 * pi * std::sqrt(g1.t) / std::pow(g1.one_minus_t, (c.p - 1.0) / 2.0);
        CHECK(lower_bound_exact(a, Exponent(c.p), m) == doctest::Approx(plateau + outer).epsilon(1e-12));
        CHECK(lower_bound_exact(a, Exponent(c.p), m) == doctest::Approx(m.energy()).epsilon(1e-6));
        CHECK(energy_radial(m.profile(), Exponent(c.p)) == doctest::Approx(m.energy()).epsilon(1e-5));
    }
}

TEST_CASE("weights and the derivative identity") {
    for (auto c : {Inst{1.2, 0.4, 0.5}, Inst{1.7, 0.5, 0.3}, Inst{1.5, 0.1, 0.8}, Inst{1.0, 0.2, 0.7}}) {
        CAPTURE(c.p);
        AnnulusPair a(c.r, 1.0, c.rs, 1.0);
        auto m = solve_profile(a, Exponent(c.p));
        auto w = weights(m);
        const double lo = std::max(m.collapse_radius(), c.r);
        for (std::size_t i = 0; i < w.rho1.size(); ++i) {
            CHECK(w.rho1.values()[i] >= 0.0);
            CHECK(w.rho2.values()[i] >= 0.0);
        }
        double worst = 0.0;
        for (int k = 1; k < 50; ++k) {
            double s = lo + (1.0 - lo) * k / 50.0;
            double h = 1e-4 * s;
            double d = (m.rho1(s + h) - m.rho1(s - h)) / (2.0 * h);
            worst = std::max(worst, std::abs(d - m.rho2(s)));
            CHECK(w.rho1(s) == doctest::Approx(m.rho1(s)).epsilon(1e-3));
        }
        CHECK(worst < 1e-5);
    }
}

TEST_CASE("monotone dependence on the integration constant") {
    const double p = 1.4, r = 0.3;
    double prev = -1.0;
    for (double C = -std::log(r); C < 6.0; C += 0.4) {
        GaugeFunction g(PhiTable::shared(p, Branch::Below), C, r, 1.0);
        boost::math::quadrature::tanh_sinh<double> ts;
        double I = ts.integrate(
            [&](double s) {
                auto v = g.gauge(s);
                return std::sqrt(v.t) / (s * std::sqrt(v.one_minus_t));
            },
            r, 1.0);
        CHECK(I > prev);
        prev = I;
    }
}

TEST_CASE("duality at p = 1") {
    auto [e1, e2] = dual_energy_check(AnnulusPair(0.5, 1.0, 0.5, 1.0));
    CHECK(e1 == doctest::Approx(std::sqrt(2.0) * pi * 0.75).epsilon(1e-12));
    CHECK(e2 == doctest::Approx(e1).epsilon(1e-12));

    for (auto [r, rs] : {std::pair{0.5, 0.6}, std::pair{0.4, 0.3}, std::pair{0.2, 0.25}}) {
        AnnulusPair a(r, 1.0, rs, 1.0);
        auto [x, y] = dual_energy_check(a);
        CHECK(x == doctest::Approx(y).epsilon(1e-4));
        auto fwd = solve_profile(a, Exponent(1.0));
        auto back = solve_profile(a.swapped(), Exponent(1.0));
        for (double s : {r, 0.5 * (r + 1.0), 0.9, 1.0}) CHECK(back.h_at(fwd.h_at(s)) == doctest::Approx(s).epsilon(1e-6));
    }
    CHECK_THROWS_AS(dual_energy_check(AnnulusPair(0.5, 1.0, 0.01, 1.0)), Error);
}

TEST_CASE("random competitors never beat the minimizer") {
    for (auto c : {Inst{1.2, 0.4, 0.5}, Inst{1.7, 0.5, 0.3}, Inst{1.5, 0.1, 0.8}, Inst{1.3, 0.0, 0.3}}) {
        CAPTURE(c.p);
        AnnulusPair a(c.r, 1.0, c.rs, 1.0);
        auto m = solve_profile(a, Exponent(c.p));
        for (std::uint64_t seed = 1; seed <= 25; ++seed) {
            auto free = random_competitor(a, seed);
            CHECK(energy_radial(free, Exponent(c.p)) >= m.energy() - 1e-9);
            auto near = random_competitor(a, seed, 400, &m.profile(), 0.01);
            CHECK(energy_radial(near, Exponent(c.p)) >= m.energy() - 1e-9);
        }
    }
    auto x = random_competitor(AnnulusPair(0.3, 1.0, 0.5, 1.0), 9);
    auto y = random_competitor(AnnulusPair(0.3, 1.0, 0.5, 1.0), 9);
    CHECK(x.samples().values() == y.samples().values());
}

TEST_CASE("p >= 2: identity beats every competitor") {
    for (double p : {2.0, 3.0})
        for (double r : {0.0, 0.4}) {
            AnnulusPair a(r, 1.0, r, 1.0);
            const double id = energy_radial(linear_profile(a, 200), Exponent(p));
            CHECK(id == doctest::Approx(identity_energy(p, r)).epsilon(1e-12));
            for (std::uint64_t seed = 1; seed <= 50; ++seed)
                CHECK(energy_radial(random_competitor(a, seed), Exponent(p)) >= id - 1e-9);
        }
}

TEST_CASE("regime and range errors") {
    CHECK_THROWS_AS(solve_profile(AnnulusPair(0.5, 1.0, 0.001, 1.0), Exponent(1.0)), Error);
    CHECK_THROWS_AS(solve_profile(AnnulusPair(0.5, 1.0, 0.4, 1.0), Exponent(2.0)), Error);
}

TEST_CASE("scaled instances") {
    AnnulusPair a(0.6, 2.0, 1.2, 3.0);
    auto m = solve_profile(a, Exponent(1.4));
    auto n = solve_profile(normalize(a).pair, Exponent(1.4));
    CHECK(m.energy() == doctest::Approx(n.energy() * normalize(a).scale.energy_factor(1.4)).epsilon(1e-12));
    CHECK(m.h_at(0.6) == doctest::Approx(1.2).epsilon(1e-8));
    CHECK(m.h_at(2.0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(m.h_at(1.0) == doctest::Approx(3.0 * n.h_at(0.5)).epsilon(1e-12));
}

TEST_CASE("profile csv") {
    auto m = solve_profile(AnnulusPair(0.3, 1.0, 0.4, 1.0), Exponent(1.5), SolveOptions{64});
    std::ostringstream os;
    write_profile_csv(os, m);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "s,H0,g,rho1,rho2");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == int(m.profile().all_nodes().size()));
}
