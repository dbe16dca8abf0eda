#include "doctest.h"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "pharmonic/counterexample.hpp"
#include "pharmonic/discrete_oracle.hpp"
#include "pharmonic/error.hpp"
#include "pharmonic/radial_minimizer.hpp"

using namespace pharm;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("lattice construction") {
    auto L = ProfileLattice::make(AnnulusPair(0.3, 1.0, 0.5, 1.0), 20, 30);
    REQUIRE(L.s_nodes.size() == 20);
    REQUIRE(L.h_levels.size() == 30);
    CHECK(L.s_nodes.front() == 0.3);
    CHECK(L.s_nodes.back() == 1.0);
    CHECK(L.h_levels.front() == 0.5);
    CHECK(L.h_levels.back() == 1.0);
    for (std::size_t i = 1; i < L.s_nodes.size(); ++i) CHECK(L.s_nodes[i] > L.s_nodes[i - 1]);
    for (std::size_t i = 1; i < L.h_levels.size(); ++i) CHECK(L.h_levels[i] > L.h_levels[i - 1]);

    auto P = ProfileLattice::make(AnnulusPair(0.0, 1.0, 0.0, 1.0), 10, 10);
    CHECK(P.s_nodes.front() == 0.0);
    CHECK(P.s_nodes[1] == doctest::Approx(1e-6));
    CHECK(P.h_levels.front() == 0.0);

    auto G = ProfileLattice::make(AnnulusPair(0.3, 1.0, 0.5, 1.0), 20, 400);
    CHECK(G.h_levels.front() == 0.5);
    CHECK(G.h_levels.back() == 1.0);
    // graded near r*
    CHECK(G.h_levels[1] - G.h_levels[0] < 1e-2 * (G.h_levels[399] - G.h_levels[398]));

    CHECK_THROWS_AS(ProfileLattice::make(AnnulusPair(0.3, 1.0, 0.5, 1.0), 1, 10), Error);
    CHECK_THROWS_AS(ProfileLattice::make(AnnulusPair(0.3, 1.0, 0.5, 1.0), 10, 1), Error);
}

TEST_CASE("segment cost on constant and identity segments") {
    const double p = 1.5;
    auto L = ProfileLattice::make(AnnulusPair(0.3, 1.0, 0.3, 1.0), 200, 200);
    for (std::size_t i : {0u, 57u, 198u}) {
        const double a = L.s_nodes[i], b = L.s_nodes[i + 1];
        const double h = 0.6;
        double exact = 2.0 * pi * std::pow(h, p) * (std::pow(b, 2.0 - p) - std::pow(a, 2.0 - p)) / (2.0 - p);
        CHECK(segment_cost(L, p, i, h, h) == doctest::Approx(exact).epsilon(1e-9));
        // identity: integrand 2^{p/2} s
        double id = 2.0 * pi * std::pow(2.0, p / 2.0) * 0.5 * (b * b - a * a);
        CHECK(segment_cost(L, p, i, a, b) == doctest::Approx(id).epsilon(1e-13));
    }
    SUBCASE("origin segment") {
        auto P = ProfileLattice::make(AnnulusPair(0.0, 1.0, 0.0, 1.0), 50, 50);
        const double s1 = P.s_nodes[1], h = 0.4;
        double exact = 2.0 * pi * std::pow(h, p) * std::pow(s1, 2.0 - p) / (2.0 - p);
        CHECK(segment_cost(P, p, 0, h, h) == doctest::Approx(exact).epsilon(1e-9));
    }
}

TEST_CASE("dp agrees with exhaustive enumeration on tiny lattices") {
    struct Inst {
        double p, r, rs;
    };
    for (auto c : {Inst{1.5, 0.3, 0.5}, Inst{1.2, 0.5, 0.2}, Inst{1.0, 0.0, 0.4}, Inst{1.8, 0.2, 0.9}}) {
        for (std::size_t n : {3u, 4u, 6u}) {
            CAPTURE(c.p);
            CAPTURE(n);
            auto L = ProfileLattice::make(AnnulusPair(c.r, 1.0, c.rs, 1.0), n, n);
            auto d = dp_minimize(L, Exponent(c.p));
            double ex = dp_exhaustive(L, Exponent(c.p));
            CHECK(d.energy == doctest::Approx(ex).epsilon(1e-13));
            CHECK(d.energy == doctest::Approx(energy_radial(d.profile, Exponent(c.p))).epsilon(1e-2));
            // restricted class
            DpOptions o{2, 2};
            CHECK(dp_minimize(L, Exponent(c.p), o).energy == doctest::Approx(dp_exhaustive(L, Exponent(c.p), o)).epsilon(1e-13));
            CHECK(dp_minimize(L, Exponent(c.p), o).energy >= d.energy - 1e-14);
        }
    }
}

TEST_CASE("dp path structure") {
    auto L = ProfileLattice::make(AnnulusPair(0.2, 1.0, 0.4, 1.0), 60, 60);
    auto d = dp_minimize(L, Exponent(1.4));
    REQUIRE(!d.path.empty());
    CHECK(d.path.front().node == 0);
    CHECK(d.path.front().level == 0);
    CHECK(d.path.back().node == 59);
    CHECK(d.path.back().level == 59);
    for (std::size_t k = 1; k < d.path.size(); ++k) {
        CHECK(d.path[k].node > d.path[k - 1].node);
        CHECK(d.path[k].node - d.path[k - 1].node <= 16);
        CHECK(d.path[k].level >= d.path[k - 1].level);
    }
}

TEST_CASE("dp approaches the radial minimizer") {
    SUBCASE("identity lies on the lattice when r = r*") {
        auto a = AnnulusPair(0.5, 1.0, 0.5, 1.0);
        auto d = dp_minimize(ProfileLattice::make(a, 64, 64), Exponent(1.5));
        double id = 2.0 * pi * std::pow(2.0, 0.75) * 0.5 * (1.0 - 0.25);
        CHECK(d.energy <= id * (1.0 + 1e-13));
        CHECK(d.energy == doctest::Approx(id).epsilon(1e-6));
    }
    SUBCASE("collapsed plateau edge") {
        for (auto [p, r, rs] : {std::tuple{1.5, 0.1, 0.8}, std::tuple{1.3, 0.0, 0.3}}) {
            AnnulusPair a(r, 1.0, rs, 1.0);
            auto m = solve_profile(a, Exponent(p));
            REQUIRE(m.regime() == Regime::Collapsed);
            auto L = ProfileLattice::make(a, 400, 400);
            auto d = dp_minimize(L, Exponent(p));
            CHECK(d.energy >= m.energy() * (1.0 - 1e-6));
            CHECK(d.energy == doctest::Approx(m.energy()).epsilon(1e-4));
            CHECK(d.plateau_edge == doctest::Approx(m.collapse_radius()).epsilon(0.05));
            CHECK_FALSE(d.jump_saturated);
        }
    }
    SUBCASE("refinement") {
        AnnulusPair a(0.4, 1.0, 0.5, 1.0);
        double E = solve_profile(a, Exponent(1.2)).energy();
        double g1 = dp_minimize(ProfileLattice::make(a, 50, 50), Exponent(1.2)).energy - E;
        double g2 = dp_minimize(ProfileLattice::make(a, 200, 200), Exponent(1.2)).energy - E;
        CHECK(g1 > 0.0);
        CHECK(g2 > -1e-9);
        CHECK(g2 < g1);
    }
}

TEST_CASE("grid energy of the identity converges") {
    const AnnulusPair a(0.3, 1.0, 0.3, 1.0);
    const double p = 1.5;
    const double exact = std::pow(2.0, p / 2.0) * pi * (1.0 - 0.09);
    double prev_gap = 0.0;
    for (std::size_t n : {16u, 32u, 64u, 128u}) {
        double gap = std::abs(grid_energy(GridMap2D::identity(a, n, 2 * n), Exponent(p)) - exact);
        if (prev_gap > 0.0) CHECK(prev_gap / gap >= 1.5);
        prev_gap = gap;
    }
    CHECK(prev_gap / exact < 1e-3);
    // regularization only raises it
    auto id = GridMap2D::identity(a, 32, 64);
    CHECK(grid_energy(id, Exponent(p), 1e-6) > grid_energy(id, Exponent(p)));
}

TEST_CASE("lifted radial minimizer") {
    AnnulusPair a(0.4, 1.0, 0.5, 1.0);
    auto m = solve_profile(a, Exponent(1.2));
    auto g = GridMap2D::radial(a, 256, 256, [&](double s) { return m.h_at(s); });
    CHECK(g.constraint_violation() < 1e-12);
    CHECK(grid_energy(g, Exponent(1.2)) == doctest::Approx(m.energy()).epsilon(1e-3));
}

TEST_CASE("grid map rotation and projection") {
    AnnulusPair a(0.3, 1.0, 0.5, 1.0);
    auto g = GridMap2D::radial(a, 24, 48, [](double s) { return 0.5 + (s - 0.3) / 0.7 * 0.5; });
    auto w = perturbed(g, 0.01, 0.02, 2, 3, 0.4);
    for (std::size_t k : {1u, 7u, 47u}) {
        auto r = w.rotated(k);
        CHECK(grid_energy(r, Exponent(1.3)) == doctest::Approx(grid_energy(w, Exponent(1.3))).epsilon(1e-12));
        CHECK(std::abs(r.at(5, k) - w.at(5, 0) * std::polar(1.0, w.theta(k))) < 1e-12);
    }
    auto bad = g;
    bad.at(3, 3) = 2.0;
    bad.at(0, 1) = 0.7;
    CHECK(bad.constraint_violation() > 0.1);
    bad.project();
    CHECK(bad.constraint_violation() < 1e-14);
    CHECK(std::abs(bad.at(3, 3)) <= 1.0 + 1e-15);
    CHECK(std::abs(bad.at(0, 1)) == doctest::Approx(0.5));
}

TEST_CASE("perturbation probe") {
    AnnulusPair a(0.4, 1.0, 0.5, 1.0);
    const Exponent p(1.2);
    auto m = solve_profile(a, p);
    auto base = GridMap2D::radial(a, 48, 96, [&](double s) { return m.h_at(s); });
    const double E0 = grid_energy(base, p);
    CHECK(grid_energy(perturbed(base, 0.0, 0.0, 1, 1, 0.0), p) == doctest::Approx(E0).epsilon(1e-14));
    auto tang = perturbed(base, 0.0, 1e-2, 1, 2, 0.0);
    CHECK(tang.constraint_violation() < 1e-12);
    CHECK(grid_energy(tang, p) > E0);
    for (std::size_t j = 0; j < base.n_theta(); ++j) CHECK(tang.at(base.n_s() - 1, j) == base.at(base.n_s() - 1, j));

    auto rep = perturbation_probe(base, p, 12, 1e-2, 5);
    CHECK(rep.deltas.size() == 12);
    CHECK(rep.base_energy == doctest::Approx(E0).epsilon(1e-14));
    CHECK(rep.min_delta >= -1e-6);
    auto again = perturbation_probe(base, p, 12, 1e-2, 5);
    CHECK(again.deltas == rep.deltas);

    auto j = probe_report_json(base, p, rep);
    for (const char* k : {"instance", "p", "grid", "energies", "deltas", "seed"}) CHECK(j.contains(k));
    CHECK(j["seed"].get<std::uint64_t>() == 5);
    CHECK(j["deltas"].size() == 12);
}

TEST_CASE("free-outer descent") {
    const AnnulusPair disk(0.0, 1.0, 0.0, 1.0);
    const Exponent p(1.0);
    SUBCASE("identity with zero steps") {
        auto d = descend_free_outer(GridMap2D::identity(disk, 64, 128, OuterRing::Slipping), p, 0);
        CHECK(d.accepted == 0);
        CHECK(d.energy == doctest::Approx(std::sqrt(2.0) * pi).epsilon(1e-3));
    }
    SUBCASE("counterexample seed drops below sqrt(2) pi") {
        EpsMap h(0.05);
        GridMap2D seed(disk, 32, 64, OuterRing::Slipping,
                       [&](double s, double th) { return s == 0.0 ? std::complex<double>(0.0) : h(s, th); });
        double E0 = grid_energy(seed, p);
        CHECK(E0 < std::sqrt(2.0) * pi);
        auto d = descend_free_outer(seed, p, 4);
        REQUIRE(!d.history.empty());
        CHECK(d.history.front() == doctest::Approx(grid_energy(seed, p, 1e-12)).epsilon(1e-12));
        for (std::size_t k = 1; k < d.history.size(); ++k) CHECK(d.history[k] <= d.history[k - 1]);
        CHECK(d.energy <= E0 + 1e-9);
        for (std::size_t j = 0; j < d.map.n_theta(); ++j)
            CHECK(std::abs(std::abs(d.map.at(d.map.n_s() - 1, j)) - 1.0) < 1e-12);
        CHECK(std::abs(d.map.at(0, 0)) == 0.0);
    }
}
