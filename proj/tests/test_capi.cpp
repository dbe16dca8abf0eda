#include "doctest.h"

#include <cmath>
#include <cstring>
#include <numbers>
#include <string>
#include <vector>

#include "json.hpp"
#include "pharmonic/pharmonic.h"

namespace {

constexpr double pi = std::numbers::pi;

nlohmann::json run_verify(const char* suite, const char* opts, int* passed, pharm_status* st) {
    char* out = nullptr;
    *st = pharm_verify(suite, opts, &out, passed);
    nlohmann::json j = out ? nlohmann::json::parse(out) : nlohmann::json();
    pharm_string_free(out);
    return j;
}

} // namespace

TEST_CASE("strings and errors") {
    CHECK(std::strlen(pharm_version()) > 0);
    CHECK(std::string(pharm_status_string(PHARM_OK)) == "ok");
    CHECK(std::string(pharm_status_string(PHARM_ERR_REGIME)).size() > 0);
    CHECK(std::string(pharm_regime_name(PHARM_COLLAPSED)) == "Collapsed");
    CHECK(std::string(pharm_regime_name(PHARM_NO_MINIMIZER)) == "NoMinimizer");

    double v = 0.0;
    CHECK(pharm_modulus(1.5, 2.0, nullptr) == PHARM_ERR_INVALID_ARGUMENT);
    CHECK(std::strlen(pharm_last_error()) > 0);
    CHECK(pharm_modulus(1.5, 2.0, &v) == PHARM_OK);
    CHECK(std::string(pharm_last_error()).empty());
    CHECK(pharm_modulus(1.5, 0.5, &v) == PHARM_ERR_DOMAIN);
    CHECK(pharm_classify(nullptr, 1.5, nullptr) == PHARM_ERR_INVALID_ARGUMENT);
    pharm_instance bad{0.5, 0.4, 0.5, 1.0};
    pharm_phase ph;
    CHECK(pharm_classify(&bad, 1.5, &ph) == PHARM_ERR_INVALID_ARGUMENT);
    pharm_instance ok{0.5, 1.0, 0.5, 1.0};
    CHECK(pharm_classify(&ok, 0.5, &ph) == PHARM_ERR_INVALID_ARGUMENT);
    pharm_string_free(nullptr);
}

TEST_CASE("classification and modulus") {
    pharm_instance punct{0.0, 1.0, 0.2, 1.0};
    pharm_phase ph;
    REQUIRE(pharm_classify(&punct, 1.5, &ph) == PHARM_OK);
    CHECK(ph.regime == PHARM_COLLAPSED);
    CHECK(ph.domain_ratio == HUGE_VAL);
    CHECK(ph.m_value == HUGE_VAL);
    REQUIRE(ph.has_collapse_radius);
    double R0 = 0.0;
    REQUIRE(pharm_collapse_radius(&punct, 1.5, &R0) == PHARM_OK);
    CHECK(R0 == doctest::Approx(ph.collapse_radius).epsilon(1e-14));

    pharm_instance nm{0.5, 1.0, 0.01, 1.0};
    REQUIRE(pharm_classify(&nm, 1.0, &ph) == PHARM_OK);
    CHECK(ph.regime == PHARM_NO_MINIMIZER);
    CHECK(ph.has_m_inverse);

    double m = 0.0, back = 0.0;
    CHECK(pharm_modulus(1.0, HUGE_VAL, &m) == PHARM_OK);
    CHECK(m == HUGE_VAL);
    CHECK(pharm_modulus(1.0, 1.0, &m) == PHARM_OK);
    CHECK(m == 1.0);
    REQUIRE(pharm_modulus(1.0, 3.0, &m) == PHARM_OK);
    REQUIRE(pharm_m1_inverse(m, &back) == PHARM_OK);
    CHECK(back == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("minimizer handle") {
    pharm_instance id{0.4, 1.0, 0.4, 1.0};
    pharm_minimizer* h = nullptr;
    REQUIRE(pharm_minimizer_solve(&id, 1.5, 0, &h) == PHARM_OK);
    REQUIRE(h != nullptr);
    int regime = -1;
    double E = 0.0, lb = 0.0;
    CHECK(pharm_minimizer_regime(h, &regime) == PHARM_OK);
    CHECK(regime == PHARM_HOMEOMORPHIC);
    CHECK(pharm_minimizer_energy(h, &E) == PHARM_OK);
    CHECK(E == doctest::Approx(std::pow(2.0, 0.75) * pi * (1.0 - 0.16)).epsilon(1e-8));
    CHECK(pharm_minimizer_lower_bound(h, &lb) == PHARM_OK);
    CHECK(lb == doctest::Approx(E).epsilon(1e-6));
    double hv = 0.0;
    CHECK(pharm_minimizer_eval(h, 0.7, &hv, nullptr, nullptr, nullptr) == PHARM_OK);
    CHECK(hv == doctest::Approx(0.7).epsilon(1e-10));
    CHECK(pharm_minimizer_eval(h, 1.5, &hv, nullptr, nullptr, nullptr) == PHARM_ERR_DOMAIN);

    size_t n = 0;
    REQUIRE(pharm_minimizer_node_count(h, &n) == PHARM_OK);
    CHECK(n >= 2);
    std::vector<double> s(n), hh(n);
    CHECK(pharm_minimizer_nodes(h, s.data(), hh.data(), n) == PHARM_OK);
    CHECK(s.front() == 0.4);
    CHECK(s.back() == 1.0);
    CHECK(pharm_minimizer_nodes(h, s.data(), hh.data(), 1) == PHARM_OK);

    double re = 0.0;
    CHECK(pharm_energy_radial(&id, 1.5, s.data(), hh.data(), n, &re) == PHARM_OK);
    CHECK(re == doctest::Approx(E).epsilon(1e-8));

    char* csv = nullptr;
    REQUIRE(pharm_minimizer_profile_csv(h, &csv) == PHARM_OK);
    CHECK(std::string(csv).rfind("s,H0,g,rho1,rho2\n", 0) == 0);
    pharm_string_free(csv);
    pharm_minimizer_free(h);
    pharm_minimizer_free(nullptr);

    pharm_instance nm{0.5, 1.0, 0.01, 1.0};
    h = nullptr;
    CHECK(pharm_minimizer_solve(&nm, 1.0, 0, &h) == PHARM_ERR_REGIME);
    CHECK(h == nullptr);
    CHECK(pharm_minimizer_solve(&id, 2.0, 0, &h) == PHARM_ERR_DOMAIN);

    pharm_instance col{0.2, 1.0, 0.6, 1.0};
    REQUIRE(pharm_minimizer_solve(&col, 1.3, 0, &h) == PHARM_OK);
    double R0 = 0.0, C = 0.0;
    CHECK(pharm_minimizer_collapse_radius(h, &R0) == PHARM_OK);
    CHECK(R0 > 0.2);
    CHECK(pharm_minimizer_integration_constant(h, &C) == PHARM_OK);
    CHECK(std::isfinite(C));
    pharm_minimizer_free(h);
}

TEST_CASE("lattice dp, curves and the counterexample") {
    pharm_instance id{0.5, 1.0, 0.5, 1.0};
    double E = 0.0, edge = 0.0;
    REQUIRE(pharm_dp_minimize(&id, 1.5, 64, 64, &E, &edge) == PHARM_OK);
    CHECK(E == doctest::Approx(std::pow(2.0, 0.75) * pi * 0.75).epsilon(1e-6));
    CHECK(pharm_dp_minimize(&id, 1.5, 1, 64, &E, &edge) != PHARM_OK);

    std::vector<double> xy;
    for (int k = 0; k < 1024; ++k) {
        xy.push_back(0.5 * std::cos(2 * pi * k / 1024));
        xy.push_back(0.5 * std::sin(2 * pi * k / 1024));
    }
    double B = 0.0;
    REQUIRE(pharm_curve_energy(xy.data(), 1024, 20000, &B) == PHARM_OK);
    CHECK(B == doctest::Approx(2 * pi).epsilon(1e-5));
    double outside[2] = {2.0, 0.0};
    CHECK(pharm_curve_energy(outside, 1, 100, &B) == PHARM_ERR_DOMAIN);

    double e = 0.0, e1 = 0.0, ang = 0.0;
    REQUIRE(pharm_counterexample_energies(0.05, 0, &e, &e1, &ang) == PHARM_OK);
    CHECK(e > 2.0);
    CHECK(e1 < std::sqrt(2.0) * pi);
    CHECK(ang < e);
    CHECK(pharm_counterexample_energies(0.3, 0, &e, &e1, &ang) == PHARM_ERR_INVALID_ARGUMENT);
    char* csv = nullptr;
    REQUIRE(pharm_counterexample_sample_csv(0.1, 8, 8, &csv) == PHARM_OK);
    CHECK(std::string(csv).rfind("s,theta,abs_h,arg_h\n", 0) == 0);
    pharm_string_free(csv);
}

TEST_CASE("verify") {
    int passed = -1;
    pharm_status st;
    run_verify("nope", nullptr, &passed, &st);
    CHECK(st == PHARM_ERR_INVALID_ARGUMENT);
    run_verify("duality", "{not json", &passed, &st);
    CHECK(st == PHARM_ERR_INVALID_ARGUMENT);

    auto j = run_verify("duality", nullptr, &passed, &st);
    REQUIRE(st == PHARM_OK);
    CHECK(passed == 1);
    CHECK(j["suite"] == "duality");
    CHECK(j["pass"] == true);
    CHECK(j["checks"].size() == 2);

    auto strict = run_verify("duality", R"({"limits": {"m1_inverse_round_trip": -1.0}})", &passed, &st);
    REQUIRE(st == PHARM_OK);
    CHECK(passed == 0);
    CHECK(strict["pass"] == false);
    for (const auto& c : strict["checks"])
        if (c["name"] == "m1_inverse_round_trip") CHECK(c["limit"].get<double>() == -1.0);

    run_verify("duality", R"({"p": 1.5})", &passed, &st);
    CHECK(st == PHARM_ERR_INVALID_ARGUMENT);
}
