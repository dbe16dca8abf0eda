#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pharmonic/geometry.hpp"

namespace pharm {

enum class Suite { Ode, Radial, Curve, Counterexample, FixedBoundary, Duality };

const char* suite_name(Suite s);
/// Throws InvalidArgument for an unknown name.
Suite parse_suite(const std::string& name);

struct VerifyOptions {
    std::optional<double> p;                 ///< suite default when unset
    std::optional<AnnulusPair> instance;     ///< suite default instances when unset
    double eps = 0.01;                       ///< counterexample parameter
    std::uint64_t seed = 1;
    int trials = 100;                        ///< competitors, perturbations, random curves (x10)
    double amplitude = 1e-2;                 ///< perturbation size relative to R*
    std::size_t grid_s = 64, grid_theta = 128;
    unsigned jobs = 1;
    std::map<std::string, double> limits;    ///< per-check limit overrides, keyed by check name
};

struct SuiteResult {
    bool pass = false;
    nlohmann::ordered_json report;
};

SuiteResult run_suite(Suite s, const VerifyOptions& opt = {});

/// Sup over interior sample points of |g' phi_p(g) - 1/s|, of the conservation residual, and of |rho1' - rho2|.
struct OdeDiagnostics {
    double residual_28 = 0.0;
    double residual_23 = 0.0;
    double weight_identity = 0.0;
};
OdeDiagnostics ode_diagnostics(const AnnulusPair& a, const Exponent& p, std::size_t samples = 200);

/// The 5 x 5 (p, r*) sweep at r = 0.3, R = R* = 1.
std::vector<std::pair<double, AnnulusPair>> ode_sweep_instances();

} // namespace pharm
