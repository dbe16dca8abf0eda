#ifndef PHARMONIC_H
#define PHARMONIC_H

#include <stddef.h>
#include <stdint.h>

#if defined(PHARM_BUILDING_LIBRARY)
#define PHARM_API __attribute__((visibility("default")))
#else
#define PHARM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pharm_status {
    PHARM_OK = 0,
    PHARM_ERR_INVALID_ARGUMENT = 1,
    PHARM_ERR_DOMAIN = 2,
    PHARM_ERR_REGIME = 3,
    PHARM_ERR_BRACKET = 4,
    PHARM_ERR_CONVERGENCE = 5,
    PHARM_ERR_IO = 6,
    PHARM_ERR_INTERNAL = 99
} pharm_status;

typedef enum pharm_regime {
    PHARM_HOMEOMORPHIC = 0,
    PHARM_COLLAPSED = 1,
    PHARM_NO_MINIMIZER = 2
} pharm_regime;

/** Annulus pair A(r, R) -> A(r_star, R_star); r = 0 is the punctured disk. */
typedef struct pharm_instance {
    double r, R, r_star, R_star;
} pharm_instance;

/** Infinite ratios and modulus values are reported as HUGE_VAL. */
typedef struct pharm_phase {
    int regime;
    double domain_ratio;
    double target_ratio;
    double m_value;
    int has_m_inverse;
    double m_inverse_value;
    int has_collapse_radius;
    double collapse_radius;
    int on_boundary;
} pharm_phase;

typedef struct pharm_minimizer pharm_minimizer;

PHARM_API const char* pharm_version(void);
/** Message of the last failed call on this thread ("" after a success). */
PHARM_API const char* pharm_last_error(void);
PHARM_API const char* pharm_status_string(pharm_status s);
PHARM_API const char* pharm_regime_name(int regime);
/** Release a string returned through a char** out-parameter. */
PHARM_API void pharm_string_free(char* s);

PHARM_API pharm_status pharm_classify(const pharm_instance* a, double p, pharm_phase* out);
/** m_p(x) for x >= 1; x = HUGE_VAL gives HUGE_VAL. */
PHARM_API pharm_status pharm_modulus(double p, double x, double* out);
PHARM_API pharm_status pharm_m1_inverse(double y, double* out);
PHARM_API pharm_status pharm_collapse_radius(const pharm_instance* a, double p, double* out);

/* Radial minimizer handle (1 <= p < 2). nodes = 0 selects the default sampling. */
PHARM_API pharm_status pharm_minimizer_solve(const pharm_instance* a, double p, size_t nodes, pharm_minimizer** out);
PHARM_API void pharm_minimizer_free(pharm_minimizer* m);
PHARM_API pharm_status pharm_minimizer_regime(const pharm_minimizer* m, int* out);
PHARM_API pharm_status pharm_minimizer_energy(const pharm_minimizer* m, double* out);
PHARM_API pharm_status pharm_minimizer_lower_bound(const pharm_minimizer* m, double* out);
PHARM_API pharm_status pharm_minimizer_collapse_radius(const pharm_minimizer* m, double* out);
PHARM_API pharm_status pharm_minimizer_integration_constant(const pharm_minimizer* m, double* out);
/** Profile, gauge and weights at radius s; any output pointer may be NULL. */
PHARM_API pharm_status pharm_minimizer_eval(const pharm_minimizer* m, double s, double* h, double* g, double* rho1,
                                            double* rho2);
PHARM_API pharm_status pharm_minimizer_node_count(const pharm_minimizer* m, size_t* out);
/** Copies min(cap, node_count) profile samples (origin included when r = 0). */
PHARM_API pharm_status pharm_minimizer_nodes(const pharm_minimizer* m, double* s, double* h, size_t cap);
/** CSV s,H0,g,rho1,rho2 on the profile nodes. */
PHARM_API pharm_status pharm_minimizer_profile_csv(const pharm_minimizer* m, char** out);

/** Energy of the piecewise-linear profile through (s[i], h[i]); s[0] = 0 marks the origin. */
PHARM_API pharm_status pharm_energy_radial(const pharm_instance* a, double p, const double* s, const double* h, size_t n,
                                           double* out);
/** Lattice DP minimum with N radii and M levels. */
PHARM_API pharm_status pharm_dp_minimize(const pharm_instance* a, double p, size_t N, size_t M, double* energy,
                                         double* plateau_edge);

/** B of the closed polygon with K vertices (xy interleaved). */
PHARM_API pharm_status pharm_curve_energy(const double* xy, size_t K, size_t quad_points, double* out);

/** e, E_1 and the angular part of the eps map; sub = 0 selects the default grid. */
PHARM_API pharm_status pharm_counterexample_energies(double eps, int sub, double* e, double* e1, double* angular);
PHARM_API pharm_status pharm_counterexample_sample_csv(double eps, int n_s, int n_theta, char** out);

/**
 * Run a verification suite (ode, radial, curve, counterexample, fixed-boundary, duality).
 * options_json may be NULL or an object with keys p, r, R, r_star, R_star, eps, seed,
 * trials, amplitude, grid_s, grid_theta, jobs, and "limits" (check name -> limit).
 * The report is a JSON object.
 */
PHARM_API pharm_status pharm_verify(const char* suite, const char* options_json, char** report_json, int* passed);

#ifdef __cplusplus
}
#endif

#endif
