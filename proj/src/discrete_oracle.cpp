#include "pharmonic/discrete_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>

#include "pharmonic/error.hpp"
#include "pharmonic/numerics.hpp"

namespace pharm {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double origin_segment(double p, double b, double h0, double h1) {
    double m = (h1 - h0) / b;
    if (h0 == 0.0) {
        // H = m s: the integrand is (2 m^2)^{p/2} s
        return two_pi * std::pow(2.0 * m * m, 0.5 * p) * 0.5 * b * b;
    }
    if (p >= 2.0) return HUGE_VAL;
    double k = 1.0 / (2.0 - p);
    auto f = [&](double w) {
        double x = b * std::pow(w, k);
        double q = m * m * x * x + (h0 + m * x) * (h0 + m * x);
        return std::pow(b, 2.0 - p) * k * std::pow(q, 0.5 * p);
    };
    double E = 0.0;
    for (int j = 0; j < 8; ++j) E += gauss20(f, j / 8.0, (j + 1) / 8.0);
    return two_pi * E;
}

double simpson_cost(double p, double a, double b, double h0, double h1) {
    double slope = (h1 - h0) / (b - a);
    auto F = [&](double x, double H) { return std::pow(slope * slope + (H / x) * (H / x), 0.5 * p) * x; };
    double m = 0.5 * (a + b);
    return two_pi * (b - a) / 6.0 * (F(a, h0) + 4.0 * F(m, 0.5 * (h0 + h1)) + F(b, h1));
}

} // namespace

ProfileLattice::ProfileLattice(AnnulusPair a, std::vector<double> s, std::vector<double> h)
    : instance(a), s_nodes(std::move(s)), h_levels(std::move(h)) {
    require(s_nodes.size() >= 2 && h_levels.size() >= 2, ErrorCode::InvalidArgument, "lattice needs N, M >= 2");
    for (std::size_t i = 0; i + 1 < s_nodes.size(); ++i)
        require(s_nodes[i] < s_nodes[i + 1], ErrorCode::InvalidArgument, "lattice radii must increase");
    for (std::size_t k = 0; k + 1 < h_levels.size(); ++k)
        require(h_levels[k] < h_levels[k + 1], ErrorCode::InvalidArgument, "lattice levels must increase");
    require(s_nodes.front() == a.r() && s_nodes.back() == a.R(), ErrorCode::InvalidArgument,
            "lattice radii must span [r, R]");
    require(h_levels.front() == a.r_star() && h_levels.back() == a.R_star(), ErrorCode::InvalidArgument,
            "lattice levels must include r* and R*");
}

ProfileLattice ProfileLattice::make(const AnnulusPair& a, std::size_t N, std::size_t M, double origin_cutoff) {
    require(N >= 2 && M >= 2, ErrorCode::InvalidArgument, "lattice needs N, M >= 2");
    std::vector<double> s, h;
    if (a.r() > 0.0) {
        s = geometric_grid(a.r(), a.R(), N);
    } else {
        require(N >= 3, ErrorCode::InvalidArgument, "punctured lattice needs N >= 3");
        s = geometric_grid(origin_cutoff * a.R(), a.R(), N - 1);
        s.insert(s.begin(), 0.0);
    }
    if (a.r_star() == 0.0) {
        h = uniform_grid(0.0, a.R_star(), M);
    } else if (M < graded_min_levels) {
        h = geometric_grid(a.r_star(), a.R_star(), M);
    } else {
        // log-gaps: geometric growth from graded_ratio*d up to d, then uniform
        const double span = std::log(a.R_star() / a.r_star());
        std::vector<double> gaps;
        for (double w = graded_ratio; w < 1.0; w *= 1.25) gaps.push_back(w);
        const double graded = std::accumulate(gaps.begin(), gaps.end(), 0.0);
        const std::size_t rest = M - 1 - gaps.size();
        const double d = span / (graded + double(rest));
        h.resize(M);
        double acc = 0.0;
        for (std::size_t k = 1; k < M; ++k) {
            acc += d * (k - 1 < gaps.size() ? gaps[k - 1] : 1.0);
            h[k] = a.r_star() * std::exp(acc);
        }
        h.front() = a.r_star();
        h.back() = a.R_star();
    }
    return ProfileLattice(a, std::move(s), std::move(h));
}

double segment_cost(const ProfileLattice& L, double p, std::size_t i, double h0, double h1, std::size_t j) {
    if (j == 0) j = i + 1;
    require(i < j && j < L.s_nodes.size(), ErrorCode::InvalidArgument, "segment index out of range");
    double a = L.s_nodes[i], b = L.s_nodes[j];
    if (a == 0.0) return origin_segment(p, b, h0, h1);
    return simpson_cost(p, a, b, h0, h1);
}

DpResult dp_minimize(const ProfileLattice& L, const Exponent& p, const DpOptions& opt) {
    require(opt.max_stride >= 1 && opt.max_jump >= 1, ErrorCode::InvalidArgument, "DP stride and jump must be positive");
    const double pv = p.value();
    const std::size_t N = L.s_nodes.size(), M = L.h_levels.size();
    const auto& h = L.h_levels;
    const bool origin = L.s_nodes[0] == 0.0;
    const double inf = std::numeric_limits<double>::infinity();
    const std::size_t J = std::min(opt.max_stride, N - 1);
    const std::size_t K = std::min(opt.max_jump, M - 1);

    // unit-scale costs per stride: cost(i -> i+j, k -> k') = s_i^{2-p} chat[j-1][k' (K+1) + k' - k]
    std::vector<std::vector<double>> chat(J);
    const std::size_t ref = origin ? 1 : 0;
    const double lq = std::log(L.s_nodes[N - 1] / L.s_nodes[ref]) / double(N - 1 - ref);
    for (std::size_t j = 1; j <= J; ++j) {
        if (ref + j > N - 1) break;
        const double q = std::exp(lq * double(j));
        auto& c = chat[j - 1];
        c.assign(M * (K + 1), inf);
        for (std::size_t kp = 0; kp < M; ++kp)
            for (std::size_t d = 0; d <= std::min(K, kp); ++d)
                c[kp * (K + 1) + d] = simpson_cost(pv, 1.0, q, h[kp - d], h[kp]);
    }

    // V[i][k]: best cost of a path ending at vertex (i, k); back[i][k] = (k << 5) | stride
    std::vector<std::vector<double>> V(N, std::vector<double>(M, inf));
    std::vector<std::uint32_t> back(N * M, 0);
    require(M < (std::size_t(1) << 26) && J < 32, ErrorCode::InvalidArgument, "lattice too large");
    V[0][0] = 0.0;
    for (std::size_t i = 1; i < N; ++i) {
        const bool last = (i + 1 == N);
        auto& Vi = V[i];
        std::uint32_t* bi = back.data() + i * M;
        for (std::size_t j = 1; j <= std::min(J, i); ++j) {
            const std::size_t from = i - j;
            const auto& Vf = V[from];
            if (from == 0 && origin) {
                for (std::size_t kp = last ? M - 1 : 0; kp < M; ++kp) {
                    double c = origin_segment(pv, L.s_nodes[i], h[0], h[kp]);
                    if (c < Vi[kp]) {
                        Vi[kp] = c;
                        bi[kp] = std::uint32_t(j);
                    }
                }
                continue;
            }
            const double w = std::pow(L.s_nodes[from], 2.0 - pv);
            const double* cj = chat[j - 1].data();
            for (std::size_t kp = last ? M - 1 : 0; kp < M; ++kp) {
                const double* row = cj + kp * (K + 1);
                double best = Vi[kp];
                std::size_t bk = M;
                for (std::size_t d = 0, dmax = std::min(K, kp); d <= dmax; ++d) {
                    double c = Vf[kp - d] + w * row[d];
                    if (c < best) {
                        best = c;
                        bk = kp - d;
                    }
                }
                if (bk < M) {
                    Vi[kp] = best;
                    bi[kp] = std::uint32_t((bk << 5) | j);
                }
            }
        }
    }

    std::vector<DpVertex> path;
    std::size_t i = N - 1, k = M - 1;
    path.push_back({std::uint32_t(i), std::uint32_t(k)});
    while (i > 0) {
        std::uint32_t b = back[i * M + k];
        std::size_t j = b & 31u;
        k = (i == j && origin) ? 0 : (b >> 5);
        i -= j;
        path.push_back({std::uint32_t(i), std::uint32_t(k)});
    }
    std::reverse(path.begin(), path.end());

    std::vector<double> vals(N);
    for (std::size_t v = 0; v + 1 < path.size(); ++v) {
        const auto a = path[v], b = path[v + 1];
        const double x0 = L.s_nodes[a.node], x1 = L.s_nodes[b.node];
        for (std::size_t n = a.node; n < b.node; ++n)
            vals[n] = h[a.level] + (h[b.level] - h[a.level]) * (L.s_nodes[n] - x0) / (x1 - x0);
    }
    vals[N - 1] = h[M - 1];
    double edge = L.s_nodes[0];
    bool saturated = false;
    for (std::size_t v = 0; v < path.size(); ++v) {
        if (path[v].level == 0) edge = L.s_nodes[path[v].node];
        if (v > 0 && !(origin && path[v - 1].node == 0) && path[v].level - path[v - 1].level == K) saturated = true;
    }

    std::optional<RadialProfile> prof;
    if (origin) {
        std::vector<double> s(L.s_nodes.begin() + 1, L.s_nodes.end());
        std::vector<double> v(vals.begin() + 1, vals.end());
        prof.emplace(L.instance, SampledFunction(std::move(s), std::move(v)), vals[0]);
    } else {
        prof.emplace(L.instance, SampledFunction(L.s_nodes, vals));
    }
    return DpResult{*prof, V[N - 1][M - 1], std::move(path), edge, saturated};
}

double dp_exhaustive(const ProfileLattice& L, const Exponent& p, const DpOptions& opt) {
    const std::size_t N = L.s_nodes.size(), M = L.h_levels.size();
    require(N <= 8 && M <= 8, ErrorCode::InvalidArgument, "exhaustive enumeration is limited to 8x8 lattices");
    require(opt.max_stride >= 1 && opt.max_jump >= 1, ErrorCode::InvalidArgument, "DP stride and jump must be positive");
    const bool origin = L.s_nodes[0] == 0.0;
    double best = std::numeric_limits<double>::infinity();
    std::function<void(std::size_t, std::size_t, double)> rec = [&](std::size_t i, std::size_t k, double acc) {
        if (i + 1 == N) {
            if (k == M - 1) best = std::min(best, acc);
            return;
        }
        for (std::size_t j = i + 1; j < N && j <= i + opt.max_stride; ++j)
            for (std::size_t kp = k; kp < M && (kp - k <= opt.max_jump || (i == 0 && origin)); ++kp)
                rec(j, kp, acc + segment_cost(L, p.value(), i, L.h_levels[k], L.h_levels[kp], j));
    };
    rec(0, 0, 0.0);
    return best;
}

// ---------------------------------------------------------------------------

GridMap2D::GridMap2D(const AnnulusPair& a, std::size_t n_s, std::size_t n_theta, OuterRing mode, const Fn& f)
    : pair_(a), mode_(mode), ns_(n_s), nt_(n_theta), s_(uniform_grid(a.r(), a.R(), n_s)), v_(n_s * n_theta) {
    require(n_s >= 3 && n_theta >= 4, ErrorCode::InvalidArgument, "grid needs n_s >= 3 and n_theta >= 4");
    for (std::size_t i = 0; i < ns_; ++i)
        for (std::size_t j = 0; j < nt_; ++j) at(i, j) = f(s_[i], theta(j));
}

GridMap2D GridMap2D::radial(const AnnulusPair& a, std::size_t n_s, std::size_t n_theta,
                            const std::function<double(double)>& H, OuterRing mode) {
    return GridMap2D(a, n_s, n_theta, mode, [&](double s, double th) { return std::polar(H(s), th); });
}

GridMap2D GridMap2D::identity(const AnnulusPair& a, std::size_t n_s, std::size_t n_theta, OuterRing mode) {
    double k = a.R_star() / a.R();
    return GridMap2D(a, n_s, n_theta, mode, [&](double s, double th) { return std::polar(k * s, th); });
}

double GridMap2D::theta(std::size_t j) const { return two_pi * double(j) / double(nt_); }
double GridMap2D::dtheta() const { return two_pi / double(nt_); }

void GridMap2D::project() {
    const double rs = pair_.r_star(), Rs = pair_.R_star();
    for (std::size_t j = 0; j < nt_; ++j) {
        auto& z = at(0, j);
        z = rs == 0.0 ? 0.0 : std::polar(rs, std::abs(z) > 0.0 ? std::arg(z) : theta(j));
        auto& w = at(ns_ - 1, j);
        if (mode_ == OuterRing::Fixed)
            w = std::polar(Rs, theta(j));
        else
            w = std::polar(Rs, std::abs(w) > 0.0 ? std::arg(w) : theta(j));
    }
    for (std::size_t i = 1; i + 1 < ns_; ++i)
        for (std::size_t j = 0; j < nt_; ++j) {
            auto& z = at(i, j);
            double m = std::abs(z);
            if (m > Rs)
                z *= Rs / m;
            else if (m < rs)
                z = m > 0.0 ? z * (rs / m) : std::polar(rs, theta(j));
        }
}

double GridMap2D::constraint_violation() const {
    const double rs = pair_.r_star(), Rs = pair_.R_star();
    double worst = 0.0;
    for (std::size_t j = 0; j < nt_; ++j) {
        worst = std::max(worst, std::abs(std::abs(at(0, j)) - rs));
        if (mode_ == OuterRing::Fixed)
            worst = std::max(worst, std::abs(at(ns_ - 1, j) - std::polar(Rs, theta(j))));
        else
            worst = std::max(worst, std::abs(std::abs(at(ns_ - 1, j)) - Rs));
    }
    for (std::size_t i = 1; i + 1 < ns_; ++i)
        for (std::size_t j = 0; j < nt_; ++j) {
            double m = std::abs(at(i, j));
            worst = std::max({worst, m - Rs, rs - m});
        }
    return worst;
}

GridMap2D GridMap2D::rotated(std::size_t k) const {
    GridMap2D out = *this;
    auto rot = std::polar(1.0, two_pi * double(k % nt_) / double(nt_));
    for (std::size_t i = 0; i < ns_; ++i)
        for (std::size_t j = 0; j < nt_; ++j) out.at(i, (j + k) % nt_) = rot * at(i, j);
    return out;
}

namespace {

/// Energy density times area of cell (i, j): radial interval [s_i, s_{i+1}] at angle theta_j.
inline double cell_energy(const GridMap2D& m, double p, double reg, std::size_t i, std::size_t j) {
    const std::size_t nt = m.n_theta();
    const std::size_t jp = (j + 1) % nt, jm = (j + nt - 1) % nt;
    const double ds = m.radius(i + 1) - m.radius(i), dth = m.dtheta();
    const double sm = 0.5 * (m.radius(i) + m.radius(i + 1));
    std::complex<double> hs = (m.at(i + 1, j) - m.at(i, j)) / ds;
    std::complex<double> ht = (m.at(i, jp) - m.at(i, jm) + m.at(i + 1, jp) - m.at(i + 1, jm)) / (4.0 * dth);
    double q = std::norm(hs) + std::norm(ht) / (sm * sm) + reg;
    double e = p == 1.0 ? std::sqrt(q) : (p == 2.0 ? q : std::pow(q, 0.5 * p));
    return e * sm * ds * dth;
}

double local_energy(const GridMap2D& m, double p, double reg, std::size_t i, std::size_t j) {
    const std::size_t nt = m.n_theta();
    double e = 0.0;
    for (std::size_t ii = (i > 0 ? i - 1 : 0); ii <= i && ii + 1 < m.n_s(); ++ii)
        for (std::size_t d = 0; d < 3; ++d) e += cell_energy(m, p, reg, ii, (j + nt - 1 + d) % nt);
    return e;
}

} // namespace

double grid_energy(const GridMap2D& m, const Exponent& p, double reg) {
    double E = 0.0;
    for (std::size_t i = 0; i + 1 < m.n_s(); ++i)
        for (std::size_t j = 0; j < m.n_theta(); ++j) E += cell_energy(m, p.value(), reg, i, j);
    return E;
}

namespace {

void add_mode(std::vector<std::complex<double>>& field, const GridMap2D& g, double radial_amp, double tangential_amp,
              int n, int m, double phase) {
    const double r = g.instance().r(), R = g.instance().R();
    for (std::size_t i = 0; i < g.n_s(); ++i) {
        double x = (g.radius(i) - r) / (R - r);
        double fr = std::sin(n * std::numbers::pi * x);
        double ft = std::sin((2 * n - 1) * std::numbers::pi * (1.0 - x) / 2.0);
        for (std::size_t j = 0; j < g.n_theta(); ++j) {
            double th = g.theta(j);
            double c = std::cos(m * th + phase);
            std::complex<double> er = std::polar(1.0, th), et = std::complex<double>(0.0, 1.0) * er;
            field[i * g.n_theta() + j] += c * (radial_amp * fr * er + tangential_amp * ft * et);
        }
    }
}

} // namespace

GridMap2D perturbed(const GridMap2D& base, double radial_amp, double tangential_amp, int n_radial, int m_angular,
                    double phase) {
    std::vector<std::complex<double>> field(base.data().size());
    add_mode(field, base, radial_amp, tangential_amp, n_radial, m_angular, phase);
    GridMap2D out = base;
    for (std::size_t k = 0; k < field.size(); ++k) out.data()[k] += field[k];
    out.project();
    return out;
}

ProbeReport perturbation_probe(const GridMap2D& base, const Exponent& p, int trials, double amplitude,
                               std::uint64_t seed) {
    require(trials >= 0 && amplitude >= 0.0, ErrorCode::InvalidArgument, "probe needs trials >= 0, amplitude >= 0");
    ProbeReport rep;
    rep.amplitude = amplitude;
    rep.seed = seed;
    rep.base_energy = grid_energy(base, p);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::uniform_int_distribution<int> nn(1, 3), mm(0, 4);
    std::uniform_real_distribution<double> ph(0.0, two_pi);
    rep.min_delta = trials > 0 ? HUGE_VAL : 0.0;
    for (int t = 0; t < trials; ++t) {
        std::vector<std::complex<double>> field(base.data().size());
        for (int k = 0; k < 3; ++k) {
            double ra = nd(rng), ta = nd(rng);
            int n = nn(rng), m = mm(rng);
            add_mode(field, base, ra, ta, n, m, ph(rng));
        }
        double mx = 0.0;
        for (auto& z : field) mx = std::max(mx, std::abs(z));
        GridMap2D trial = base;
        double scale = mx > 0.0 ? amplitude * base.instance().R_star() / mx : 0.0;
        for (std::size_t k = 0; k < field.size(); ++k) trial.data()[k] += scale * field[k];
        trial.project();
        double d = grid_energy(trial, p) - rep.base_energy;
        rep.deltas.push_back(d);
        rep.min_delta = std::min(rep.min_delta, d);
    }
    return rep;
}

DescentResult descend_free_outer(const GridMap2D& seed, const Exponent& p, int steps, double reg) {
    require(steps >= 0, ErrorCode::InvalidArgument, "steps must be non-negative");
    const double pv = p.value();
    GridMap2D x = seed;
    x.project();
    DescentResult res{x, grid_energy(x, p, reg), {}, 0, false};
    res.history.push_back(res.energy);
    const std::size_t ns = x.n_s(), nt = x.n_theta();
    const bool fixed_outer = x.mode() == OuterRing::Fixed;
    const bool pinned_center = x.instance().r() == 0.0 && x.instance().r_star() == 0.0;
    const double fd = 1e-6;
    double alpha = 1e-2 * x.instance().R_star();
    std::vector<std::complex<double>> grad(ns * nt);
    for (int it = 0; it < steps; ++it) {
        double gmax = 0.0;
        for (std::size_t i = 0; i < ns; ++i)
            for (std::size_t j = 0; j < nt; ++j) {
                std::complex<double> g = 0.0;
                bool frozen = (i == 0 && pinned_center) || (i + 1 == ns && fixed_outer);
                if (!frozen) {
                    double e0 = local_energy(x, pv, reg, i, j);
                    auto& z = x.at(i, j);
                    const auto keep = z;
                    z = keep + fd;
                    double er = local_energy(x, pv, reg, i, j);
                    z = keep + std::complex<double>(0.0, fd);
                    double ei = local_energy(x, pv, reg, i, j);
                    z = keep;
                    g = {(er - e0) / fd, (ei - e0) / fd};
                }
                grad[i * nt + j] = g;
                gmax = std::max(gmax, std::abs(g));
            }
        if (gmax == 0.0) {
            res.stalled = true;
            break;
        }
        bool accepted = false;
        alpha *= 2.0;
        for (int ls = 0; ls < 50; ++ls) {
            GridMap2D trial = x;
            for (std::size_t k = 0; k < grad.size(); ++k) trial.data()[k] -= (alpha / gmax) * grad[k];
            trial.project();
            double e = grid_energy(trial, p, reg);
            if (e < res.energy) {
                x = std::move(trial);
                res.energy = e;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            res.stalled = true;
            break;
        }
        res.accepted++;
        res.history.push_back(res.energy);
    }
    res.map = x;
    return res;
}

nlohmann::ordered_json probe_report_json(const GridMap2D& base, const Exponent& p, const ProbeReport& rep) {
    nlohmann::ordered_json j;
    const auto& a = base.instance();
    j["instance"] = {{"r", a.r()}, {"R", a.R()}, {"r_star", a.r_star()}, {"R_star", a.R_star()}};
    j["p"] = p.value();
    j["grid"] = {{"n_s", base.n_s()}, {"n_theta", base.n_theta()}};
    j["energies"] = {{"base", rep.base_energy}, {"min_delta", rep.min_delta}, {"amplitude", rep.amplitude}};
    j["deltas"] = rep.deltas;
    j["seed"] = rep.seed;
    return j;
}

} // namespace pharm
