// Acceptance suite: end-to-end checks of the column solver against its
// analytic references and the model's qualitative guarantees. Prints one
// pass/fail line per criterion; exits nonzero if any fail.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "npz/analysis.hpp"
#include "npz/oracles.hpp"
#include "npz/stepper.hpp"

using namespace npz;

namespace {

int g_failures = 0;

void record(const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] %-28s %s\n", pass ? "PASS" : "FAIL", name, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(const char* format, ...) {
    char buf[256];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

class Timer {
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();

  public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }
};

double field_linf_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double field_linf(const Field& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

State make_state(const Field& n, const Field& p, double z) {
    State s;
    s.n = n;
    s.p = p;
    s.z = z;
    return s;
}

Field gaussian_bump(const Grid& grid, double amplitude, double center, double width) {
    Field f(grid.M);
    for (int j = 0; j < grid.M; ++j) {
        const double d = (grid.node(j) - center) / width;
        f[j] = amplitude * std::exp(-0.5 * d * d);
    }
    return f;
}

double uniform(std::mt19937_64& gen, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(gen() >> 11) * 0x1.0p-53);
}

// ---------------------------------------------------------------------------
// 1. Spatial convergence of the decoupled linear equations against the
//    eigenfunction series, M in {51, 101, 201}, dt small and fixed.
void spatial_convergence_order() {
    Timer timer;
    const double dt = 5e-7, t_end = 0.05;
    const int grids[] = {51, 101, 201};

    Parameters prm;
    prm.D = 1.0;
    prm.H = 1.0;
    prm.r = 0.0;
    prm.m = 0.0;
    prm.m_p = 0.0;
    prm.k = 0.0;
    prm.n_H = 1.0;

    SolverConfig cfg;
    cfg.dt = dt;
    cfg.t_end = t_end;
    cfg.snapshot_every = static_cast<int>(std::llround(t_end / dt));

    // nutrient equation, mixed boundaries, one quarter-wave mode
    const std::vector<double> n_coeffs = {0.0, 0.8};
    std::vector<std::pair<double, double>> n_err;
    for (int m : grids) {
        Grid grid(prm.H, m);
        const State s0 =
            make_state(grid, heat_exact_mixed(n_coeffs, 0.0, grid, prm.n_H),
                       Field(grid.M, 0.0), 0.0);
        const Trajectory traj = integrate(s0, prm, LightModel::ExponentialDecay,
                                          FunctionalResponse::HollingII, grid, cfg);
        const Field exact = heat_exact_mixed(n_coeffs, t_end, grid, prm.n_H);
        n_err.emplace_back(grid.dx, field_linf_diff(traj.snapshots.back().n, exact));
    }
    const double n_order = convergence_order(n_err);

    // phytoplankton equation, Neumann boundaries, constant plus one mode
    const std::vector<double> p_coeffs = {1.0, 0.5};
    std::vector<std::pair<double, double>> p_err;
    for (int m : grids) {
        Grid grid(prm.H, m);
        const State s0 = make_state(grid, Field(grid.M, prm.n_H),
                                    heat_exact_neumann(p_coeffs, 0.0, grid), 0.0);
        const Trajectory traj = integrate(s0, prm, LightModel::ExponentialDecay,
                                          FunctionalResponse::HollingII, grid, cfg);
        const Field exact = heat_exact_neumann(p_coeffs, t_end, grid);
        p_err.emplace_back(grid.dx, field_linf_diff(traj.snapshots.back().p, exact));
    }
    const double p_order = convergence_order(p_err);

    const double elapsed = timer.seconds();
    const bool pass = std::abs(n_order - 2.0) <= 0.2 && std::abs(p_order - 2.0) <= 0.2 &&
                      elapsed < 10.0;
    record("spatial_convergence_order", pass,
           fmt("(n-eq order=%.3f, p-eq order=%.3f, target 2.0+-0.2, %.1fs < 10s)", n_order,
               p_order, elapsed));
}

// ---------------------------------------------------------------------------
// 2 and 3. Fifty randomized nonnegative initial states, both light models,
//    all five responses, dt = 0.5*cfl: positivity at 1e-10 and the nutrient
//    band bound at 1e-8 on every run.
void randomized_invariants() {
    Timer timer;
    Parameters prm;
    prm.chi = 1.0;
    prm.r = 0.8;
    prm.gamma = 0.5;
    prm.nu = 0.4;
    prm.m = 0.2;
    prm.m_p = 0.3;
    prm.k = 0.7;
    prm.n_H = 1.0;
    Grid grid(1.0, 41);

    SolverConfig cfg;
    cfg.dt = 0.5 * cfl_max_dt(prm, grid);
    cfg.t_end = 0.5;
    cfg.snapshot_every = 16;
    cfg.positivity_tol = 1e-10;

    const FunctionalResponse kinds[] = {FunctionalResponse::HollingI,
                                        FunctionalResponse::HollingII,
                                        FunctionalResponse::HollingIII,
                                        FunctionalResponse::Ivlev,
                                        FunctionalResponse::RatioQuad};

    int pos_failures = 0, bound_failures = 0;
    double worst_min = 0.0, worst_excess = -1.0;
    std::string error;
    for (int i = 0; i < 50 && error.empty(); ++i) {
        std::mt19937_64 gen(7700 + i);
        State s0;
        s0.n.resize(grid.M);
        s0.p.resize(grid.M);
        for (int j = 0; j < grid.M; ++j) {
            s0.n[j] = uniform(gen, 0.0, 2.0);
            s0.p[j] = uniform(gen, 0.0, 2.0);
        }
        s0.z = uniform(gen, 0.0, 1.0);
        const LightModel light =
            i % 2 ? LightModel::SelfShading : LightModel::ExponentialDecay;
        try {
            const Trajectory traj = integrate(s0, prm, light, kinds[i % 5], grid, cfg);
            const InvariantReport pos = check_positivity(traj, 1e-10);
            const InvariantReport bound = check_n_bound(traj, prm, 1e-8);
            if (!pos.passed) ++pos_failures;
            if (!bound.passed) ++bound_failures;
            worst_min = std::min(worst_min, pos.worst);
            worst_excess = std::max(worst_excess, bound.worst);
        } catch (const std::exception& e) {
            error = e.what();
        }
    }
    const double elapsed = timer.seconds();

    record("positivity_random_ics",
           error.empty() && pos_failures == 0 && elapsed < 60.0,
           error.empty()
               ? fmt("(50 runs, worst min=%.3e >= -1e-10, %.1fs < 60s)", worst_min, elapsed)
               : "(aborted: " + error + ")");
    record("nutrient_band_bound", error.empty() && bound_failures == 0,
           error.empty() ? fmt("(50 runs, worst excess=%.3e <= 1e-8)", worst_excess)
                         : "(aborted: " + error + ")");
}

// ---------------------------------------------------------------------------
// 4. Extinction scenario: mortality above the maximum growth rate drives the
//    phytoplankton integral down at least as fast as the theoretical rate,
//    and both p and z are extinct by t = 40.
void extinction_scenario() {
    Timer timer;
    Parameters prm;
    prm.chi = 1.0;
    prm.r = 0.5;
    prm.m_p = 1.0;
    prm.m = 0.1;
    prm.k = 1.0;
    prm.gamma = 1.0;
    prm.n_H = 1.0;
    Grid grid(1.0, 101);

    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 40.0;
    cfg.snapshot_every = 40;

    const State s0 = make_state(grid, Field(grid.M, prm.n_H),
                                gaussian_bump(grid, 1.0, 0.5, 0.1), 1e-5);
    const Trajectory traj = integrate(s0, prm, LightModel::ExponentialDecay,
                                      FunctionalResponse::HollingII, grid, cfg);
    const DecayFit fit = fit_extinction(traj, prm, {10.0, 20.0});
    const double final_p = field_linf(traj.snapshots.back().p);
    const double final_z = traj.snapshots.back().z;
    const double elapsed = timer.seconds();

    const double slack_bound = -0.5 * 1.05;
    const bool pass = fit.rate <= slack_bound && fit.passed && final_p < 1e-6 &&
                      final_z < 1e-6 && elapsed < 10.0;
    record("extinction_scenario", pass,
           fmt("(rate=%.3f <= %.3f, |p|_inf=%.1e, z=%.1e, %.1fs < 10s)", fit.rate, slack_bound,
               final_p, final_z, elapsed));
}

// ---------------------------------------------------------------------------
// 5. Pure-decay oracle: with no uptake and no predation the phytoplankton
//    integral decays at exactly the mortality rate.
void pure_decay_rate() {
    Parameters prm;
    prm.chi = 1.0;
    prm.r = 0.0;
    prm.m_p = 1.0;
    prm.n_H = 1.0;
    Grid grid(1.0, 101);

    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 3.0;
    cfg.snapshot_every = 10;

    const State s0 = make_state(grid, Field(grid.M, prm.n_H),
                                heat_exact_neumann({1.0, 0.5}, 0.0, grid), 0.0);
    const Trajectory traj = integrate(s0, prm, LightModel::ExponentialDecay,
                                      FunctionalResponse::HollingII, grid, cfg);
    const DecayFit fit = fit_extinction(traj, prm, {0.5, 2.5});
    const bool pass = std::abs(fit.rate + 1.0) <= 0.02;
    record("pure_decay_rate", pass,
           fmt("(rate=%.5f, target -1 within 2%%, R^2=%.6f)", fit.rate, fit.r_squared));
}

// ---------------------------------------------------------------------------
// 6. Trivial equilibrium: zero steady residual and stationary under 10^4
//    implicit-explicit steps.
void trivial_equilibrium() {
    Parameters prm;
    prm.chi = 1.0;
    prm.r = 0.8;
    prm.gamma = 0.5;
    prm.m = 0.2;
    prm.m_p = 0.3;
    prm.k = 0.7;
    prm.n_H = 1.0;
    Grid grid(1.0, 41);

    const State eq = make_state(grid, Field(grid.M, prm.n_H), Field(grid.M, 0.0), 0.0);
    const double residual = steady_residual(eq, prm, LightModel::ExponentialDecay,
                                            FunctionalResponse::HollingII, grid);

    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 10.0;  // 10^4 steps
    cfg.snapshot_every = 10000;
    const Trajectory traj = integrate(eq, prm, LightModel::ExponentialDecay,
                                      FunctionalResponse::HollingII, grid, cfg);
    const State& last = traj.snapshots.back();
    const double drift = std::max({field_linf_diff(last.n, eq.n),
                                   field_linf_diff(last.p, eq.p), std::abs(last.z - eq.z)});

    const bool pass = residual <= 1e-14 && drift <= 1e-12;
    record("trivial_equilibrium", pass,
           fmt("(residual=%.1e <= 1e-14, drift after 1e4 steps=%.1e <= 1e-12)", residual,
               drift));
}

// ---------------------------------------------------------------------------
// 7. Scheme cross-validation: the split-step and RK4 solutions of a generic
//    coupled run approach each other at first order in dt.
void scheme_cross_validation() {
    Parameters prm;
    prm.chi = 1.0;
    prm.r = 1.0;
    prm.gamma = 0.7;
    prm.m = 0.15;
    prm.m_p = 0.2;
    prm.k = 0.8;
    prm.n_H = 1.0;
    Grid grid(1.0, 51);

    const State s0 = make_state(grid, Field(grid.M, prm.n_H),
                                gaussian_bump(grid, 0.6, 0.35, 0.12), 0.25);

    auto run = [&](Scheme scheme, double dt) {
        SolverConfig cfg;
        cfg.dt = dt;
        cfg.t_end = 1.0;
        cfg.scheme = scheme;
        cfg.snapshot_every = static_cast<int>(std::llround(1.0 / dt));
        const Trajectory traj = integrate(s0, prm, LightModel::ExponentialDecay,
                                          FunctionalResponse::HollingII, grid, cfg);
        return traj.snapshots.back();
    };
    auto diff = [&](double dt) {
        const State a = run(Scheme::ImexEuler, dt);
        const State b = run(Scheme::ExplicitRk4, dt);
        return std::max({field_linf_diff(a.n, b.n), field_linf_diff(a.p, b.p),
                         std::abs(a.z - b.z)});
    };

    const double dt1 = cfl_max_dt(prm, grid);  // 2e-4
    const double d1 = diff(dt1);
    const double d2 = diff(dt1 / 2.0);
    const bool pass = d1 / d2 >= 1.8 && d2 <= 1e-3;
    record("scheme_cross_validation", pass,
           fmt("(|imex-rk4|: %.2e -> %.2e under dt halving, ratio=%.2f >= 1.8, finest <= 1e-3)",
               d1, d2, d1 / d2));
}

// ---------------------------------------------------------------------------
// 8. Ingestion catalog: the translation coefficient dominates every response
//    on a dense scan of [0, m].
void response_translation_margin() {
    const FunctionalResponse kinds[] = {FunctionalResponse::HollingI,
                                        FunctionalResponse::HollingII,
                                        FunctionalResponse::HollingIII,
                                        FunctionalResponse::Ivlev,
                                        FunctionalResponse::RatioQuad};
    double worst = 0.0;
    for (FunctionalResponse kind : kinds) {
        for (double m : {1.0, 5.0, 20.0}) {
            const double lambda = translation_lambda(kind, m);
            for (int i = 0; i <= 10000; ++i) {
                const double p = m * i / 10000.0;
                worst = std::min(worst, lambda * p - eval_g(kind, p));
            }
        }
    }
    record("response_translation_margin", worst >= -1e-12,
           fmt("(5 responses x m in {1,5,20}, worst margin=%.2e >= -1e-12)", worst));
}

// ---------------------------------------------------------------------------
// 9. Tridiagonal solver against dense Gaussian elimination on random
//    diagonally dominant systems.
void tridiagonal_vs_dense() {
    std::mt19937_64 gen(20260810);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int m = 3 + static_cast<int>(uniform(gen, 0.0, 198.0));
        Tridiagonal sys;
        sys.lower.resize(m - 1);
        sys.upper.resize(m - 1);
        sys.diag.resize(m);
        for (int i = 0; i < m - 1; ++i) {
            sys.lower[i] = uniform(gen, -1.0, 1.0);
            sys.upper[i] = uniform(gen, -1.0, 1.0);
        }
        for (int i = 0; i < m; ++i) {
            const double lo = i > 0 ? std::abs(sys.lower[i - 1]) : 0.0;
            const double up = i < m - 1 ? std::abs(sys.upper[i]) : 0.0;
            sys.diag[i] = lo + up + 0.1 + uniform(gen, 0.0, 1.0);
        }
        Field rhs(m);
        for (double& v : rhs) v = uniform(gen, -2.0, 2.0);

        std::vector<std::vector<double>> dense(m, std::vector<double>(m, 0.0));
        for (int i = 0; i < m; ++i) {
            dense[i][i] = sys.diag[i];
            if (i > 0) dense[i][i - 1] = sys.lower[i - 1];
            if (i < m - 1) dense[i][i + 1] = sys.upper[i];
        }
        const Field a = thomas_solve(sys, rhs);
        const Field b = dense_solve(dense, rhs);
        const double scale = std::max(field_linf(b), 1e-30);
        worst = std::max(worst, field_linf_diff(a, b) / scale);
    }
    record("tridiagonal_vs_dense", worst <= 1e-10,
           fmt("(100 systems, M in [3,200], worst relative diff=%.2e <= 1e-10)", worst));
}

// ---------------------------------------------------------------------------
// 10. The flux-balance residual shrinks monotonically under joint
//     (dt, dx) -> (dt/2, dx/2) refinement.
void flux_balance_refinement() {
    Parameters prm;
    prm.chi = 1.0;
    prm.r = 1.0;
    prm.gamma = 0.5;
    prm.m = 0.2;
    prm.m_p = 0.2;
    prm.k = 0.8;
    prm.n_H = 1.0;

    auto max_residual = [&](int m, double dt) {
        Grid grid(1.0, m);
        const State s0 = make_state(grid, Field(grid.M, prm.n_H),
                                    gaussian_bump(grid, 0.8, 0.4, 0.15), 0.3);
        SolverConfig cfg;
        cfg.dt = dt;
        cfg.t_end = 0.4;
        cfg.snapshot_every = 1;
        const Trajectory traj = integrate(s0, prm, LightModel::ExponentialDecay,
                                          FunctionalResponse::HollingII, grid, cfg);
        double worst = 0.0;
        for (std::size_t i = 1; i < traj.diagnostics.size(); ++i)
            worst = std::max(worst, std::abs(traj.diagnostics[i].flux_residual));
        return worst;
    };

    const double r1 = max_residual(51, 2e-3);
    const double r2 = max_residual(101, 1e-3);
    const double r3 = max_residual(201, 5e-4);
    const bool pass = r2 <= 1.1 * r1 && r3 <= 1.1 * r2 && r3 < r1;
    record("flux_balance_refinement", pass,
           fmt("(residual %.2e -> %.2e -> %.2e, monotone within 10%%)", r1, r2, r3));
}

}  // namespace

int main() {
    std::printf("acceptance suite\n================\n");
    spatial_convergence_order();
    randomized_invariants();
    extinction_scenario();
    pure_decay_rate();
    trivial_equilibrium();
    scheme_cross_validation();
    response_translation_margin();
    tridiagonal_vs_dense();
    flux_balance_refinement();
    std::printf("================\n%s\n", g_failures == 0 ? "all criteria passed"
                                                          : "some criteria FAILED");
    return g_failures == 0 ? 0 : 1;
}
