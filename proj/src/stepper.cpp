#include "npz/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace npz {

namespace {

constexpr double kBlowupCap = 1e12;

void check_finite(const State& s, double t) {
    auto bad = [](double v) { return !std::isfinite(v) || std::abs(v) > kBlowupCap; };
    for (double v : s.n)
        if (bad(v)) throw BlowupError("nutrient field blew up at t = " + std::to_string(t));
    for (double v : s.p)
        if (bad(v)) throw BlowupError("phytoplankton field blew up at t = " + std::to_string(t));
    if (bad(s.z)) throw BlowupError("zooplankton density blew up at t = " + std::to_string(t));
}

struct RhsVec {
    Field dn, dp;
    double dz = 0.0;
};

// Full semi-discrete right-hand side; the nutrient boundary node is frozen.
RhsVec full_rhs(const State& s, const Parameters& prm, LightModel light,
                FunctionalResponse kind, const Grid& grid) {
    const ReactionRhs reac = reaction_rhs(s, prm, light, kind, grid);
    const Field lap_n =
        apply_laplacian(s.n, BoundarySpec::neumann_dirichlet(prm.n_H), grid);
    const Field lap_p = apply_laplacian(s.p, BoundarySpec::neumann_neumann(), grid);

    RhsVec out;
    out.dn.resize(grid.M);
    out.dp.resize(grid.M);
    for (int j = 0; j < grid.M; ++j) {
        out.dn[j] = prm.D * lap_n[j] + reac.dn[j];
        out.dp[j] = prm.D * lap_p[j] + reac.dp[j];
    }
    out.dn[grid.M - 1] = 0.0;
    out.dz = reac.dz;
    return out;
}

State stage_state(const State& base, const RhsVec& k, double c, int M) {
    State s = base;
    for (int j = 0; j < M; ++j) {
        s.n[j] += c * k.dn[j];
        s.p[j] += c * k.dp[j];
    }
    s.z += c * k.dz;
    return s;
}

// One-sided second-order gradient at the bottom boundary.
double boundary_gradient(const Field& n, const Grid& grid) {
    const int M = grid.M;
    return (3.0 * n[M - 1] - 4.0 * n[M - 2] + n[M - 3]) / (2.0 * grid.dx);
}

}  // namespace

double cfl_max_dt(const Parameters& params, const Grid& grid) {
    return grid.dx * grid.dx / (2.0 * params.D);
}

State step_imex(const State& state, const Parameters& params, LightModel light,
                FunctionalResponse kind, const Grid& grid, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_imex: dt must be positive");
    const int M = grid.M;
    const ReactionTerms terms = reaction_terms(state, params, light, kind, grid);

    Field nstar(M), pstar(M);
    for (int j = 0; j < M; ++j) {
        nstar[j] = state.n[j] - dt * terms.uptake[j];
        pstar[j] = state.p[j] + dt * (terms.uptake[j] - terms.predation[j]);
    }
    const double zstar = state.z + dt * terms.zoo_growth;

    const Tridiagonal sys_n =
        build_implicit_system(BoundarySpec::neumann_dirichlet(params.n_H), grid, params, dt, 0.0);
    const Tridiagonal sys_p =
        build_implicit_system(BoundarySpec::neumann_neumann(), grid, params, dt, params.m_p);
    nstar[M - 1] = sys_n.load[M - 1];  // hold the boundary value

    State out;
    out.t = state.t + dt;
    out.n = thomas_solve(sys_n, nstar);
    out.p = thomas_solve(sys_p, pstar);
    out.z = zstar / (1.0 + dt * params.m);
    check_finite(out, out.t);
    return out;
}

State step_explicit(const State& state, const Parameters& params, LightModel light,
                    FunctionalResponse kind, const Grid& grid, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_explicit: dt must be positive");
    const double dt_max = cfl_max_dt(params, grid);
    if (dt > dt_max * (1.0 + 1e-12))
        throw CflError("step_explicit: dt = " + std::to_string(dt) +
                       " exceeds the diffusive stability bound " + std::to_string(dt_max));

    const int M = grid.M;
    State base = state;
    base.n[M - 1] = params.n_H;

    const RhsVec k1 = full_rhs(base, params, light, kind, grid);
    const RhsVec k2 = full_rhs(stage_state(base, k1, 0.5 * dt, M), params, light, kind, grid);
    const RhsVec k3 = full_rhs(stage_state(base, k2, 0.5 * dt, M), params, light, kind, grid);
    const RhsVec k4 = full_rhs(stage_state(base, k3, dt, M), params, light, kind, grid);

    State out = base;
    out.t = state.t + dt;
    for (int j = 0; j < M; ++j) {
        out.n[j] += dt / 6.0 * (k1.dn[j] + 2.0 * k2.dn[j] + 2.0 * k3.dn[j] + k4.dn[j]);
        out.p[j] += dt / 6.0 * (k1.dp[j] + 2.0 * k2.dp[j] + 2.0 * k3.dp[j] + k4.dp[j]);
    }
    out.z += dt / 6.0 * (k1.dz + 2.0 * k2.dz + 2.0 * k3.dz + k4.dz);
    check_finite(out, out.t);
    return out;
}

SnapshotStats compute_snapshot_stats(const State& state, const State* prev,
                                     const Parameters& params, FunctionalResponse kind,
                                     const Grid& grid) {
    SnapshotStats s;
    s.t = state.t;
    s.z = state.z;
    s.int_p = trapezoid(state.p, grid);
    s.int_gp = response_integral(state.p, kind, grid);
    s.min_n = *std::min_element(state.n.begin(), state.n.end());
    s.max_n = *std::max_element(state.n.begin(), state.n.end());
    s.min_p = *std::min_element(state.p.begin(), state.p.end());

    if (prev != nullptr) {
        // Column balance: d/dt [int(n) + int(p) + H z/k]
        //                 = D dn/dh|_H - m_p int(p) - (m/k) H z
        // (with k = 0 the z term drops out and predation appears as a sink).
        auto mass = [&](const State& q) {
            double total = trapezoid(q.n, grid) + trapezoid(q.p, grid);
            if (params.k > 0.0) total += params.H * q.z / params.k;
            return total;
        };
        auto flux = [&](const State& q) {
            double f = params.D * boundary_gradient(q.n, grid) -
                       params.m_p * trapezoid(q.p, grid);
            if (params.k > 0.0)
                f -= params.m / params.k * params.H * q.z;
            else
                f -= q.z * response_integral(q.p, kind, grid);
            return f;
        };
        const double span = state.t - prev->t;
        s.flux_residual = (mass(state) - mass(*prev)) / span - flux(*prev);
    }
    return s;
}

Trajectory integrate(const State& initial, const Parameters& params, LightModel light,
                     FunctionalResponse kind, const Grid& grid, const SolverConfig& config) {
    if (!(config.dt > 0.0) || !std::isfinite(config.dt))
        throw std::invalid_argument("integrate: dt must be positive");
    if (!(config.t_end >= 0.0) || !std::isfinite(config.t_end))
        throw std::invalid_argument("integrate: t_end must be >= 0");
    if (config.snapshot_every < 1)
        throw std::invalid_argument("integrate: snapshot_every must be >= 1");
    if (static_cast<int>(initial.n.size()) != grid.M ||
        static_cast<int>(initial.p.size()) != grid.M)
        throw std::invalid_argument("integrate: initial fields do not match grid");
    check_finite(initial, initial.t);

    auto enforce_positivity = [&](State& s) {
        auto handle = [&](double& v, const char* what, int node) {
            if (v >= 0.0) return;
            if (v < -config.positivity_tol)
                throw PositivityError(std::string(what) + " fell below -tolerance at node " +
                                      std::to_string(node) + ", t = " + std::to_string(s.t) +
                                      ", value " + std::to_string(v));
            if (config.clamp_mode) {
                v = 0.0;
                return;
            }
        };
        long events = 0;
        for (int j = 0; j < grid.M; ++j) {
            const double before_n = s.n[j], before_p = s.p[j];
            handle(s.n[j], "nutrient", j);
            handle(s.p[j], "phytoplankton", j);
            if (config.clamp_mode && (s.n[j] != before_n || s.p[j] != before_p)) ++events;
        }
        const double before_z = s.z;
        handle(s.z, "zooplankton", -1);
        if (config.clamp_mode && s.z != before_z) ++events;
        return events;
    };

    Trajectory traj;
    State cur = initial;
    traj.clamp_events += enforce_positivity(cur);
    traj.snapshots.push_back(cur);
    traj.diagnostics.push_back(compute_snapshot_stats(cur, nullptr, params, kind, grid));

    const long nsteps = std::llround(config.t_end / config.dt);
    for (long i = 1; i <= nsteps; ++i) {
        cur = (config.scheme == Scheme::ImexEuler)
                  ? step_imex(cur, params, light, kind, grid, config.dt)
                  : step_explicit(cur, params, light, kind, grid, config.dt);
        traj.clamp_events += enforce_positivity(cur);
        if (i % config.snapshot_every == 0 || i == nsteps) {
            traj.diagnostics.push_back(
                compute_snapshot_stats(cur, &traj.snapshots.back(), params, kind, grid));
            traj.snapshots.push_back(cur);
        }
    }
    return traj;
}

}  // namespace npz
