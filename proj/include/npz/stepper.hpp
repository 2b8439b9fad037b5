#pragma once

#include "npz/discretization.hpp"
#include "npz/model.hpp"

namespace npz {

enum class Scheme {
    ImexEuler,    ///< implicit diffusion + linear decay, explicit reaction
    ExplicitRk4,  ///< classical four-stage explicit step (cross-validation)
};

struct SolverConfig {
    double dt = 1e-3;
    double t_end = 1.0;
    Scheme scheme = Scheme::ImexEuler;
    int snapshot_every = 1;
    double positivity_tol = 1e-10;
    bool clamp_mode = false;

    bool operator==(const SolverConfig&) const = default;
};

/// Per-snapshot diagnostics. flux_residual compares the discrete rate of
/// change of the conserved combination int(n) + int(p) + H*z/k against the
/// boundary inflow minus the mortality sinks; it is zero on the first
/// snapshot (no predecessor).
struct SnapshotStats {
    double t = 0.0;
    double z = 0.0;
    double int_p = 0.0;
    double int_gp = 0.0;
    double min_n = 0.0;
    double max_n = 0.0;
    double min_p = 0.0;
    double flux_residual = 0.0;
};

struct Trajectory {
    std::vector<State> snapshots;
    std::vector<SnapshotStats> diagnostics;
    long clamp_events = 0;
};

/// Explicit diffusion stability bound dx^2/(2D).
double cfl_max_dt(const Parameters& params, const Grid& grid);

/// One operator-split step:
///  1. explicit nonlinear half: uptake, predation, zooplankton growth;
///  2. implicit tridiagonal solves for n (mixed BCs) and p (Neumann BCs,
///     decay m_p), the nutrient boundary node held at n_H exactly;
///  3. z <- (z + dt*z*intake) / (1 + dt*m).
State step_imex(const State& state, const Parameters& params, LightModel light,
                FunctionalResponse kind, const Grid& grid, double dt);

/// Classical RK4 on the full semi-discrete right-hand side, the nutrient
/// boundary node held at n_H at every stage. Requires dt <= cfl_max_dt.
State step_explicit(const State& state, const Parameters& params, LightModel light,
                    FunctionalResponse kind, const Grid& grid, double dt);

/// Repeated stepping to t_end with snapshots at the configured cadence (the
/// final state is always recorded). Entries below -positivity_tol abort with
/// PositivityError; with clamp_mode, negatives within tolerance are clamped
/// to zero and counted in Trajectory::clamp_events.
Trajectory integrate(const State& initial, const Parameters& params, LightModel light,
                     FunctionalResponse kind, const Grid& grid, const SolverConfig& config);

/// Diagnostics for one snapshot; `prev` is the preceding snapshot or null.
SnapshotStats compute_snapshot_stats(const State& state, const State* prev,
                                     const Parameters& params, FunctionalResponse kind,
                                     const Grid& grid);

}  // namespace npz
