#pragma once

#include <string>

#include "npz/stepper.hpp"

namespace npz {

struct InvariantReport {
    std::string name;
    bool passed = false;
    double worst = 0.0;  ///< most offending value (meaning depends on the check)
    int node = -1;       ///< -1 when the check is not node-local
    double time = 0.0;
    double tolerance = 0.0;
};

struct Window {
    double lo = 0.0;
    double hi = 0.0;
};

struct DecayFit {
    double rate = 0.0;       ///< least-squares slope of log int(p)
    Window window;
    double r_squared = 0.0;
    double bound = 0.0;      ///< r/chi - m_p
    bool passed = false;     ///< rate <= bound + 5% relative slack
};

/// Passes iff the minimum of n, p and z over all snapshots stays >= -tol.
/// `worst` is the most negative value observed.
InvariantReport check_positivity(const Trajectory& traj, double tol);

/// Passes iff n never exceeds max{n_H, max(n0)} + tol. `worst` is the
/// largest excess over the bound.
InvariantReport check_n_bound(const Trajectory& traj, const Parameters& params,
                              double tol = 1e-8);

/// Checks the discrete zooplankton growth inequality
///   (z_{i+1} - z_i)/dt <= z_i * ((k/H) int g(p_i) - m) + slack,
/// with slack of size O(dt) estimated from the recorded diagnostics.
/// `worst` is the largest violation net of slack (<= 0 when passing).
InvariantReport check_z_inequality(const Trajectory& traj, const Parameters& params,
                                   FunctionalResponse kind, const Grid& grid);

/// Exponential decay-rate fit of int(p) over the window. Requires the
/// mortality threshold m_p > r/chi; throws std::domain_error if int(p) is
/// nonpositive anywhere in the window.
DecayFit fit_extinction(const Trajectory& traj, const Parameters& params, Window window);

/// Infinity norm of diffusion + reaction (decay terms included) over all
/// components, the pinned nutrient boundary row excluded.
double steady_residual(const State& state, const Parameters& params, LightModel light,
                       FunctionalResponse kind, const Grid& grid);

/// Residual vector of the discrete steady problem, length 2M+1, with the
/// nutrient boundary row pinned as n[M-1] - n_H.
std::vector<double> steady_system(const State& state, const Parameters& params,
                                  LightModel light, FunctionalResponse kind,
                                  const Grid& grid);

/// Forward-difference Jacobian of steady_system.
std::vector<std::vector<double>> steady_jacobian(const State& state, const Parameters& params,
                                                 LightModel light, FunctionalResponse kind,
                                                 const Grid& grid);

struct SteadyResult {
    enum class Status { Converged, MaxIterations, SingularJacobian, LeftAdmissibleSet };

    Status status = Status::MaxIterations;
    State state;
    double residual = 0.0;
    int iterations = 0;

    bool ok() const { return status == Status::Converged; }
};

/// Damped Newton iteration on steady_system with a finite-difference
/// Jacobian. Step halving (at most 30 times) until the residual decreases.
SteadyResult find_steady(const State& guess, const Parameters& params, LightModel light,
                         FunctionalResponse kind, const Grid& grid, double tol = 1e-10,
                         int max_iter = 50);

}  // namespace npz
