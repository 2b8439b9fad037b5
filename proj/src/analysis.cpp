#include "npz/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "npz/oracles.hpp"

namespace npz {

namespace {

void require_snapshots(const Trajectory& traj, std::size_t at_least, const char* what) {
    if (traj.snapshots.size() < at_least)
        throw std::invalid_argument(std::string(what) + ": trajectory too short");
}

std::vector<double> pack(const State& s) {
    std::vector<double> v;
    v.reserve(s.n.size() + s.p.size() + 1);
    v.insert(v.end(), s.n.begin(), s.n.end());
    v.insert(v.end(), s.p.begin(), s.p.end());
    v.push_back(s.z);
    return v;
}

State unpack(const std::vector<double>& v, const Grid& grid, double t) {
    State s;
    s.n.assign(v.begin(), v.begin() + grid.M);
    s.p.assign(v.begin() + grid.M, v.begin() + 2 * grid.M);
    s.z = v[2 * grid.M];
    s.t = t;
    return s;
}

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

InvariantReport check_positivity(const Trajectory& traj, double tol) {
    require_snapshots(traj, 1, "check_positivity");
    InvariantReport rep;
    rep.name = "POSITIVITY";
    rep.tolerance = tol;
    rep.worst = std::numeric_limits<double>::infinity();
    for (const State& s : traj.snapshots) {
        for (int j = 0; j < static_cast<int>(s.n.size()); ++j) {
            if (s.n[j] < rep.worst) {
                rep.worst = s.n[j];
                rep.node = j;
                rep.time = s.t;
            }
            if (s.p[j] < rep.worst) {
                rep.worst = s.p[j];
                rep.node = j;
                rep.time = s.t;
            }
        }
        if (s.z < rep.worst) {
            rep.worst = s.z;
            rep.node = -1;
            rep.time = s.t;
        }
    }
    rep.passed = rep.worst >= -tol;
    return rep;
}

InvariantReport check_n_bound(const Trajectory& traj, const Parameters& params, double tol) {
    require_snapshots(traj, 1, "check_n_bound");
    const State& first = traj.snapshots.front();
    const double bound =
        std::max(params.n_H, *std::max_element(first.n.begin(), first.n.end()));

    InvariantReport rep;
    rep.name = "N_BOUND";
    rep.tolerance = tol;
    rep.worst = -std::numeric_limits<double>::infinity();
    for (const State& s : traj.snapshots) {
        for (int j = 0; j < static_cast<int>(s.n.size()); ++j) {
            const double excess = s.n[j] - bound;
            if (excess > rep.worst) {
                rep.worst = excess;
                rep.node = j;
                rep.time = s.t;
            }
        }
    }
    rep.passed = rep.worst <= tol;
    return rep;
}

InvariantReport check_z_inequality(const Trajectory& traj, const Parameters& params,
                                   FunctionalResponse kind, const Grid& grid) {
    require_snapshots(traj, 2, "check_z_inequality");

    InvariantReport rep;
    rep.name = "Z_INEQUALITY";
    rep.tolerance = 0.0;
    rep.worst = -std::numeric_limits<double>::infinity();
    rep.passed = true;

    // Growth coefficients (k/H) int g(p_i) at every snapshot.
    std::vector<double> growth(traj.snapshots.size());
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i)
        growth[i] = zoo_intake(traj.snapshots[i].p, kind, params, grid);

    for (std::size_t i = 0; i + 1 < traj.snapshots.size(); ++i) {
        const State& a = traj.snapshots[i];
        const State& b = traj.snapshots[i + 1];
        const double span = b.t - a.t;
        const double fwd = (b.z - a.z) / span;
        const double rate = a.z * (growth[i] - params.m);

        // Slack model: forward-difference curvature (z(G-m)^2 and the drift of
        // G between snapshots) plus the implicit-decay bias m*z*|G-m|*dt.
        const double zmax = std::max(a.z, b.z);
        const double gm = std::max(std::abs(growth[i] - params.m),
                                   std::abs(growth[i + 1] - params.m));
        const double slack = span * zmax * (params.m * gm + 0.5 * gm * gm) +
                             0.5 * zmax * std::abs(growth[i + 1] - growth[i]) +
                             1e-12 * std::max(1.0, zmax);

        const double violation = fwd - rate - slack;
        if (violation > rep.worst) {
            rep.worst = violation;
            rep.time = b.t;
        }
        if (violation > 0.0) rep.passed = false;
    }
    return rep;
}

DecayFit fit_extinction(const Trajectory& traj, const Parameters& params, Window window) {
    if (!(params.m_p > params.max_growth_rate()))
        throw std::invalid_argument("fit_extinction: requires m_p > r/chi");
    require_snapshots(traj, 2, "fit_extinction");
    if (!(window.lo < window.hi) || window.lo < traj.snapshots.front().t ||
        window.hi > traj.snapshots.back().t + 1e-12)
        throw std::invalid_argument("fit_extinction: window outside trajectory span");

    std::vector<double> ts, ys;
    for (const SnapshotStats& d : traj.diagnostics) {
        if (d.t < window.lo || d.t > window.hi) continue;
        if (!(d.int_p > 0.0))
            throw std::domain_error("fit_extinction: nonpositive int(p) in window");
        ts.push_back(d.t);
        ys.push_back(std::log(d.int_p));
    }
    if (ts.size() < 2)
        throw std::invalid_argument("fit_extinction: fewer than two snapshots in window");

    const double n = static_cast<double>(ts.size());
    double mt = 0.0, my = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        mt += ts[i];
        my += ys[i];
    }
    mt /= n;
    my /= n;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        num += (ts[i] - mt) * (ys[i] - my);
        den += (ts[i] - mt) * (ts[i] - mt);
    }

    DecayFit fit;
    fit.window = window;
    fit.rate = num / den;
    fit.bound = params.max_growth_rate() - params.m_p;

    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double pred = my + fit.rate * (ts[i] - mt);
        ss_res += (ys[i] - pred) * (ys[i] - pred);
        ss_tot += (ys[i] - my) * (ys[i] - my);
    }
    fit.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
    fit.passed = fit.rate <= fit.bound + 0.05 * std::abs(fit.bound);
    return fit;
}

std::vector<double> steady_system(const State& state, const Parameters& params,
                                  LightModel light, FunctionalResponse kind,
                                  const Grid& grid) {
    const int M = grid.M;
    const ReactionRhs reac = reaction_rhs(state, params, light, kind, grid);
    const Field lap_n =
        apply_laplacian(state.n, BoundarySpec::neumann_dirichlet(params.n_H), grid);
    const Field lap_p = apply_laplacian(state.p, BoundarySpec::neumann_neumann(), grid);

    std::vector<double> f(2 * M + 1);
    for (int j = 0; j < M; ++j) {
        f[j] = params.D * lap_n[j] + reac.dn[j];
        f[M + j] = params.D * lap_p[j] + reac.dp[j];
    }
    f[M - 1] = state.n[M - 1] - params.n_H;  // pinned boundary row
    f[2 * M] = reac.dz;
    return f;
}

double steady_residual(const State& state, const Parameters& params, LightModel light,
                       FunctionalResponse kind, const Grid& grid) {
    std::vector<double> f = steady_system(state, params, light, kind, grid);
    f[grid.M - 1] = 0.0;  // Dirichlet row excluded
    return inf_norm(f);
}

std::vector<std::vector<double>> steady_jacobian(const State& state, const Parameters& params,
                                                 LightModel light, FunctionalResponse kind,
                                                 const Grid& grid) {
    const std::vector<double> v0 = pack(state);
    const std::vector<double> f0 = steady_system(state, params, light, kind, grid);
    const int dim = static_cast<int>(v0.size());
    const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());

    std::vector<std::vector<double>> jac(dim, std::vector<double>(dim, 0.0));
    std::vector<double> v = v0;
    for (int col = 0; col < dim; ++col) {
        const double h = sqrt_eps * std::max(1.0, std::abs(v0[col]));
        v[col] = v0[col] + h;
        const std::vector<double> f1 =
            steady_system(unpack(v, grid, state.t), params, light, kind, grid);
        for (int row = 0; row < dim; ++row) jac[row][col] = (f1[row] - f0[row]) / h;
        v[col] = v0[col];
    }
    return jac;
}

SteadyResult find_steady(const State& guess, const Parameters& params, LightModel light,
                         FunctionalResponse kind, const Grid& grid, double tol,
                         int max_iter) {
    SteadyResult result;
    result.state = guess;

    std::vector<double> v = pack(guess);
    std::vector<double> f;
    try {
        f = steady_system(guess, params, light, kind, grid);
    } catch (const std::exception&) {
        result.status = SteadyResult::Status::LeftAdmissibleSet;
        return result;
    }
    double res = inf_norm(f);

    for (int iter = 0; iter < max_iter; ++iter) {
        if (res <= tol) {
            result.status = SteadyResult::Status::Converged;
            result.state = unpack(v, grid, guess.t);
            result.residual = res;
            result.iterations = iter;
            return result;
        }

        std::vector<std::vector<double>> jac;
        std::vector<double> delta;
        try {
            jac = steady_jacobian(unpack(v, grid, guess.t), params, light, kind, grid);
            std::vector<double> neg_f(f.size());
            for (std::size_t i = 0; i < f.size(); ++i) neg_f[i] = -f[i];
            delta = dense_solve(std::move(jac), neg_f);
        } catch (const std::runtime_error&) {
            result.status = SteadyResult::Status::SingularJacobian;
            result.state = unpack(v, grid, guess.t);
            result.residual = res;
            result.iterations = iter;
            return result;
        } catch (const std::exception&) {
            result.status = SteadyResult::Status::LeftAdmissibleSet;
            result.state = unpack(v, grid, guess.t);
            result.residual = res;
            result.iterations = iter;
            return result;
        }

        bool accepted = false;
        bool evaluable = false;
        double alpha = 1.0;
        for (int halving = 0; halving <= 30; ++halving, alpha *= 0.5) {
            std::vector<double> trial(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) trial[i] = v[i] + alpha * delta[i];
            try {
                const std::vector<double> ft =
                    steady_system(unpack(trial, grid, guess.t), params, light, kind, grid);
                evaluable = true;
                const double rt = inf_norm(ft);
                if (rt < res) {
                    v = std::move(trial);
                    f = ft;
                    res = rt;
                    accepted = true;
                    break;
                }
            } catch (const std::exception&) {
                // trial point outside the admissible set; keep halving
            }
        }
        if (!accepted) {
            result.status = evaluable ? SteadyResult::Status::MaxIterations
                                      : SteadyResult::Status::LeftAdmissibleSet;
            result.state = unpack(v, grid, guess.t);
            result.residual = res;
            result.iterations = iter;
            return result;
        }
    }

    result.status = res <= tol ? SteadyResult::Status::Converged
                               : SteadyResult::Status::MaxIterations;
    result.state = unpack(v, grid, guess.t);
    result.residual = res;
    result.iterations = max_iter;
    return result;
}

}  // namespace npz
