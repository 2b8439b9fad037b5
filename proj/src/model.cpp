#include "npz/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace npz {

namespace {

void require_size(const Field& f, int m, const char* what) {
    if (static_cast<int>(f.size()) != m)
        throw std::invalid_argument(std::string(what) + ": field length does not match grid");
}

// Accepts round-off negatives up to kNegativeTolerance and maps them to zero.
double clamped_density(double p, const char* what) {
    if (!std::isfinite(p))
        throw std::domain_error(std::string(what) + ": nonfinite density");
    if (p < 0.0) {
        if (p < -kNegativeTolerance)
            throw std::domain_error(std::string(what) + ": negative density beyond tolerance");
        return 0.0;
    }
    return p;
}

}  // namespace

void Parameters::validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(D) || !(D > 0.0)) throw std::invalid_argument("params.D must be > 0");
    if (!finite(H) || !(H > 0.0)) throw std::invalid_argument("params.H must be > 0");
    if (!finite(chi) || !(chi > 0.0)) throw std::invalid_argument("params.chi must be > 0");
    if (!finite(m) || m < 0.0) throw std::invalid_argument("params.m must be >= 0");
    if (!finite(m_p) || m_p < 0.0) throw std::invalid_argument("params.m_p must be >= 0");
    if (!finite(k) || k < 0.0) throw std::invalid_argument("params.k must be >= 0");
    if (!finite(r) || r < 0.0) throw std::invalid_argument("params.r must be >= 0");
    if (!finite(gamma) || gamma < 0.0) throw std::invalid_argument("params.gamma must be >= 0");
    if (!finite(nu) || nu < 0.0) throw std::invalid_argument("params.nu must be >= 0");
    if (!finite(n_H) || n_H < 0.0) throw std::invalid_argument("params.n_H must be >= 0");
}

Grid::Grid(double depth, int nodes) : H(depth), M(nodes), dx(depth / (nodes - 1)) {
    if (!std::isfinite(depth) || !(depth > 0.0))
        throw std::invalid_argument("grid depth must be positive");
    if (nodes < 3)
        throw std::invalid_argument("grid.M must be >= 3");
}

std::vector<double> Grid::nodes() const {
    std::vector<double> h(M);
    for (int j = 0; j < M; ++j) h[j] = node(j);
    return h;
}

double eval_g(FunctionalResponse kind, double p) {
    if (!std::isfinite(p) || p < 0.0)
        throw std::domain_error("eval_g: p must be finite and nonnegative");
    switch (kind) {
        case FunctionalResponse::HollingI:
            return p;
        case FunctionalResponse::HollingII:
            return p / (1.0 + p);
        case FunctionalResponse::HollingIII:
            return p * p / (1.0 + p * p);
        case FunctionalResponse::Ivlev:
            return 1.0 - std::exp(-p);
        case FunctionalResponse::RatioQuad:
            return p * p / (1.0 + p);
    }
    throw std::logic_error("eval_g: unknown response");
}

double translation_lambda(FunctionalResponse kind, double m) {
    if (!std::isfinite(m) || !(m > 0.0))
        throw std::domain_error("translation_lambda: m must be positive");
    switch (kind) {
        case FunctionalResponse::HollingI:
            return 1.0;
        case FunctionalResponse::HollingII:
            return 1.0;  // g(p)/p = 1/(1+p), supremum at p = 0
        case FunctionalResponse::HollingIII:
            // g(p)/p = p/(1+p^2) peaks at p = 1 with value 1/2
            return m < 1.0 ? m / (1.0 + m * m) : 0.5;
        case FunctionalResponse::Ivlev:
            return 1.0;  // (1-exp(-p))/p is decreasing with limit 1 at p = 0
        case FunctionalResponse::RatioQuad:
            return m / (1.0 + m);  // g(p)/p = p/(1+p) is increasing
    }
    throw std::logic_error("translation_lambda: unknown response");
}

double trapezoid(const Field& f, const Grid& grid) {
    require_size(f, grid.M, "trapezoid");
    double sum = 0.5 * (f.front() + f.back());
    for (int j = 1; j + 1 < grid.M; ++j) sum += f[j];
    return sum * grid.dx;
}

Field cumulative_integral(const Field& p, const Grid& grid) {
    require_size(p, grid.M, "cumulative_integral");
    Field c(grid.M);
    c[0] = 0.0;
    for (int j = 1; j < grid.M; ++j)
        c[j] = c[j - 1] + 0.5 * grid.dx * (p[j - 1] + p[j]);
    return c;
}

Field attenuation_profile(LightModel light, const Parameters& params,
                          const Grid& grid, const Field& p) {
    require_size(p, grid.M, "attenuation_profile");
    Field a(grid.M, 0.0);
    if (params.r == 0.0) return a;
    if (light == LightModel::ExponentialDecay) {
        for (int j = 0; j < grid.M; ++j)
            a[j] = params.r * std::exp(-params.gamma * grid.node(j));
    } else {
        const Field shade = cumulative_integral(p, grid);
        for (int j = 0; j < grid.M; ++j)
            a[j] = params.r * std::exp(-params.nu * shade[j]);
    }
    return a;
}

double response_integral(const Field& p, FunctionalResponse kind, const Grid& grid) {
    require_size(p, grid.M, "response_integral");
    Field gp(grid.M);
    for (int j = 0; j < grid.M; ++j)
        gp[j] = eval_g(kind, clamped_density(p[j], "response_integral"));
    return trapezoid(gp, grid);
}

double zoo_intake(const Field& p, FunctionalResponse kind, const Parameters& params,
                  const Grid& grid) {
    return params.k / params.H * response_integral(p, kind, grid);
}

ReactionTerms reaction_terms(const State& state, const Parameters& params,
                             LightModel light, FunctionalResponse kind,
                             const Grid& grid) {
    require_size(state.n, grid.M, "reaction_terms");
    require_size(state.p, grid.M, "reaction_terms");
    for (int j = 0; j < grid.M; ++j) {
        if (!(1.0 + params.chi * state.n[j] >= 0.5))
            throw SingularityError("reaction_terms: uptake denominator 1 + chi*n below 1/2 at node " +
                                   std::to_string(j));
    }

    ReactionTerms out;
    out.uptake.resize(grid.M);
    out.predation.resize(grid.M);
    const Field a = attenuation_profile(light, params, grid, state.p);
    for (int j = 0; j < grid.M; ++j) {
        const double u = state.n[j] / (1.0 + params.chi * state.n[j]);
        out.uptake[j] = a[j] * state.p[j] * u;
        out.predation[j] = state.z * eval_g(kind, clamped_density(state.p[j], "reaction_terms"));
    }
    out.zoo_growth = state.z * zoo_intake(state.p, kind, params, grid);
    return out;
}

ReactionRhs reaction_rhs(const State& state, const Parameters& params,
                         LightModel light, FunctionalResponse kind,
                         const Grid& grid) {
    const ReactionTerms terms = reaction_terms(state, params, light, kind, grid);
    ReactionRhs rhs;
    rhs.dn.resize(grid.M);
    rhs.dp.resize(grid.M);
    for (int j = 0; j < grid.M; ++j) {
        rhs.dn[j] = -terms.uptake[j];
        rhs.dp[j] = terms.uptake[j] - terms.predation[j] - params.m_p * state.p[j];
    }
    rhs.dz = terms.zoo_growth - params.m * state.z;
    return rhs;
}

}  // namespace npz
