#pragma once

#include <vector>

#include "npz/errors.hpp"

namespace npz {

using Field = std::vector<double>;

/// Round-off negatives in a density field are treated as zero below this
/// magnitude; anything more negative is a genuine domain violation.
inline constexpr double kNegativeTolerance = 1e-9;

/// Physical and model constants of the water column.
struct Parameters {
    double D = 1.0;      ///< vertical turbulent diffusion
    double H = 1.0;      ///< depth of the water column
    double chi = 1.0;    ///< inverse half-saturation density of nutrient intake
    double m = 0.1;      ///< zooplankton mortality rate
    double m_p = 0.1;    ///< phytoplankton mortality rate
    double k = 1.0;      ///< food utilization coefficient
    double r = 1.0;      ///< light-limited uptake scale
    double gamma = 1.0;  ///< light attenuation coefficient with depth
    double nu = 1.0;     ///< self-shading coefficient
    double n_H = 1.0;    ///< nutrient density held at the bottom boundary

    /// Maximum phytoplankton growth rate r/chi.
    double max_growth_rate() const { return r / chi; }

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;

    bool operator==(const Parameters&) const = default;
};

/// Uniform grid on [0, H]; node j sits at j*dx with dx = H/(M-1).
struct Grid {
    Grid(double depth, int nodes);

    double H;
    int M;
    double dx;

    double node(int j) const { return j + 1 == M ? H : j * dx; }
    std::vector<double> nodes() const;
};

/// Discrete state at one time instant: nutrient and phytoplankton fields
/// plus the depth-averaged zooplankton density.
struct State {
    Field n;
    Field p;
    double z = 0.0;
    double t = 0.0;
};

enum class LightModel {
    ExponentialDecay,  ///< attenuation r*exp(-gamma*h)
    SelfShading,       ///< attenuation r*exp(-nu * integral_0^h p)
};

enum class FunctionalResponse {
    HollingI,    ///< g(p) = p
    HollingII,   ///< g(p) = p/(1+p)
    HollingIII,  ///< g(p) = p^2/(1+p^2)
    Ivlev,       ///< g(p) = 1 - exp(-p)
    RatioQuad,   ///< g(p) = p^2/(1+p)
};

/// Zooplankton ingestion rate at phytoplankton density p >= 0.
double eval_g(FunctionalResponse kind, double p);

/// Smallest lambda with lambda*p - g(p) >= 0 on [0, m], i.e. the sup of
/// g(p)/p over the interval (limit value taken at p = 0).
double translation_lambda(FunctionalResponse kind, double m);

/// Composite trapezoid rule over the whole column.
double trapezoid(const Field& f, const Grid& grid);

/// Running trapezoid integral: C[0] = 0, C[j] ~ integral_0^{h_j} p dh.
/// Exact for affine integrands.
Field cumulative_integral(const Field& p, const Grid& grid);

/// Per-node light coefficient a_j with L_h(p)_j = a_j * p_j.
Field attenuation_profile(LightModel light, const Parameters& params,
                          const Grid& grid, const Field& p);

/// integral_0^H g(p) dh by the trapezoid rule.
double response_integral(const Field& p, FunctionalResponse kind, const Grid& grid);

/// (k/H) * integral_0^H g(p) dh, the zooplankton growth coefficient.
double zoo_intake(const Field& p, FunctionalResponse kind, const Parameters& params,
                  const Grid& grid);

/// Nonlinear reaction pieces, linear decay terms excluded. These are the
/// parts an operator-splitting step treats explicitly.
struct ReactionTerms {
    Field uptake;     ///< a_j * p_j * n_j/(1 + chi*n_j)
    Field predation;  ///< z * g(p_j)
    double zoo_growth = 0.0;
};

ReactionTerms reaction_terms(const State& state, const Parameters& params,
                             LightModel light, FunctionalResponse kind,
                             const Grid& grid);

/// Full non-diffusive right-hand side of the column model:
///   dn_j = -uptake_j
///   dp_j =  uptake_j - z*g(p_j) - m_p*p_j
///   dz   =  z*(zoo_intake - m)
/// Throws SingularityError if any 1 + chi*n_j < 1/2.
struct ReactionRhs {
    Field dn;
    Field dp;
    double dz = 0.0;
};

ReactionRhs reaction_rhs(const State& state, const Parameters& params,
                         LightModel light, FunctionalResponse kind,
                         const Grid& grid);

}  // namespace npz
