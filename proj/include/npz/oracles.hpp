#pragma once

#include <utility>

#include "npz/discretization.hpp"
#include "npz/model.hpp"

namespace npz {

/// Eigenfunction-series solution of the linear diffusion(+decay) problem,
/// used as an independent reference for the finite-difference solver.
/// Coefficients live in the eigenbasis of the chosen boundary pair:
///   NeumannNeumann:   cos(k*pi*h/H),        k = 0, 1, ...
///   NeumannDirichlet: cos((k+1/2)*pi*h/H),  k = 0, 1, ...  (about `shift`)
struct HeatSeriesSolution {
    BoundarySpec::Kind bc = BoundarySpec::Kind::NeumannNeumann;
    std::vector<double> coefficients;
    double H = 1.0;
    double shift = 0.0;        ///< additive offset; boundary value in the mixed case
    double diffusivity = 1.0;
    double decay = 0.0;

    Field evaluate(double t, const Grid& grid) const;
};

/// p(t,h) = sum_k c_k exp(-(k*pi/H)^2*D*t - decay*t) cos(k*pi*h/H).
Field heat_exact_neumann(const std::vector<double>& coefficients, double t,
                         const Grid& grid, double diffusivity = 1.0,
                         double decay = 0.0);

/// n(t,h) = n_H + sum_k c_k exp(-((k+1/2)*pi/H)^2*D*t) cos((k+1/2)*pi*h/H).
/// The boundary node is exactly n_H.
Field heat_exact_mixed(const std::vector<double>& coefficients, double t,
                       const Grid& grid, double n_H, double diffusivity = 1.0);

/// Gaussian elimination with partial pivoting; brute-force reference for
/// thomas_solve and the linear algebra inside the Newton solver.
Field dense_solve(std::vector<std::vector<double>> a, Field rhs);

/// Least-squares slope of log(error) against log(dx).
double convergence_order(const std::vector<std::pair<double, double>>& dx_error);

}  // namespace npz
