#include "npz/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace npz {

Field HeatSeriesSolution::evaluate(double t, const Grid& grid) const {
    if (bc == BoundarySpec::Kind::NeumannNeumann)
        return heat_exact_neumann(coefficients, t, grid, diffusivity, decay);
    return heat_exact_mixed(coefficients, t, grid, shift, diffusivity);
}

Field heat_exact_neumann(const std::vector<double>& coefficients, double t,
                         const Grid& grid, double diffusivity, double decay) {
    const double pi = std::numbers::pi;
    Field out(grid.M, 0.0);
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
        const double omega = static_cast<double>(k) * pi / grid.H;
        const double amp =
            coefficients[k] * std::exp(-(omega * omega * diffusivity + decay) * t);
        if (amp == 0.0) continue;
        for (int j = 0; j < grid.M; ++j)
            out[j] += amp * std::cos(omega * grid.node(j));
    }
    return out;
}

Field heat_exact_mixed(const std::vector<double>& coefficients, double t,
                       const Grid& grid, double n_H, double diffusivity) {
    const double pi = std::numbers::pi;
    Field out(grid.M, n_H);
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
        const double omega = (static_cast<double>(k) + 0.5) * pi / grid.H;
        const double amp = coefficients[k] * std::exp(-omega * omega * diffusivity * t);
        if (amp == 0.0) continue;
        for (int j = 0; j + 1 < grid.M; ++j)
            out[j] += amp * std::cos(omega * grid.node(j));
    }
    out[grid.M - 1] = n_H;  // the eigenbasis vanishes at h = H
    return out;
}

Field dense_solve(std::vector<std::vector<double>> a, Field rhs) {
    const int n = static_cast<int>(a.size());
    if (n == 0 || static_cast<int>(rhs.size()) != n)
        throw std::invalid_argument("dense_solve: inconsistent sizes");
    double amax = 0.0;
    for (const auto& row : a) {
        if (static_cast<int>(row.size()) != n)
            throw std::invalid_argument("dense_solve: matrix is not square");
        for (double v : row) amax = std::max(amax, std::abs(v));
    }
    if (amax == 0.0) throw std::runtime_error("dense_solve: singular matrix");

    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int i = col + 1; i < n; ++i)
            if (std::abs(a[i][col]) > std::abs(a[piv][col])) piv = i;
        if (std::abs(a[piv][col]) < 1e-13 * amax)
            throw std::runtime_error("dense_solve: singular matrix");
        std::swap(a[piv], a[col]);
        std::swap(rhs[piv], rhs[col]);

        for (int i = col + 1; i < n; ++i) {
            const double f = a[i][col] / a[col][col];
            if (f == 0.0) continue;
            for (int jj = col; jj < n; ++jj) a[i][jj] -= f * a[col][jj];
            rhs[i] -= f * rhs[col];
        }
    }

    Field x(n);
    for (int i = n - 1; i >= 0; --i) {
        double s = rhs[i];
        for (int jj = i + 1; jj < n; ++jj) s -= a[i][jj] * x[jj];
        x[i] = s / a[i][i];
    }
    return x;
}

double convergence_order(const std::vector<std::pair<double, double>>& dx_error) {
    if (dx_error.size() < 2)
        throw std::invalid_argument("convergence_order: need at least two levels");
    double sx = 0.0, sy = 0.0;
    for (const auto& [dx, err] : dx_error) {
        if (!(dx > 0.0) || !(err > 0.0))
            throw std::invalid_argument("convergence_order: dx and error must be positive");
        sx += std::log(dx);
        sy += std::log(err);
    }
    const double n = static_cast<double>(dx_error.size());
    const double mx = sx / n, my = sy / n;
    double num = 0.0, den = 0.0;
    for (const auto& [dx, err] : dx_error) {
        num += (std::log(dx) - mx) * (std::log(err) - my);
        den += (std::log(dx) - mx) * (std::log(dx) - mx);
    }
    if (den == 0.0)
        throw std::invalid_argument("convergence_order: grid levels are degenerate");
    return num / den;
}

}  // namespace npz
