#include "npz/discretization.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace npz {

Field apply_laplacian(const Field& u, const BoundarySpec& bc, const Grid& grid) {
    if (static_cast<int>(u.size()) != grid.M)
        throw std::invalid_argument("apply_laplacian: field length does not match grid");
    const int M = grid.M;
    const double inv_dx2 = 1.0 / (grid.dx * grid.dx);

    Field out(M);
    out[0] = 2.0 * (u[1] - u[0]) * inv_dx2;  // mirror ghost u[-1] = u[1]
    for (int j = 1; j + 1 < M; ++j)
        out[j] = (u[j - 1] - 2.0 * u[j] + u[j + 1]) * inv_dx2;
    if (bc.kind == BoundarySpec::Kind::NeumannNeumann)
        out[M - 1] = 2.0 * (u[M - 2] - u[M - 1]) * inv_dx2;  // mirror ghost u[M] = u[M-2]
    else
        out[M - 1] = 0.0;  // pinned Dirichlet node
    return out;
}

Tridiagonal build_implicit_system(const BoundarySpec& bc, const Grid& grid,
                                  const Parameters& params, double dt, double decay) {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("build_implicit_system: dt must be positive");
    if (decay < 0.0 || !std::isfinite(decay))
        throw std::invalid_argument("build_implicit_system: decay must be >= 0");

    const int M = grid.M;
    const double mu = dt * params.D / (grid.dx * grid.dx);

    Tridiagonal sys;
    sys.lower.assign(M - 1, -mu);
    sys.diag.assign(M, 1.0 + 2.0 * mu + dt * decay);
    sys.upper.assign(M - 1, -mu);
    sys.upper[0] = -2.0 * mu;  // mirror ghost folded into row 0

    if (bc.kind == BoundarySpec::Kind::NeumannNeumann) {
        sys.lower[M - 2] = -2.0 * mu;
    } else {
        sys.lower[M - 2] = 0.0;
        sys.diag[M - 1] = 1.0;
        sys.load.assign(M, 0.0);
        sys.load[M - 1] = bc.dirichlet_value;
    }
    return sys;
}

Field thomas_solve(const Tridiagonal& sys, const Field& rhs) {
    const int M = sys.size();
    if (M < 1 || static_cast<int>(rhs.size()) != M ||
        static_cast<int>(sys.lower.size()) != M - 1 ||
        static_cast<int>(sys.upper.size()) != M - 1)
        throw std::invalid_argument("thomas_solve: inconsistent system sizes");

    std::vector<double> c(M - 1), d(M);
    double pivot = sys.diag[0];
    if (std::abs(pivot) < std::numeric_limits<double>::min())
        throw std::runtime_error("thomas_solve: zero pivot at row 0");
    if (M > 1) c[0] = sys.upper[0] / pivot;
    d[0] = rhs[0] / pivot;

    for (int i = 1; i < M; ++i) {
        pivot = sys.diag[i] - sys.lower[i - 1] * c[i - 1];
        if (std::abs(pivot) < std::numeric_limits<double>::min())
            throw std::runtime_error("thomas_solve: zero pivot at row " + std::to_string(i));
        if (i < M - 1) c[i] = sys.upper[i] / pivot;
        d[i] = (rhs[i] - sys.lower[i - 1] * d[i - 1]) / pivot;
    }

    Field x(M);
    x[M - 1] = d[M - 1];
    for (int i = M - 2; i >= 0; --i) x[i] = d[i] - c[i] * x[i + 1];
    return x;
}

}  // namespace npz
