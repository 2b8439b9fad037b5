#pragma once

#include "npz/model.hpp"

namespace npz {

/// Boundary treatment of a diffusing field.
struct BoundarySpec {
    enum class Kind {
        NeumannDirichlet,  ///< zero flux at h = 0, fixed value at h = H (nutrient)
        NeumannNeumann,    ///< zero flux at both ends (phytoplankton)
    };

    Kind kind = Kind::NeumannNeumann;
    double dirichlet_value = 0.0;

    static BoundarySpec neumann_dirichlet(double value) {
        return {Kind::NeumannDirichlet, value};
    }
    static BoundarySpec neumann_neumann() { return {Kind::NeumannNeumann, 0.0}; }
};

/// Tridiagonal system. `load`, when nonempty, carries the right-hand side of
/// pinned Dirichlet rows (the corresponding matrix row is an identity row).
struct Tridiagonal {
    std::vector<double> lower;  ///< subdiagonal, length M-1
    std::vector<double> diag;   ///< main diagonal, length M
    std::vector<double> upper;  ///< superdiagonal, length M-1
    std::vector<double> load;   ///< empty, or length M with the Dirichlet value at the pinned row

    int size() const { return static_cast<int>(diag.size()); }
};

/// Second-order 3-point Laplacian with mirror-ghost Neumann ends. Under
/// NeumannDirichlet the node j = M-1 is pinned (zero output there); the
/// time stepper holds its value.
Field apply_laplacian(const Field& u, const BoundarySpec& bc, const Grid& grid);

/// Matrix of (I - dt*D*Laplacian + dt*decay*I) with boundary rows folded in.
/// For NeumannDirichlet the last row is an identity row and `load` carries
/// the boundary value.
Tridiagonal build_implicit_system(const BoundarySpec& bc, const Grid& grid,
                                  const Parameters& params, double dt, double decay);

/// Thomas algorithm: solves sys*x = rhs in O(M). The systems produced by
/// build_implicit_system are diagonally dominant, so no pivoting is needed;
/// a vanishing pivot still raises std::runtime_error.
Field thomas_solve(const Tridiagonal& sys, const Field& rhs);

}  // namespace npz
