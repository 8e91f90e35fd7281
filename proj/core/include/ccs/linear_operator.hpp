// Assembly of the discrete operator -Laplace_h + diag(c) with Dirichlet data
// eliminated by row removal, and SPD solves: exact tridiagonal elimination on
// one-axis grids, Jacobi-preconditioned conjugate gradients on rectangles.
//
// Assembly is in conservative (finite-volume) form: the eliminated interior
// system is symmetric positive definite with M-matrix sign structure for any
// c >= 0, which is what carries the discrete maximum principle. apply()
// reports the action in unweighted stencil units (second differences / h^2),
// i.e. row i of the assembled system divided by the cell volume of node i.
#pragma once

#include <vector>

#include "ccs/grid.hpp"

namespace ccs {

struct LinearOperator {
    const Grid* grid = nullptr;

    // interior numbering
    std::vector<int> interior_nodes;        // ascending node indices
    std::vector<int> interior_index;        // node -> interior position, -1 if boundary

    // symmetric eliminated system S (couplings store S_ij for j != i)
    std::vector<double> diag;               // S_ii, includes cell_volume * c
    std::vector<int> row_start;             // CSR offsets into nbr_*
    std::vector<int> nbr_node;              // neighbor node index (may be boundary)
    std::vector<double> nbr_coef;           // S_ij <= 0

    std::vector<double> volume;             // FV cell volume per interior node
    BoundaryValues bc;                      // folded Dirichlet data
    bool tridiagonal = false;

    int num_interior() const { return static_cast<int>(interior_nodes.size()); }

    // (-Laplace_h w + c w) at interior nodes using w's own values everywhere
    // (including its boundary entries); boundary entries of the result are 0.
    Field apply(const Field& w) const;

    // FV cell volume of an interior node (0 for boundary nodes). The operator
    // is self-adjoint in the inner product weighted by these volumes.
    double cell_volume(int node) const;
};

// c >= 0 nodewise is required (M-matrix structure); boundary_values must be
// finite. Dirichlet contributions are folded into the right-hand side at
// solve time.
LinearOperator assemble(const Grid& grid, const Field& c, const BoundaryValues& boundary_values);

inline constexpr double kDefaultLinearTol = 1e-12;

// Solves (-Laplace_h + c) w = rhs with the operator's Dirichlet data, to a
// preconditioned relative residual <= tol. Returns the full field with
// boundary entries set to the Dirichlet values. Throws NonConvergenceError
// (carrying the final residual) if the iteration cap of 20 * num_interior is
// reached; the tridiagonal path is direct and cannot fail this way.
Field solve_spd(const LinearOperator& op, const Field& rhs, double tol = kDefaultLinearTol);

} // namespace ccs
