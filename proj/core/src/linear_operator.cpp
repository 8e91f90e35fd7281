#include "ccs/linear_operator.hpp"

#include <cmath>

#include "ccs/errors.hpp"
#include "face_geometry.hpp"

namespace ccs {

LinearOperator assemble(const Grid& grid, const Field& c, const BoundaryValues& boundary_values) {
    if (c.grid != &grid) throw InvalidSpecError("assemble: coefficient field on wrong grid");
    for (int i = 0; i < grid.num_nodes; ++i) {
        if (!std::isfinite(c[i])) throw InvalidSpecError("assemble: non-finite coefficient");
        if (c[i] < 0.0)
            throw InvalidSpecError("assemble: negative reaction coefficient breaks the "
                                   "maximum-principle structure");
    }
    boundary_values.validate_finite();

    LinearOperator op;
    op.grid = &grid;
    op.bc = boundary_values;
    op.tridiagonal = grid.geometry.axes() == 1;

    op.interior_index.assign(static_cast<size_t>(grid.num_nodes), -1);
    for (int node = 0; node < grid.num_nodes; ++node) {
        if (!grid.is_boundary(node)) {
            op.interior_index[static_cast<size_t>(node)] = static_cast<int>(op.interior_nodes.size());
            op.interior_nodes.push_back(node);
        }
    }
    const int m = op.num_interior();

    const detail::FaceGeometry faces = detail::build_faces(grid);
    const std::vector<double>& cell = faces.cell;

    op.volume.resize(static_cast<size_t>(m));
    op.diag.assign(static_cast<size_t>(m), 0.0);
    for (int k = 0; k < m; ++k) {
        const int node = op.interior_nodes[static_cast<size_t>(k)];
        op.volume[static_cast<size_t>(k)] = cell[static_cast<size_t>(node)];
        op.diag[static_cast<size_t>(k)] = cell[static_cast<size_t>(node)] * c[node];
    }

    // gather couplings per interior row
    std::vector<std::vector<std::pair<int, double>>> rows(static_cast<size_t>(m));
    for (size_t f = 0; f < faces.coef.size(); ++f) {
        const int a = faces.na[f];
        const int b = faces.nb[f];
        const double s = faces.coef[f];
        const int ia = op.interior_index[static_cast<size_t>(a)];
        const int ib = op.interior_index[static_cast<size_t>(b)];
        if (ia >= 0) {
            op.diag[static_cast<size_t>(ia)] += s;
            rows[static_cast<size_t>(ia)].emplace_back(b, -s);
        }
        if (ib >= 0) {
            op.diag[static_cast<size_t>(ib)] += s;
            rows[static_cast<size_t>(ib)].emplace_back(a, -s);
        }
    }
    op.row_start.assign(static_cast<size_t>(m) + 1, 0);
    for (int k = 0; k < m; ++k)
        op.row_start[static_cast<size_t>(k) + 1] =
            op.row_start[static_cast<size_t>(k)] + static_cast<int>(rows[static_cast<size_t>(k)].size());
    op.nbr_node.resize(static_cast<size_t>(op.row_start.back()));
    op.nbr_coef.resize(static_cast<size_t>(op.row_start.back()));
    for (int k = 0; k < m; ++k) {
        int pos = op.row_start[static_cast<size_t>(k)];
        for (const auto& [node, s] : rows[static_cast<size_t>(k)]) {
            op.nbr_node[static_cast<size_t>(pos)] = node;
            op.nbr_coef[static_cast<size_t>(pos)] = s;
            ++pos;
        }
    }
    return op;
}

Field LinearOperator::apply(const Field& w) const {
    Field out(*grid, 0.0);
    const int m = num_interior();
    for (int k = 0; k < m; ++k) {
        const int node = interior_nodes[static_cast<size_t>(k)];
        double s = diag[static_cast<size_t>(k)] * w[node];
        for (int p = row_start[static_cast<size_t>(k)]; p < row_start[static_cast<size_t>(k) + 1]; ++p)
            s += nbr_coef[static_cast<size_t>(p)] * w[nbr_node[static_cast<size_t>(p)]];
        out[node] = s / volume[static_cast<size_t>(k)];
    }
    return out;
}

double LinearOperator::cell_volume(int node) const {
    const int k = interior_index[static_cast<size_t>(node)];
    return k >= 0 ? volume[static_cast<size_t>(k)] : 0.0;
}

namespace {

// right-hand side of the eliminated system: cell*rhs - boundary couplings
std::vector<double> eliminated_rhs(const LinearOperator& op, const Field& rhs) {
    const int m = op.num_interior();
    std::vector<double> b(static_cast<size_t>(m));
    for (int k = 0; k < m; ++k) {
        const int node = op.interior_nodes[static_cast<size_t>(k)];
        double v = op.volume[static_cast<size_t>(k)] * rhs[node];
        for (int p = op.row_start[static_cast<size_t>(k)]; p < op.row_start[static_cast<size_t>(k) + 1];
             ++p) {
            const int nb = op.nbr_node[static_cast<size_t>(p)];
            if (op.interior_index[static_cast<size_t>(nb)] < 0)
                v -= op.nbr_coef[static_cast<size_t>(p)] * op.bc.value_at_node(nb);
        }
        b[static_cast<size_t>(k)] = v;
    }
    return b;
}

Field assemble_solution(const LinearOperator& op, const std::vector<double>& x) {
    Field out(*op.grid, 0.0);
    for (int k = 0; k < op.num_interior(); ++k)
        out[op.interior_nodes[static_cast<size_t>(k)]] = x[static_cast<size_t>(k)];
    for (size_t k = 0; k < op.grid->boundary_nodes.size(); ++k)
        out[op.grid->boundary_nodes[k]] = op.bc.values[k];
    return out;
}

std::vector<double> thomas_solve(const LinearOperator& op, std::vector<double> b) {
    // interior nodes of one-axis grids are contiguous; couplings are +-1 in
    // node index, so the eliminated system is tridiagonal and SPD.
    const int m = op.num_interior();
    std::vector<double> low(static_cast<size_t>(m), 0.0), up(static_cast<size_t>(m), 0.0);
    std::vector<double> d = op.diag;
    for (int k = 0; k < m; ++k) {
        const int node = op.interior_nodes[static_cast<size_t>(k)];
        for (int p = op.row_start[static_cast<size_t>(k)]; p < op.row_start[static_cast<size_t>(k) + 1];
             ++p) {
            const int nb = op.nbr_node[static_cast<size_t>(p)];
            if (op.interior_index[static_cast<size_t>(nb)] < 0) continue;
            if (nb == node - 1) low[static_cast<size_t>(k)] = op.nbr_coef[static_cast<size_t>(p)];
            if (nb == node + 1) up[static_cast<size_t>(k)] = op.nbr_coef[static_cast<size_t>(p)];
        }
    }
    for (int k = 1; k < m; ++k) {
        const double w = low[static_cast<size_t>(k)] / d[static_cast<size_t>(k) - 1];
        d[static_cast<size_t>(k)] -= w * up[static_cast<size_t>(k) - 1];
        b[static_cast<size_t>(k)] -= w * b[static_cast<size_t>(k) - 1];
    }
    std::vector<double> x(static_cast<size_t>(m));
    x[static_cast<size_t>(m) - 1] = b[static_cast<size_t>(m) - 1] / d[static_cast<size_t>(m) - 1];
    for (int k = m - 2; k >= 0; --k)
        x[static_cast<size_t>(k)] = (b[static_cast<size_t>(k)] -
                                     up[static_cast<size_t>(k)] * x[static_cast<size_t>(k) + 1]) /
                                    d[static_cast<size_t>(k)];
    return x;
}

void matvec(const LinearOperator& op, const std::vector<double>& x, std::vector<double>& y) {
    const int m = op.num_interior();
    for (int k = 0; k < m; ++k) {
        double s = op.diag[static_cast<size_t>(k)] * x[static_cast<size_t>(k)];
        for (int p = op.row_start[static_cast<size_t>(k)]; p < op.row_start[static_cast<size_t>(k) + 1];
             ++p) {
            const int j = op.interior_index[static_cast<size_t>(op.nbr_node[static_cast<size_t>(p)])];
            if (j >= 0) s += op.nbr_coef[static_cast<size_t>(p)] * x[static_cast<size_t>(j)];
        }
        y[static_cast<size_t>(k)] = s;
    }
}

std::vector<double> cg_solve(const LinearOperator& op, const std::vector<double>& b, double tol) {
    const int m = op.num_interior();
    const int cap = 20 * op.grid->num_nodes;
    std::vector<double> x(static_cast<size_t>(m), 0.0);
    std::vector<double> r = b, z(static_cast<size_t>(m)), p(static_cast<size_t>(m)),
                        q(static_cast<size_t>(m));

    auto precondition = [&](const std::vector<double>& in, std::vector<double>& out) {
        for (int k = 0; k < m; ++k)
            out[static_cast<size_t>(k)] = in[static_cast<size_t>(k)] / op.diag[static_cast<size_t>(k)];
    };
    auto dot = [m](const std::vector<double>& a, const std::vector<double>& c) {
        double s = 0.0;
        for (int k = 0; k < m; ++k) s += a[static_cast<size_t>(k)] * c[static_cast<size_t>(k)];
        return s;
    };

    precondition(r, z);
    double rz = dot(r, z);
    if (rz == 0.0) return x;
    // x0 = 0, so the initial preconditioned residual norm is the rhs norm
    // (Dirichlet lift included in b).
    const double target = tol * std::sqrt(rz);
    p = z;
    double resid = std::sqrt(rz);
    for (int it = 0; it < cap; ++it) {
        matvec(op, p, q);
        const double alpha = rz / dot(p, q);
        for (int k = 0; k < m; ++k) {
            x[static_cast<size_t>(k)] += alpha * p[static_cast<size_t>(k)];
            r[static_cast<size_t>(k)] -= alpha * q[static_cast<size_t>(k)];
        }
        precondition(r, z);
        const double rz_next = dot(r, z);
        resid = std::sqrt(std::max(rz_next, 0.0));
        if (resid <= target) return x;
        const double beta = rz_next / rz;
        rz = rz_next;
        for (int k = 0; k < m; ++k)
            p[static_cast<size_t>(k)] = z[static_cast<size_t>(k)] + beta * p[static_cast<size_t>(k)];
    }
    throw NonConvergenceError("conjugate gradients hit the iteration cap", cap, resid);
}

} // namespace

Field solve_spd(const LinearOperator& op, const Field& rhs, double tol) {
    if (!(tol > 0.0)) throw InvalidSpecError("solve_spd: tol must be positive");
    std::vector<double> b = eliminated_rhs(op, rhs);
    if (op.tridiagonal) return assemble_solution(op, thomas_solve(op, std::move(b)));
    return assemble_solution(op, cg_solve(op, b, tol));
}

} // namespace ccs
