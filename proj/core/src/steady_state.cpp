#include "ccs/steady_state.hpp"

#include <cmath>

#include "face_geometry.hpp"

namespace ccs {

namespace {

SteadyState finish_state(const Grid& grid, double chi, const BoundaryValues& vstar,
                         double alpha, Field v, int iterations, SolveMethod method) {
    SteadyState st;
    st.alpha = alpha;
    st.v = std::move(v);
    st.u = Field(grid);
    for (int i = 0; i < grid.num_nodes; ++i)
        st.u[i] = alpha * std::pow(st.v[i], chi);
    st.achieved_mass = integrate(st.u);
    if (alpha > 0.0) {
        const auto [fi, fb] = flux_residual(st.u, st.v, chi);
        st.flux_interior_norm = fi;
        st.flux_boundary_norm = fb;
    }
    SemilinearProblem p;
    p.grid = &grid;
    p.alpha = alpha;
    p.chi = chi;
    p.vstar = vstar;
    st.nonlinear_residual = nonlinear_residual_norm(p, st.v);
    st.nonlinear_iterations = iterations;
    st.method = method;
    return st;
}

} // namespace

SteadyState compute_steady_state(const Grid& grid, double chi, const BoundaryValues& vstar,
                                 double target_mass, const MassParams& mass_params,
                                 const SolverParams& solver_params) {
    if (!(target_mass > 0.0))
        throw InvalidSpecError("compute_steady_state requires a positive target mass");
    SemilinearProblem tpl;
    tpl.grid = &grid;
    tpl.alpha = 0.0;
    tpl.chi = chi;
    tpl.vstar = vstar;
    InversionResult inv = invert_mass(target_mass, tpl, mass_params, solver_params);
    SteadyState st = finish_state(grid, chi, vstar, inv.alpha, std::move(inv.v), 0,
                                  SolveMethod::hybrid);
    st.mass_evaluations = inv.evaluations;
    return st;
}

SteadyState compute_steady_state_for_alpha(const Grid& grid, double chi,
                                           const BoundaryValues& vstar, double alpha,
                                           const SolverParams& solver_params) {
    SemilinearProblem p;
    p.grid = &grid;
    p.alpha = alpha;
    p.chi = chi;
    p.vstar = vstar;
    SolveReport rep = (alpha == 0.0) ? picard_solve(p, solver_params)
                                     : hybrid_solve(p, solver_params);
    return finish_state(grid, chi, vstar, alpha, std::move(rep.solution), rep.iterations,
                        rep.method);
}

std::pair<double, double> flux_residual(const Field& u, const Field& v, double chi) {
    const Grid& g = *u.grid;
    if (!(v.min() > 0.0))
        throw InvalidSpecError("flux_residual requires a positive signal field");

    Field logv(g);
    for (int i = 0; i < g.num_nodes; ++i) logv[i] = std::log(v[i]);

    // Interior norm: conservative divergence over faces, arithmetic-mean face
    // density. (Composing the nodal gradient twice loses an order at nodes
    // adjacent to the boundary, where the stencil switches one-sided.)
    const detail::FaceGeometry faces = detail::build_faces(g);
    Field div(g, 0.0);
    for (size_t f = 0; f < faces.coef.size(); ++f) {
        const int a = faces.na[f];
        const int b = faces.nb[f];
        const double u_face = 0.5 * (u[a] + u[b]);
        const double flux = faces.coef[f] * ((u[b] - u[a]) - chi * u_face * (logv[b] - logv[a]));
        div[a] += flux;
        div[b] -= flux;
    }
    double interior_norm = 0.0;
    for (int i = 0; i < g.num_nodes; ++i)
        if (!g.is_boundary(i))
            interior_norm =
                std::max(interior_norm, std::abs(div[i] / faces.cell[static_cast<size_t>(i)]));

    // Boundary norm: nodal flux against the outward normal, one-sided
    // second-order gradients.
    const std::vector<Field> du = gradient(u);
    const std::vector<Field> dlogv = gradient(logv);
    std::vector<Field> F;
    for (size_t a = 0; a < du.size(); ++a) {
        Field coord(g);
        for (int i = 0; i < g.num_nodes; ++i)
            coord[i] = du[a][i] - chi * u[i] * dlogv[a][i];
        F.push_back(std::move(coord));
    }

    double boundary_norm = 0.0;
    for (int node : g.boundary_nodes) {
        double fn = 0.0;
        switch (g.geometry.kind) {
        case GeometryKind::interval:
            fn = (node == 0) ? -F[0][node] : F[0][node];
            break;
        case GeometryKind::radial:
            fn = (node == 0) ? -F[0][node] : F[0][node]; // inner sphere normal points inward
            break;
        case GeometryKind::rectangle: {
            if (g.is_rectangle_corner(node)) continue; // normal undefined
            const int i = node % g.n;
            const int j = node / g.n;
            if (i == 0) fn = -F[0][node];
            else if (i == g.n - 1) fn = F[0][node];
            else if (j == 0) fn = -F[1][node];
            else fn = F[1][node];
            break;
        }
        }
        boundary_norm = std::max(boundary_norm, std::abs(fn));
    }
    return {interior_norm, boundary_norm};
}

} // namespace ccs
