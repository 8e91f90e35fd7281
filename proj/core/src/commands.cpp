#include "ccs/commands.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

#include "ccs/evolution.hpp"
#include "ccs/numeric_io.hpp"
#include "ccs/steady_state.hpp"

namespace fs = std::filesystem;

namespace ccs {

namespace {

std::ofstream open_output(const std::string& out_dir, const std::string& name,
                          std::ostream& info) {
    fs::create_directories(out_dir);
    const fs::path path = fs::path(out_dir) / name;
    std::ofstream f(path, std::ios::binary); // '\n' line ends on every platform
    if (!f) throw ConfigError("cannot open output file: " + path.string());
    info << "writing " << path.string() << "\n";
    return f;
}

const char* method_name(SolveMethod m) {
    switch (m) {
    case SolveMethod::picard: return "picard";
    case SolveMethod::newton: return "newton";
    case SolveMethod::hybrid: return "hybrid";
    }
    return "?";
}

void write_fields_csv(std::ofstream& f, const Grid& g, const Field& u, const Field& v) {
    switch (g.geometry.kind) {
    case GeometryKind::interval:
        f << "x,u,v\n";
        break;
    case GeometryKind::radial:
        f << "r,u,v\n";
        break;
    case GeometryKind::rectangle:
        f << "x,y,u,v\n";
        break;
    }
    for (int i = 0; i < g.num_nodes; ++i) {
        if (g.geometry.kind == GeometryKind::rectangle)
            f << format_double(g.coord_x[static_cast<size_t>(i)]) << ','
              << format_double(g.coord_y[static_cast<size_t>(i)]) << ',';
        else
            f << format_double(g.coord_x[static_cast<size_t>(i)]) << ',';
        f << format_double(u[i]) << ',' << format_double(v[i]) << '\n';
    }
}

const char* domain_name(GeometryKind k) {
    switch (k) {
    case GeometryKind::interval: return "interval";
    case GeometryKind::rectangle: return "rectangle";
    case GeometryKind::radial: return "radial";
    }
    return "?";
}

} // namespace

void run_solve(const RunConfig& config, std::ostream& info) {
    config.validate_solve();
    const Grid grid = build_grid(config.geometry, config.n);
    const BoundaryValues trace = config.boundary_trace(grid);

    SteadyState st;
    if (config.mass_target)
        st = compute_steady_state(grid, config.chi, trace, *config.mass_target,
                                  config.mass_params, config.solver);
    else
        st = compute_steady_state_for_alpha(grid, config.chi, trace, *config.alpha,
                                            config.solver);

    {
        std::ofstream f = open_output(config.out_dir, "fields.csv", info);
        write_fields_csv(f, grid, st.u, st.v);
    }
    {
        std::ofstream f = open_output(config.out_dir, "summary.txt", info);
        f << "domain: " << domain_name(grid.geometry.kind) << "\n";
        f << "n: " << grid.n << "\n";
        f << "chi: " << format_double(config.chi) << "\n";
        if (config.mass_target)
            f << "target_mass: " << format_double(*config.mass_target) << "\n";
        else
            f << "prescribed_alpha: " << format_double(*config.alpha) << "\n";
        f << "alpha: " << format_double(st.alpha) << "\n";
        f << "achieved_mass: " << format_double(st.achieved_mass) << "\n";
        if (config.mass_target)
            f << "mass_error: " << format_double(st.achieved_mass - *config.mass_target)
              << "\n";
        f << "nonlinear_residual: " << format_double(st.nonlinear_residual) << "\n";
        f << "flux_interior_norm: " << format_double(st.flux_interior_norm) << "\n";
        f << "flux_boundary_norm: " << format_double(st.flux_boundary_norm) << "\n";
        f << "mass_evaluations: " << st.mass_evaluations << "\n";
        f << "method: " << method_name(st.method) << "\n";
        f << "min_u: " << format_double(st.u.min()) << "\n";
        f << "min_v: " << format_double(st.v.min()) << "\n";
        f << "max_v: " << format_double(st.v.max()) << "\n";
    }
}

void run_sweep(const RunConfig& config, std::ostream& info) {
    config.validate_sweep();
    const Grid grid = build_grid(config.geometry, config.n);
    const BoundaryValues trace = config.boundary_trace(grid);

    SemilinearProblem tpl;
    tpl.grid = &grid;
    tpl.alpha = 0.0;
    tpl.chi = config.chi;
    tpl.vstar = trace;

    std::optional<SectorSpec> sector;
    if (config.geometry.kind == GeometryKind::radial && config.geometry.dim >= 2) {
        // largest shell sector that fits the (possibly annular) domain
        SectorSpec s;
        s.dim = config.geometry.dim;
        s.outer_radius = config.geometry.outer_radius;
        s.delta = config.geometry.outer_radius - config.geometry.inner_radius;
        sector = s;
    }

    const std::vector<SweepRow> rows = mass_sweep(tpl, config.alpha_list, config.solver, sector);

    std::ofstream f = open_output(config.out_dir, "sweep.csv", info);
    f << "alpha,m,m_prime,m_lower,sector_bound\n";
    for (const SweepRow& row : rows) {
        f << format_double(row.alpha) << ',';
        if (row.sample) {
            f << format_double(row.sample->m) << ',' << format_double(row.sample->m_prime)
              << ',' << format_double(row.sample->m_lower) << ',';
            if (row.sample->sector_bound) f << format_double(*row.sample->sector_bound);
        } else {
            const std::string marker = "failed:" + row.error_class;
            f << marker << ',' << marker << ',' << marker << ',';
        }
        f << '\n';
    }
}

void run_validate(const RunConfig& config, std::ostream& info) {
    config.validate_validate();
    const Grid grid = build_grid(config.geometry, config.n);
    const BoundaryValues trace = config.boundary_trace(grid);

    Field u_ref(grid), v_ref(grid);
    if (!config.fields_in.empty()) {
        const CsvTable table = read_csv(config.fields_in);
        const int cu = table.column("u");
        const int cv = table.column("v");
        if (cu < 0 || cv < 0)
            throw ConfigError("fields_in must have u and v columns: " + config.fields_in);
        if (static_cast<int>(table.columns[static_cast<size_t>(cu)].size()) != grid.num_nodes)
            throw ConfigError("fields_in row count does not match the configured grid");
        for (int i = 0; i < grid.num_nodes; ++i) {
            u_ref[i] = table.columns[static_cast<size_t>(cu)][static_cast<size_t>(i)];
            v_ref[i] = table.columns[static_cast<size_t>(cv)][static_cast<size_t>(i)];
        }
    } else {
        SteadyState st;
        if (config.mass_target)
            st = compute_steady_state(grid, config.chi, trace, *config.mass_target,
                                      config.mass_params, config.solver);
        else
            st = compute_steady_state_for_alpha(grid, config.chi, trace, *config.alpha,
                                                config.solver);
        u_ref = std::move(st.u);
        v_ref = std::move(st.v);
    }

    Field u0(grid), v0(grid);
    if (config.validate_init == "steady") {
        u0 = u_ref;
        v0 = v_ref;
    } else {
        const double m = integrate(u_ref);
        u0 = Field(grid, m / grid.volume());
        v0 = harmonic_extension(grid, trace);
    }

    EvolutionParams params;
    params.dt = config.dt;
    params.stall_tol = config.stall_tol;
    params.record_stride = config.record_stride;
    const EvolutionTrace trace_out =
        evolve_to_steady(EvolutionState::start(std::move(u0), std::move(v0)), config.chi,
                         trace, config.T, params, &u_ref, &v_ref);

    std::ofstream f = open_output(config.out_dir, "timeseries.csv", info);
    f << "t,dist_u,dist_v,mass_u\n";
    for (size_t k = 0; k < trace_out.t.size(); ++k)
        f << format_double(trace_out.t[k]) << ',' << format_double(trace_out.dist_u[k]) << ','
          << format_double(trace_out.dist_v[k]) << ',' << format_double(trace_out.mass_u[k])
          << '\n';
}

} // namespace ccs
