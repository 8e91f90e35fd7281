// Flat key = value run configuration ('#' comments, no nesting) and its
// validation. Keys:
//   domain, a, b, Lx, Ly, d, R, r0, n, chi,
//   vstar | vstar_left/vstar_right (interval) | vstar_left/right/bottom/top
//   (rectangle sides), mass | alpha, alpha_list, tol, residual_tol, mass_tol,
//   alpha_cap, dt, T, out_dir, and for `validate`: fields_in, validate_init
//   (constant | steady), stall_tol, record_stride.
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ccs/mass_map.hpp"

namespace ccs {

struct RunConfig {
    GeometrySpec geometry;
    int n = 0;
    double chi = 0.0;

    std::optional<double> vstar; // constant trace
    std::optional<double> vstar_left, vstar_right, vstar_bottom, vstar_top;

    std::optional<double> mass_target;
    std::optional<double> alpha;
    std::vector<double> alpha_list;

    SolverParams solver;
    MassParams mass_params;

    double dt = 0.0; // 0: default step policy
    double T = 1.0;
    std::string out_dir = ".";

    std::string fields_in;               // validate: steady-state input file
    std::string validate_init = "constant"; // or "steady"
    double stall_tol = 0.0;
    int record_stride = 1;

    // exactly one of mass/alpha must be set for `solve`
    void validate_solve() const;
    void validate_sweep() const;
    void validate_validate() const;

    BoundaryValues boundary_trace(const Grid& grid) const;
};

RunConfig parse_config_text(std::string_view text);
RunConfig parse_config_file(const std::string& path);

// "0,1,10" and/or "logspace(1e-2,1e6,25)" segments, comma separated
std::vector<double> parse_alpha_list(const std::string& text);

} // namespace ccs
