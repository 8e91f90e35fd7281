// Uniform grids for the supported geometries (interval, tensor rectangle,
// radial ball/annulus), nodal fields, trapezoid quadrature and second-order
// difference stencils.
#pragma once

#include <array>
#include <vector>

#include "ccs/errors.hpp"

namespace ccs {

enum class GeometryKind { interval, rectangle, radial };

struct GeometrySpec {
    GeometryKind kind = GeometryKind::interval;

    // interval (a, b)
    double a = 0.0;
    double b = 1.0;

    // rectangle side lengths, grid covers [0, lx] x [0, ly]
    double lx = 1.0;
    double ly = 1.0;

    // radial: ambient dimension, outer radius, inner radius (0 = full ball)
    int dim = 2;
    double outer_radius = 1.0;
    double inner_radius = 0.0;

    static GeometrySpec make_interval(double a, double b);
    static GeometrySpec make_rectangle(double lx, double ly);
    static GeometrySpec make_radial(int dim, double outer_radius, double inner_radius = 0.0);

    void validate() const; // throws InvalidSpecError
    double measure() const; // exact |Omega|
    int axes() const { return kind == GeometryKind::rectangle ? 2 : 1; }
};

// Surface area of the unit sphere S^{d-1} in R^d.
double unit_sphere_area(int dim);

struct Grid {
    GeometrySpec geometry;
    int n = 0;          // nodes per axis
    int num_nodes = 0;  // n (1D), n*n (rectangle)
    std::array<double, 2> spacing{0.0, 0.0};

    // node coordinates; coord_y is empty for one-axis geometries.
    // radial grids store the radius in coord_x.
    std::vector<double> coord_x;
    std::vector<double> coord_y;

    std::vector<double> weights; // quadrature weight per node
    std::vector<char> boundary_mask;
    std::vector<int> boundary_nodes; // ascending

    int index(int i, int j) const { return i + n * j; }
    bool is_boundary(int node) const { return boundary_mask[node] != 0; }
    bool is_rectangle_corner(int node) const;
    double radius(int node) const { return coord_x[node]; }

    // full ball grids have an interior symmetry node at r = 0
    bool has_origin_node() const {
        return geometry.kind == GeometryKind::radial && geometry.inner_radius == 0.0;
    }

    double volume() const; // sum of quadrature weights
};

// n >= 3 nodes per axis, uniform spacing, boundary tagging and quadrature
// weights per the geometry.
Grid build_grid(const GeometrySpec& spec, int n);

struct Field {
    const Grid* grid = nullptr;
    std::vector<double> values;

    Field() = default;
    explicit Field(const Grid& g, double fill = 0.0)
        : grid(&g), values(static_cast<size_t>(g.num_nodes), fill) {}

    double& operator[](int i) { return values[static_cast<size_t>(i)]; }
    double operator[](int i) const { return values[static_cast<size_t>(i)]; }
    int size() const { return static_cast<int>(values.size()); }

    double min() const;
    double max() const;
    bool all_finite() const;
};

// pointwise helpers
Field map_field(const Field& f, double (*fn)(double));
double max_abs_diff(const Field& a, const Field& b);

// Dirichlet data, stored in the order of grid.boundary_nodes.
struct BoundaryValues {
    const Grid* grid = nullptr;
    std::vector<double> values;

    static BoundaryValues constant(const Grid& g, double value);
    static BoundaryValues interval_ends(const Grid& g, double left, double right);
    // per-edge constants; corners take the mean of their two edges
    static BoundaryValues rectangle_sides(const Grid& g, double left, double right,
                                          double bottom, double top);

    double value_at_node(int node) const; // node must be a boundary node
    double min() const;
    double max() const;
    void validate_finite() const;
};

// Trapezoid quadrature: sum of weights * values. Rejects non-finite fields.
double integrate(const Field& f);

// Second-order gradient, one component per axis (radial grids: the radial
// derivative, zero at an origin symmetry node). Central differences at
// interior nodes, one-sided second-order at boundary nodes.
std::vector<Field> gradient(const Field& f);

} // namespace ccs
