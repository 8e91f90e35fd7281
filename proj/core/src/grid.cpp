#include "ccs/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ccs {

GeometrySpec GeometrySpec::make_interval(double a, double b) {
    GeometrySpec s;
    s.kind = GeometryKind::interval;
    s.a = a;
    s.b = b;
    s.validate();
    return s;
}

GeometrySpec GeometrySpec::make_rectangle(double lx, double ly) {
    GeometrySpec s;
    s.kind = GeometryKind::rectangle;
    s.lx = lx;
    s.ly = ly;
    s.validate();
    return s;
}

GeometrySpec GeometrySpec::make_radial(int dim, double outer_radius, double inner_radius) {
    GeometrySpec s;
    s.kind = GeometryKind::radial;
    s.dim = dim;
    s.outer_radius = outer_radius;
    s.inner_radius = inner_radius;
    s.validate();
    return s;
}

void GeometrySpec::validate() const {
    switch (kind) {
    case GeometryKind::interval:
        if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
            throw InvalidSpecError("interval requires finite a < b");
        break;
    case GeometryKind::rectangle:
        if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly))
            throw InvalidSpecError("rectangle requires positive side lengths");
        break;
    case GeometryKind::radial:
        if (dim < 1)
            throw InvalidSpecError("radial geometry requires dimension d >= 1");
        if (!(outer_radius > 0.0) || !std::isfinite(outer_radius))
            throw InvalidSpecError("radial geometry requires outer radius R > 0");
        if (inner_radius < 0.0 || inner_radius >= outer_radius)
            throw InvalidSpecError("radial geometry requires 0 <= r0 < R");
        break;
    }
}

double unit_sphere_area(int dim) {
    // |S^{d-1}| = 2 pi^{d/2} / Gamma(d/2)
    return 2.0 * std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim);
}

double GeometrySpec::measure() const {
    switch (kind) {
    case GeometryKind::interval:
        return b - a;
    case GeometryKind::rectangle:
        return lx * ly;
    case GeometryKind::radial:
        return unit_sphere_area(dim) / dim *
               (std::pow(outer_radius, dim) - std::pow(inner_radius, dim));
    }
    return 0.0;
}

bool Grid::is_rectangle_corner(int node) const {
    if (geometry.kind != GeometryKind::rectangle) return false;
    const int i = node % n;
    const int j = node / n;
    return (i == 0 || i == n - 1) && (j == 0 || j == n - 1);
}

namespace {

// compensated summation; the quadrature-sum invariant sits at 10 eps |Omega|
double kahan_sum(const std::vector<double>& a, const std::vector<double>* b) {
    double s = 0.0, c = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double term = b ? a[i] * (*b)[i] : a[i];
        const double y = term - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

} // namespace

double Grid::volume() const {
    return kahan_sum(weights, nullptr);
}

namespace {

std::vector<double> trapezoid_weights(int n, double h) {
    std::vector<double> w(static_cast<size_t>(n), h);
    w.front() = 0.5 * h;
    w.back() = 0.5 * h;
    return w;
}

} // namespace

Grid build_grid(const GeometrySpec& spec, int n) {
    spec.validate();
    if (n < 3) throw InvalidSpecError("build_grid requires n >= 3 nodes per axis");

    Grid g;
    g.geometry = spec;
    g.n = n;

    switch (spec.kind) {
    case GeometryKind::interval: {
        const double h = (spec.b - spec.a) / (n - 1);
        g.num_nodes = n;
        g.spacing = {h, 0.0};
        g.coord_x.resize(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) g.coord_x[static_cast<size_t>(i)] = spec.a + i * h;
        g.weights = trapezoid_weights(n, h);
        g.boundary_mask.assign(static_cast<size_t>(n), 0);
        g.boundary_mask.front() = 1;
        g.boundary_mask.back() = 1;
        g.boundary_nodes = {0, n - 1};
        break;
    }
    case GeometryKind::rectangle: {
        const double hx = spec.lx / (n - 1);
        const double hy = spec.ly / (n - 1);
        g.num_nodes = n * n;
        g.spacing = {hx, hy};
        g.coord_x.resize(static_cast<size_t>(g.num_nodes));
        g.coord_y.resize(static_cast<size_t>(g.num_nodes));
        g.weights.resize(static_cast<size_t>(g.num_nodes));
        g.boundary_mask.assign(static_cast<size_t>(g.num_nodes), 0);
        const auto wx = trapezoid_weights(n, hx);
        const auto wy = trapezoid_weights(n, hy);
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const int k = g.index(i, j);
                g.coord_x[static_cast<size_t>(k)] = i * hx;
                g.coord_y[static_cast<size_t>(k)] = j * hy;
                g.weights[static_cast<size_t>(k)] =
                    wx[static_cast<size_t>(i)] * wy[static_cast<size_t>(j)];
                if (i == 0 || i == n - 1 || j == 0 || j == n - 1) {
                    g.boundary_mask[static_cast<size_t>(k)] = 1;
                    g.boundary_nodes.push_back(k);
                }
            }
        }
        std::sort(g.boundary_nodes.begin(), g.boundary_nodes.end());
        break;
    }
    case GeometryKind::radial: {
        const double h = (spec.outer_radius - spec.inner_radius) / (n - 1);
        const double omega = unit_sphere_area(spec.dim);
        g.num_nodes = n;
        g.spacing = {h, 0.0};
        g.coord_x.resize(static_cast<size_t>(n));
        g.weights.resize(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            const double r = spec.inner_radius + i * h;
            g.coord_x[static_cast<size_t>(i)] = r;
            const double trap = (i == 0 || i == n - 1) ? 0.5 * h : h;
            g.weights[static_cast<size_t>(i)] =
                omega * std::pow(r, spec.dim - 1) * trap;
        }
        if (spec.inner_radius == 0.0) {
            // The r^{d-1}-weighted trapezoid weight vanishes at the origin for
            // d >= 2; give the origin its exact half-cell ball volume instead
            // so that the node carries measure (needed for conservative time
            // stepping). Adds O(h^d), within the O(h^2) volume invariant.
            g.weights[0] = omega * std::pow(0.5 * h, spec.dim) / spec.dim;
        }
        g.boundary_mask.assign(static_cast<size_t>(n), 0);
        g.boundary_mask.back() = 1;
        g.boundary_nodes = {n - 1};
        if (spec.inner_radius > 0.0) {
            g.boundary_mask.front() = 1;
            g.boundary_nodes = {0, n - 1};
        }
        break;
    }
    }
    return g;
}

double Field::min() const {
    double m = values.empty() ? 0.0 : values[0];
    for (double v : values) m = std::min(m, v);
    return m;
}

double Field::max() const {
    double m = values.empty() ? 0.0 : values[0];
    for (double v : values) m = std::max(m, v);
    return m;
}

bool Field::all_finite() const {
    for (double v : values)
        if (!std::isfinite(v)) return false;
    return true;
}

Field map_field(const Field& f, double (*fn)(double)) {
    Field out(*f.grid);
    for (size_t i = 0; i < f.values.size(); ++i) out.values[i] = fn(f.values[i]);
    return out;
}

double max_abs_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i)
        m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

BoundaryValues BoundaryValues::constant(const Grid& g, double value) {
    BoundaryValues bv;
    bv.grid = &g;
    bv.values.assign(g.boundary_nodes.size(), value);
    return bv;
}

BoundaryValues BoundaryValues::interval_ends(const Grid& g, double left, double right) {
    if (g.geometry.kind != GeometryKind::interval)
        throw InvalidSpecError("interval_ends requires an interval grid");
    BoundaryValues bv;
    bv.grid = &g;
    bv.values = {left, right};
    return bv;
}

BoundaryValues BoundaryValues::rectangle_sides(const Grid& g, double left, double right,
                                               double bottom, double top) {
    if (g.geometry.kind != GeometryKind::rectangle)
        throw InvalidSpecError("rectangle_sides requires a rectangle grid");
    BoundaryValues bv;
    bv.grid = &g;
    bv.values.resize(g.boundary_nodes.size());
    for (size_t k = 0; k < g.boundary_nodes.size(); ++k) {
        const int node = g.boundary_nodes[k];
        const int i = node % g.n;
        const int j = node / g.n;
        double sum = 0.0;
        int cnt = 0;
        if (i == 0) { sum += left; ++cnt; }
        if (i == g.n - 1) { sum += right; ++cnt; }
        if (j == 0) { sum += bottom; ++cnt; }
        if (j == g.n - 1) { sum += top; ++cnt; }
        bv.values[k] = sum / cnt; // corners: mean of the two adjacent edges
    }
    return bv;
}

double BoundaryValues::value_at_node(int node) const {
    const auto& bn = grid->boundary_nodes;
    const auto it = std::lower_bound(bn.begin(), bn.end(), node);
    if (it == bn.end() || *it != node)
        throw InvalidSpecError("value_at_node: node is not a boundary node");
    return values[static_cast<size_t>(it - bn.begin())];
}

double BoundaryValues::min() const {
    return *std::min_element(values.begin(), values.end());
}

double BoundaryValues::max() const {
    return *std::max_element(values.begin(), values.end());
}

void BoundaryValues::validate_finite() const {
    for (double v : values)
        if (!std::isfinite(v)) throw InvalidSpecError("boundary values must be finite");
}

double integrate(const Field& f) {
    if (!f.all_finite()) throw InvalidSpecError("integrate: field has non-finite values");
    return kahan_sum(f.grid->weights, &f.values);
}

namespace {

// d/dx along one line of nodes with stride `stride`, second order throughout.
// One-sided ends are written as differences so constants give exactly zero.
void line_derivative(const std::vector<double>& v, int first, int count, int stride,
                     double h, std::vector<double>& out) {
    auto at = [&](int k) { return v[static_cast<size_t>(first + k * stride)]; };
    auto put = [&](int k, double val) { out[static_cast<size_t>(first + k * stride)] = val; };
    put(0, (4.0 * (at(1) - at(0)) - (at(2) - at(0))) / (2.0 * h));
    for (int k = 1; k < count - 1; ++k) put(k, (at(k + 1) - at(k - 1)) / (2.0 * h));
    const int e = count - 1;
    put(e, (4.0 * (at(e) - at(e - 1)) - (at(e) - at(e - 2))) / (2.0 * h));
}

} // namespace

std::vector<Field> gradient(const Field& f) {
    const Grid& g = *f.grid;
    std::vector<Field> out;
    switch (g.geometry.kind) {
    case GeometryKind::interval:
    case GeometryKind::radial: {
        Field d(g);
        line_derivative(f.values, 0, g.n, 1, g.spacing[0], d.values);
        if (g.has_origin_node()) d.values[0] = 0.0; // symmetry: f(-h) = f(h)
        out.push_back(std::move(d));
        break;
    }
    case GeometryKind::rectangle: {
        Field dx(g), dy(g);
        for (int j = 0; j < g.n; ++j)
            line_derivative(f.values, g.index(0, j), g.n, 1, g.spacing[0], dx.values);
        for (int i = 0; i < g.n; ++i)
            line_derivative(f.values, g.index(i, 0), g.n, g.n, g.spacing[1], dy.values);
        out.push_back(std::move(dx));
        out.push_back(std::move(dy));
        break;
    }
    }
    return out;
}

} // namespace ccs
