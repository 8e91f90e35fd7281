// Internal: node-pair faces with transmissibility (face area / spacing) and
// FV cell volumes, shared by the elliptic assembly and the time stepper.
#pragma once

#include <cmath>
#include <vector>

#include "ccs/grid.hpp"

namespace ccs::detail {

struct FaceGeometry {
    std::vector<int> na, nb;    // face connects na[f] and nb[f]
    std::vector<double> coef;   // face area / spacing
    std::vector<double> cell;   // FV cell volume per node
};

inline FaceGeometry build_faces(const Grid& g) {
    FaceGeometry fg;
    const int n = g.n;
    switch (g.geometry.kind) {
    case GeometryKind::interval: {
        const double h = g.spacing[0];
        fg.cell.assign(static_cast<size_t>(n), h);
        fg.cell.front() = fg.cell.back() = 0.5 * h;
        for (int i = 0; i + 1 < n; ++i) {
            fg.na.push_back(i);
            fg.nb.push_back(i + 1);
            fg.coef.push_back(1.0 / h);
        }
        break;
    }
    case GeometryKind::radial: {
        const double h = g.spacing[0];
        const int d = g.geometry.dim;
        const double omega = unit_sphere_area(d);
        fg.cell.resize(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            const double r = g.coord_x[static_cast<size_t>(i)];
            const double rp = std::min(r + 0.5 * h, g.geometry.outer_radius);
            const double rm = std::max(r - 0.5 * h, g.geometry.inner_radius);
            fg.cell[static_cast<size_t>(i)] = omega * (std::pow(rp, d) - std::pow(rm, d)) / d;
        }
        for (int i = 0; i + 1 < n; ++i) {
            const double rf = g.coord_x[static_cast<size_t>(i)] + 0.5 * h;
            fg.na.push_back(i);
            fg.nb.push_back(i + 1);
            fg.coef.push_back(omega * std::pow(rf, d - 1) / h);
        }
        break;
    }
    case GeometryKind::rectangle: {
        const double hx = g.spacing[0];
        const double hy = g.spacing[1];
        fg.cell.resize(static_cast<size_t>(g.num_nodes));
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const double cx = (i == 0 || i == n - 1) ? 0.5 * hx : hx;
                const double cy = (j == 0 || j == n - 1) ? 0.5 * hy : hy;
                fg.cell[static_cast<size_t>(g.index(i, j))] = cx * cy;
            }
        // faces lying along an edge serve two half cells and carry half area
        for (int j = 0; j < n; ++j)
            for (int i = 0; i + 1 < n; ++i) {
                const double area = (j == 0 || j == n - 1) ? 0.5 * hy : hy;
                fg.na.push_back(g.index(i, j));
                fg.nb.push_back(g.index(i + 1, j));
                fg.coef.push_back(area / hx);
            }
        for (int j = 0; j + 1 < n; ++j)
            for (int i = 0; i < n; ++i) {
                const double area = (i == 0 || i == n - 1) ? 0.5 * hx : hx;
                fg.na.push_back(g.index(i, j));
                fg.nb.push_back(g.index(i, j + 1));
                fg.coef.push_back(area / hy);
            }
        break;
    }
    }
    return fg;
}

} // namespace ccs::detail
