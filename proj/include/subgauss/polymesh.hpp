#pragma once

#include "subgauss/common.hpp"

#include <vector>

namespace subgauss {

/// Convex polygon, CCW vertex order.
using Polygon2 = std::vector<Eigen::Vector2d>;

/// Intersect {g_i . x <= h_i} with the square [-bound, bound]^2.
/// Empty result means empty (or lower-dimensional) region.
Polygon2 clip_halfplanes(const Matrix& G, const Vector& h, double bound);

double polygon_area(const Polygon2& poly);

/// Simplex decomposition of a convex polytope in dimension 1..3, carrying
/// exact integrals of low-degree polynomials. Simplices are stored as
/// (dim+1) x dim vertex matrices.
struct SimplexMesh {
    int dim = 0;
    std::vector<Matrix> simplices;

    double volume() const;
    Vector moment1() const;  // integral of x dV
    Matrix moment2() const;  // integral of x x^T dV

    /// integral of (a.x + a0)^q dV; the linear form must be >= 0 on the mesh
    /// (checked to a small tolerance).
    double linear_power_integral(const Vector& a, double a0, int q) const;
};

/// Mesh {A y <= b} in dim 1..3. bound_hint > 0 skips the LP-based bounding
/// step (pass it when an enclosing radius is known, e.g. many-facet bodies).
SimplexMesh mesh_from_halfspaces(const Matrix& A, const Vector& b, double bound_hint = 0.0);

/// Volume of {A y <= b}, 1 <= n <= 6. Recursive facet-cone formula above
/// n = 3, meshing below. Throws on unbounded input.
double halfspace_volume(const Matrix& A, const Vector& b, double bound_hint = 0.0);

/// Convex hull volume; points are matrix rows. Degenerate input gives 0.
double hull_volume_2d(const Matrix& pts);
double hull_volume_3d(const Matrix& pts);

/// Euclidean distance from x to conv(rows of V), Wolfe min-norm-point.
double distance_to_hull(const Matrix& V, const Vector& x);

}  // namespace subgauss
