#pragma once

#include "subgauss/common.hpp"

namespace subgauss {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double value = 0.0;
    Vector x;
};

/// maximize c.y subject to A y <= b, y free.
LpResult lp_maximize(const Matrix& A, const Vector& b, const Vector& c);

struct ChebyshevResult {
    bool feasible = false;
    double radius = 0.0;  // inradius; 0 means boundary-feasible, no interior
    Vector center;
};

/// Largest inscribed ball of {y : Ay <= b}. Radius capped at 1e9 for
/// unbounded feasible sets.
ChebyshevResult chebyshev_center(const Matrix& A, const Vector& b);

/// Minkowski gauge of conv(rows of V) at y: min 1.lambda with
/// V^T lambda = y, lambda >= 0. Requires 0 in the interior of the hull.
double vpolytope_gauge_lp(const Matrix& vertices, const Vector& y);

/// y in conv(rows of V), to feasibility tolerance tol.
bool vpolytope_membership_lp(const Matrix& vertices, const Vector& y, double tol = 1e-9);

}  // namespace subgauss
