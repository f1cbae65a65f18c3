#include "subgauss/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace subgauss {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kFeasTol = 1e-9;

// Full-tableau two-phase primal simplex for
//   maximize c.x  s.t.  A x = b, x >= 0.
// Dantzig pricing with a Bland fallback against cycling. Desk-scale sizes
// only (tableaus are dense).
struct StandardSimplex {
    int m, n;
    Matrix T;                // (m+1) x (n + m + 1): columns + artificials + rhs
    std::vector<int> basis;  // size m, column index of basic variable per row

    StandardSimplex(const Matrix& A, const Vector& b) : m((int)A.rows()), n((int)A.cols()) {
        T.setZero(m + 1, n + m + 1);
        T.block(0, 0, m, n) = A;
        T.block(0, n, m, m).setIdentity();
        T.col(n + m).head(m) = b;
        for (int i = 0; i < m; ++i) {
            if (T(i, n + m) < 0) T.row(i) = -T.row(i);
        }
        basis.resize(m);
        for (int i = 0; i < m; ++i) basis[i] = n + i;
    }

    void pivot(int row, int col) {
        T.row(row) /= T(row, col);
        for (int r = 0; r <= m; ++r) {
            if (r == row) continue;
            double f = T(r, col);
            if (f != 0.0) T.row(r) -= f * T.row(row);
        }
        basis[row] = col;
    }

    // Runs the simplex iterations on the current cost row (last row of T,
    // stored as reduced costs of a MINIMIZATION of that row's objective
    // written in the "z-row" convention: choose entering with cost < -tol).
    // Returns false on unbounded.
    bool iterate(int limit_cols) {
        long iter = 0;
        const long bland_after = 50L * (m + n + 1);
        for (;;) {
            ++iter;
            int col = -1;
            if (iter < bland_after) {
                double best = -kPivotTol;
                for (int j = 0; j < limit_cols; ++j) {
                    if (T(m, j) < best) {
                        best = T(m, j);
                        col = j;
                    }
                }
            } else {  // Bland
                for (int j = 0; j < limit_cols; ++j) {
                    if (T(m, j) < -kPivotTol) {
                        col = j;
                        break;
                    }
                }
            }
            if (col < 0) return true;  // optimal
            int row = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m; ++i) {
                double a = T(i, col);
                if (a > kPivotTol) {
                    double ratio = T(i, n + m) / a;
                    if (ratio < best_ratio - 1e-12 ||
                        (ratio < best_ratio + 1e-12 && (row < 0 || basis[i] < basis[row]))) {
                        best_ratio = ratio;
                        row = i;
                    }
                }
            }
            if (row < 0) return false;  // unbounded direction
            pivot(row, col);
        }
    }

    // Phase 1: drive artificials out. Returns false if infeasible.
    bool phase1() {
        T.row(m).setZero();
        for (int i = 0; i < m; ++i) T.row(m) -= T.row(i);  // cost = -sum(artificials)
        for (int j = n; j < n + m; ++j) T(m, j) = 0.0;
        if (!iterate(n)) return false;  // cannot be unbounded in exact arithmetic
        if (T(m, n + m) < -kFeasTol) return false;
        // Pivot out any artificial still basic (degenerate rows).
        for (int i = 0; i < m; ++i) {
            if (basis[i] >= n) {
                int col = -1;
                for (int j = 0; j < n; ++j) {
                    if (std::abs(T(i, j)) > 1e-8) {
                        col = j;
                        break;
                    }
                }
                if (col >= 0) pivot(i, col);
                // else: redundant row, harmless to leave
            }
        }
        return true;
    }

    LpResult maximize(const Vector& c) {
        LpResult res;
        if (!phase1()) {
            res.status = LpStatus::Infeasible;
            return res;
        }
        T.row(m).setZero();
        T.row(m).head(n) = -c.transpose();
        // Cancel reduced costs on basic columns (each basic column is a unit
        // vector after pivoting).
        for (int i = 0; i < m; ++i) {
            double f = T(m, basis[i]);
            if (f != 0.0) T.row(m) -= f * T.row(i);
        }
        if (!iterate(n)) {
            res.status = LpStatus::Unbounded;
            return res;
        }
        res.status = LpStatus::Optimal;
        res.x.setZero(n);
        for (int i = 0; i < m; ++i) {
            if (basis[i] < n) res.x(basis[i]) = T(i, n + m);
        }
        res.value = c.dot(res.x);
        return res;
    }
};

}  // namespace

LpResult lp_maximize(const Matrix& A, const Vector& b, const Vector& c) {
    const int m = (int)A.rows();
    const int n = (int)A.cols();
    if (b.size() != m || c.size() != n) throw InvalidInput("lp_maximize: shape mismatch");
    // y free: y = u - v; slacks s. Columns [u v s].
    Matrix As(m, 2 * n + m);
    As.block(0, 0, m, n) = A;
    As.block(0, n, m, n) = -A;
    As.block(0, 2 * n, m, m).setIdentity();
    Vector cs = Vector::Zero(2 * n + m);
    cs.head(n) = c;
    cs.segment(n, n) = -c;
    StandardSimplex solver(As, b);
    LpResult inner = solver.maximize(cs);
    LpResult out;
    out.status = inner.status;
    if (inner.status == LpStatus::Optimal) {
        out.x = inner.x.head(n) - inner.x.segment(n, n);
        out.value = inner.value;
    }
    return out;
}

ChebyshevResult chebyshev_center(const Matrix& A, const Vector& b) {
    const int m = (int)A.rows();
    const int n = (int)A.cols();
    // Variables (y, r): max r s.t. A y + r ||a_i|| <= b, 0 <= r <= 1e9.
    Matrix Ae(m + 1, n + 1);
    Vector be(m + 1);
    Ae.block(0, 0, m, n) = A;
    for (int i = 0; i < m; ++i) Ae(i, n) = A.row(i).norm();
    be.head(m) = b;
    Ae.row(m).setZero();
    Ae(m, n) = 1.0;
    be(m) = 1e9;
    Vector c = Vector::Zero(n + 1);
    c(n) = 1.0;
    LpResult r = lp_maximize(Ae, be, c);
    ChebyshevResult out;
    if (r.status != LpStatus::Optimal || r.x(n) < -kFeasTol) return out;
    out.feasible = true;
    out.radius = std::max(0.0, r.x(n));
    out.center = r.x.head(n);
    return out;
}

double vpolytope_gauge_lp(const Matrix& vertices, const Vector& y) {
    const int nv = (int)vertices.rows();
    const int n = (int)vertices.cols();
    if (y.size() != n) throw InvalidInput("vpolytope_gauge_lp: dimension mismatch");
    if (y.norm() == 0.0) return 0.0;
    // min 1.lambda s.t. V^T lambda = y, lambda >= 0.
    StandardSimplex solver(vertices.transpose(), y);
    LpResult r = solver.maximize(Vector::Constant(nv, -1.0));
    if (r.status != LpStatus::Optimal) {
        throw NumericError("vpolytope gauge: point not in cone of vertices (is 0 interior?)");
    }
    return -r.value;
}

bool vpolytope_membership_lp(const Matrix& vertices, const Vector& y, double tol) {
    const int nv = (int)vertices.rows();
    const int n = (int)vertices.cols();
    if (y.size() != n) throw InvalidInput("vpolytope_membership_lp: dimension mismatch");
    // Feasibility of {V^T lambda = y, sum lambda = 1, lambda >= 0} with a
    // tolerance: scale rows so the phase-1 residual is comparable to tol.
    Matrix A(n + 1, nv);
    A.topRows(n) = vertices.transpose();
    A.row(n).setOnes();
    Vector b(n + 1);
    b.head(n) = y;
    b(n) = 1.0;
    StandardSimplex solver(A, b);
    if (!solver.phase1()) return false;
    // phase1 succeeded within kFeasTol; re-check residual at the found point
    Vector lambda = Vector::Zero(nv);
    for (int i = 0; i < n + 1; ++i) {
        if (solver.basis[i] < nv) lambda(solver.basis[i]) = solver.T(i, nv + n + 1);
    }
    double resid = (vertices.transpose() * lambda - y).norm() + std::abs(lambda.sum() - 1.0);
    return resid <= tol * (1.0 + y.norm());
}

}  // namespace subgauss
