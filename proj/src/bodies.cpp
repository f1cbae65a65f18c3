#include "subgauss/bodies.hpp"

#include "subgauss/lp.hpp"
#include "subgauss/polymesh.hpp"

#include <nlohmann/json.hpp>

#include <cmath>

namespace subgauss {

using nlohmann::json;

double unit_ball_volume(int n) {
    return std::exp(0.5 * n * std::log(M_PI) - std::lgamma(0.5 * n + 1.0));
}

double log_gamma(double x) { return std::lgamma(x); }

double ball_marginal_qnorm(int n, double q) {
    // 1-d marginal of uniform measure on the ball of radius 1 has density
    // c_n (1-t^2)^{(n-1)/2}; E|t|^q = c_n * B((q+1)/2, (n+1)/2).
    double log_cn = std::lgamma(0.5 * n + 1.0) - 0.5 * std::log(M_PI) - std::lgamma(0.5 * (n + 1));
    double log_beta =
        std::lgamma(0.5 * (q + 1)) + std::lgamma(0.5 * (n + 1)) - std::lgamma(0.5 * (q + n) + 1.0);
    double moment = std::exp(log_cn + log_beta);
    double rho = std::pow(unit_ball_volume(n), -1.0 / n);  // radius of the volume-one ball
    return rho * std::pow(moment, 1.0 / q);
}

double gaussian_qnorm(double q) {
    return std::sqrt(2.0) * std::exp((std::lgamma(0.5 * (q + 1)) - std::lgamma(0.5)) / q);
}

const char* body_kind_name(BodyKind k) {
    switch (k) {
        case BodyKind::Ball: return "ball";
        case BodyKind::Cube: return "cube";
        case BodyKind::Simplex: return "simplex";
        case BodyKind::CrossPolytope: return "cross_polytope";
        case BodyKind::LpBall: return "lp_ball";
        case BodyKind::HPolytope: return "h_polytope";
        case BodyKind::VPolytope: return "v_polytope";
        case BodyKind::LinearImage: return "linear_image";
    }
    return "?";
}

namespace {

void require_dim(int n) {
    if (n < 1) throw InvalidInput("body dim must be >= 1");
}

Matrix orthonormal_complement_of_ones(int m) {
    // columns of Q spanning {x in R^m : sum x = 0}, deterministic
    Vector ones = Vector::Constant(m, 1.0 / std::sqrt((double)m));
    Eigen::HouseholderQR<Matrix> qr(ones);
    Matrix Q = qr.householderQ();
    return Q.rightCols(m - 1);
}

// H-representation of a full-dimensional simplex given its n+1 vertices.
void simplex_hrep(const Matrix& verts, Matrix& A, Vector& b) {
    const int n = (int)verts.cols();
    A.resize(n + 1, n);
    b.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        // hyperplane through all vertices except i: solve [v_j, -1].(a,c)=0
        Matrix M(n, n + 1);
        int r = 0;
        for (int j = 0; j <= n; ++j) {
            if (j == i) continue;
            M.row(r).head(n) = verts.row(j);
            M(r, n) = -1.0;
            ++r;
        }
        Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullV);
        Vector null = svd.matrixV().col(n);
        Vector a = null.head(n);
        double c = null(n);
        if (a.dot(verts.row(i).transpose()) > c) {
            a = -a;
            c = -c;
        }
        double nrm = a.norm();
        if (nrm < 1e-13) throw NumericError("simplex facets degenerate");
        A.row(i) = a.transpose() / nrm;
        b(i) = c / nrm;
    }
}

}  // namespace

ConvexBody ConvexBody::ball(int n, double radius) {
    require_dim(n);
    if (!(radius > 0)) throw InvalidInput("ball: radius must be > 0");
    ConvexBody k;
    k.kind_ = BodyKind::Ball;
    k.dim_ = n;
    k.param_ = radius;
    return k;
}

ConvexBody ConvexBody::cube(int n, double side) {
    require_dim(n);
    if (!(side > 0)) throw InvalidInput("cube: side must be > 0");
    ConvexBody k;
    k.kind_ = BodyKind::Cube;
    k.dim_ = n;
    k.param_ = side;
    return k;
}

ConvexBody ConvexBody::simplex(int n, const std::string& variant) {
    require_dim(n);
    ConvexBody k;
    k.kind_ = BodyKind::Simplex;
    k.dim_ = n;
    if (variant == "standard") {
        k.regular_ = false;
        Matrix V = Matrix::Zero(n + 1, n);
        for (int i = 0; i < n; ++i) V(i + 1, i) = 1.0;
        Vector c = V.colwise().mean().transpose();
        V.rowwise() -= c.transpose();
        k.verts_ = V;
    } else if (variant == "regular") {
        k.regular_ = true;
        Matrix B = orthonormal_complement_of_ones(n + 1);  // (n+1) x n
        Matrix V = B;                                      // rows are the vertices, edge sqrt(2)
        Matrix E(n, n);
        for (int i = 0; i < n; ++i) E.col(i) = (V.row(i + 1) - V.row(0)).transpose();
        double fact = 1.0;
        for (int i = 2; i <= n; ++i) fact *= i;
        double vol = std::abs(E.determinant()) / fact;
        V *= std::pow(vol, -1.0 / n);  // normalize to volume one
        k.verts_ = V;
    } else {
        throw InvalidInput("simplex: variant must be \"regular\" or \"standard\"");
    }
    return k;
}

ConvexBody ConvexBody::cross_polytope(int n) {
    require_dim(n);
    ConvexBody k;
    k.kind_ = BodyKind::CrossPolytope;
    k.dim_ = n;
    return k;
}

ConvexBody ConvexBody::lp_ball(int n, double p) {
    require_dim(n);
    if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidInput("lp_ball: p must be in [1, inf)");
    ConvexBody k;
    k.kind_ = BodyKind::LpBall;
    k.dim_ = n;
    k.param_ = p;
    return k;
}

ConvexBody ConvexBody::h_polytope(Matrix A, Vector b) {
    if (A.rows() != b.size()) throw InvalidInput("h_polytope: A rows must match b size");
    if (A.rows() < (Eigen::Index)A.cols() + 1) {
        throw InvalidInput("h_polytope: too few halfspaces to bound a body");
    }
    ConvexBody k;
    k.kind_ = BodyKind::HPolytope;
    k.dim_ = (int)A.cols();
    k.A_ = std::move(A);
    k.b_ = std::move(b);
    ChebyshevResult cc = chebyshev_center(k.A_, k.b_);
    if (!cc.feasible || cc.radius <= 1e-12) {
        throw InvalidInput("h_polytope: no strictly feasible point (empty interior)");
    }
    return k;
}

ConvexBody ConvexBody::v_polytope(Matrix vertices) {
    const int n = (int)vertices.cols();
    if (vertices.rows() < n + 1) throw InvalidInput("v_polytope: need at least dim+1 vertices");
    // affinely spanning check
    Matrix E(vertices.rows() - 1, n);
    for (int i = 1; i < vertices.rows(); ++i) E.row(i - 1) = vertices.row(i) - vertices.row(0);
    Eigen::ColPivHouseholderQR<Matrix> qr(E);
    qr.setThreshold(1e-10);
    if (qr.rank() < n) throw InvalidInput("v_polytope: vertices are not affinely spanning");
    ConvexBody k;
    k.kind_ = BodyKind::VPolytope;
    k.dim_ = n;
    k.verts_ = std::move(vertices);
    return k;
}

ConvexBody ConvexBody::linear_image(ConvexBody base, Matrix T, Vector shift) {
    const int n = base.dim();
    if (T.rows() != n || T.cols() != n) throw InvalidInput("linear_image: T must be n x n");
    if (shift.size() != n) throw InvalidInput("linear_image: shift must be n-dim");
    Eigen::FullPivLU<Matrix> lu(T);
    if (!lu.isInvertible() || std::abs(lu.determinant()) < 1e-12) {
        throw InvalidInput("linear_image: T is singular");
    }
    ConvexBody k;
    k.kind_ = BodyKind::LinearImage;
    k.dim_ = n;
    k.base_ = std::make_shared<ConvexBody>(std::move(base));
    k.Tinv_ = lu.inverse();
    k.absdet_ = std::abs(lu.determinant());
    k.T_ = std::move(T);
    k.shift_ = std::move(shift);
    return k;
}

ConvexBody ConvexBody::linear_image(ConvexBody base, Matrix T) {
    Vector zero = Vector::Zero(T.rows());
    return linear_image(std::move(base), std::move(T), std::move(zero));
}

SubspaceBasis SubspaceBasis::from(const Matrix& raw, bool codim) {
    if (raw.cols() < 1 || raw.rows() < raw.cols()) {
        throw InvalidInput("SubspaceBasis: need n x k with k <= n");
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(raw);
    qr.setThreshold(1e-12);
    if (qr.rank() < raw.cols()) throw InvalidInput("SubspaceBasis: columns not independent");
    Matrix Q = qr.householderQ() * Matrix::Identity(raw.rows(), raw.cols());
    SubspaceBasis b;
    b.columns = Q;
    b.codim = codim;
    Matrix gram = b.columns.transpose() * b.columns;
    if ((gram - Matrix::Identity(raw.cols(), raw.cols())).cwiseAbs().maxCoeff() > 1e-12) {
        throw NumericError("SubspaceBasis: orthonormalization failed tolerance 1e-12");
    }
    return b;
}

SubspaceBasis SubspaceBasis::span_of(const Vector& v) {
    if (v.norm() == 0) throw InvalidInput("SubspaceBasis: zero vector");
    Matrix m(v.size(), 1);
    m.col(0) = v;
    return from(m);
}

SubspaceBasis SubspaceBasis::orthogonal_complement() const {
    const int n = ambient_dim();
    const int k = subspace_dim();
    Eigen::HouseholderQR<Matrix> qr(columns);
    Matrix Q = qr.householderQ();
    SubspaceBasis out;
    out.columns = Q.rightCols(n - k);
    out.codim = !codim;
    return out;
}

double support(const ConvexBody& body, const Vector& x) {
    if (x.size() != body.dim()) throw InvalidInput("support: dimension mismatch");
    if (!x.allFinite()) throw InvalidInput("support: x must be finite");
    switch (body.kind()) {
        case BodyKind::Ball:
            return body.radius() * x.norm();
        case BodyKind::Cube:
            return 0.5 * body.side() * x.lpNorm<1>();
        case BodyKind::Simplex:
        case BodyKind::VPolytope:
            return (body.vertices() * x).maxCoeff();
        case BodyKind::CrossPolytope:
            return x.lpNorm<Eigen::Infinity>();
        case BodyKind::LpBall: {
            double p = body.lp_exponent();
            if (p == 1.0) return x.lpNorm<Eigen::Infinity>();
            double q = p / (p - 1.0);
            double s = 0.0;
            for (int i = 0; i < x.size(); ++i) s += std::pow(std::abs(x(i)), q);
            return std::pow(s, 1.0 / q);
        }
        case BodyKind::HPolytope: {
            LpResult r = lp_maximize(body.A(), body.b(), x);
            if (r.status == LpStatus::Unbounded) {
                throw NumericError("support: unbounded H-representation");
            }
            if (r.status != LpStatus::Optimal) {
                throw NumericError("support: infeasible H-representation");
            }
            return r.value;
        }
        case BodyKind::LinearImage:
            return support(body.base(), body.map().transpose() * x) + body.shift().dot(x);
    }
    throw InvalidInput("support: unknown kind");
}

bool membership(const ConvexBody& body, const Vector& y, double tol) {
    if (y.size() != body.dim()) throw InvalidInput("membership: dimension mismatch");
    switch (body.kind()) {
        case BodyKind::Ball:
            return y.norm() <= body.radius() + tol;
        case BodyKind::Cube:
            return y.lpNorm<Eigen::Infinity>() <= 0.5 * body.side() + tol;
        case BodyKind::Simplex: {
            const Matrix& V = body.vertices();
            const int n = body.dim();
            Matrix E(n, n);
            for (int i = 0; i < n; ++i) E.col(i) = (V.row(i + 1) - V.row(0)).transpose();
            Vector lam = E.partialPivLu().solve(y - V.row(0).transpose());
            return lam.minCoeff() >= -tol && lam.sum() <= 1.0 + tol;
        }
        case BodyKind::CrossPolytope:
            return y.lpNorm<1>() <= 1.0 + tol;
        case BodyKind::LpBall: {
            double p = body.lp_exponent();
            double s = 0.0;
            for (int i = 0; i < y.size(); ++i) s += std::pow(std::abs(y(i)), p);
            return std::pow(s, 1.0 / p) <= 1.0 + tol;
        }
        case BodyKind::HPolytope: {
            for (int i = 0; i < body.A().rows(); ++i) {
                double nrm = body.A().row(i).norm();
                if (body.A().row(i).dot(y) - body.b()(i) > tol * std::max(1.0, nrm)) return false;
            }
            return true;
        }
        case BodyKind::VPolytope:
            return vpolytope_membership_lp(body.vertices(), y, tol);
        case BodyKind::LinearImage:
            return membership(body.base(), body.map_inverse() * (y - body.shift()), tol);
    }
    throw InvalidInput("membership: unknown kind");
}

namespace {

double gauge_hrep(const Matrix& A, const Vector& b, const Vector& y) {
    double g = 0.0;
    for (int i = 0; i < A.rows(); ++i) {
        if (b(i) <= 1e-13 * std::max(1.0, A.row(i).norm())) {
            throw NumericError("gauge: 0 is not interior to the body");
        }
        g = std::max(g, A.row(i).dot(y) / b(i));
    }
    return std::max(0.0, g);
}

double gauge_bisect(const ConvexBody& body, const Vector& y) {
    if (!membership(body, Vector::Zero(body.dim()), 0.0)) {
        throw NumericError("gauge: 0 is not interior to the body");
    }
    double nrm = y.norm();
    if (nrm == 0) return 0.0;
    double hi = 1.0;
    int guard = 0;
    while (!membership(body, y / hi, 0.0)) {
        hi *= 2.0;
        if (++guard > 2000) throw NumericError("gauge: bracketing failed (0 interior?)");
    }
    double lo = hi;
    guard = 0;
    while (membership(body, y / lo, 0.0)) {
        lo *= 0.5;
        if (lo < 1e-300) return 0.0;
        if (++guard > 2000) break;
    }
    while (hi - lo > 1e-12 * hi) {
        double mid = 0.5 * (hi + lo);
        if (membership(body, y / mid, 0.0)) hi = mid;
        else lo = mid;
    }
    return hi;
}

}  // namespace

double gauge(const ConvexBody& body, const Vector& y) {
    if (y.size() != body.dim()) throw InvalidInput("gauge: dimension mismatch");
    switch (body.kind()) {
        case BodyKind::Ball:
            return y.norm() / body.radius();
        case BodyKind::Cube:
            return 2.0 * y.lpNorm<Eigen::Infinity>() / body.side();
        case BodyKind::CrossPolytope:
            return y.lpNorm<1>();
        case BodyKind::LpBall: {
            double p = body.lp_exponent();
            double s = 0.0;
            for (int i = 0; i < y.size(); ++i) s += std::pow(std::abs(y(i)), p);
            return std::pow(s, 1.0 / p);
        }
        case BodyKind::Simplex: {
            Matrix A;
            Vector b;
            simplex_hrep(body.vertices(), A, b);
            return gauge_hrep(A, b, y);
        }
        case BodyKind::HPolytope:
            return gauge_hrep(body.A(), body.b(), y);
        case BodyKind::VPolytope:
            return vpolytope_gauge_lp(body.vertices(), y);
        case BodyKind::LinearImage: {
            if (body.shift().norm() < 1e-14) {
                return gauge(body.base(), body.map_inverse() * y);
            }
            return gauge_bisect(body, y);
        }
    }
    throw InvalidInput("gauge: unknown kind");
}

bool has_hrep(const ConvexBody& body) {
    switch (body.kind()) {
        case BodyKind::Cube:
        case BodyKind::Simplex:
        case BodyKind::CrossPolytope:
        case BodyKind::HPolytope:
            return true;
        case BodyKind::LinearImage:
            return has_hrep(body.base());
        default:
            return false;
    }
}

ConvexBody to_hpolytope(const ConvexBody& body) {
    const int n = body.dim();
    switch (body.kind()) {
        case BodyKind::Cube: {
            Matrix A(2 * n, n);
            A.topRows(n).setIdentity();
            A.bottomRows(n) = -Matrix::Identity(n, n);
            Vector b = Vector::Constant(2 * n, 0.5 * body.side());
            return ConvexBody::h_polytope(std::move(A), std::move(b));
        }
        case BodyKind::Simplex: {
            Matrix A;
            Vector b;
            simplex_hrep(body.vertices(), A, b);
            return ConvexBody::h_polytope(std::move(A), std::move(b));
        }
        case BodyKind::CrossPolytope: {
            if (n > 16) throw InvalidInput("to_hpolytope: cross-polytope H-rep only for n <= 16");
            const int rows = 1 << n;
            Matrix A(rows, n);
            for (int mask = 0; mask < rows; ++mask) {
                for (int j = 0; j < n; ++j) A(mask, j) = (mask >> j) & 1 ? 1.0 : -1.0;
            }
            return ConvexBody::h_polytope(std::move(A), Vector::Ones(rows));
        }
        case BodyKind::HPolytope:
            return body;
        case BodyKind::LinearImage: {
            ConvexBody base_h = to_hpolytope(body.base());
            // {Ty0 + s : A y0 <= b} = {y : (A T^-1) y <= b + A T^-1 s}
            Matrix A2 = base_h.A() * body.map_inverse();
            Vector b2 = base_h.b() + A2 * body.shift();
            return ConvexBody::h_polytope(std::move(A2), std::move(b2));
        }
        default:
            throw InvalidInput(std::string("to_hpolytope: unsupported kind ") +
                               body_kind_name(body.kind()));
    }
}

SliceResult slice_subspace(const ConvexBody& body, const SubspaceBasis& basis) {
    ConvexBody h = to_hpolytope(body);
    if (basis.ambient_dim() != h.dim()) throw InvalidInput("slice_subspace: basis dim mismatch");
    Matrix Ak = h.A() * basis.columns;
    ChebyshevResult cc = chebyshev_center(Ak, h.b());
    if (!cc.feasible) throw NumericError("slice_subspace: slice is empty");
    if (cc.radius <= 1e-10) throw NumericError("slice_subspace: slice has empty interior");
    SliceResult out{ConvexBody::h_polytope(std::move(Ak), h.b()), cc.radius < 1e-6};
    return out;
}

bool has_exact_volume(const ConvexBody& body) {
    switch (body.kind()) {
        case BodyKind::Ball:
        case BodyKind::Cube:
        case BodyKind::Simplex:
        case BodyKind::CrossPolytope:
        case BodyKind::LpBall:
            return true;
        case BodyKind::HPolytope:
            return body.dim() <= 6;
        case BodyKind::VPolytope:
            return body.dim() <= 3 || body.vertices().rows() == body.dim() + 1;
        case BodyKind::LinearImage:
            return has_exact_volume(body.base());
    }
    return false;
}

double volume_exact(const ConvexBody& body) {
    const int n = body.dim();
    switch (body.kind()) {
        case BodyKind::Ball:
            return std::pow(body.radius(), n) * unit_ball_volume(n);
        case BodyKind::Cube:
            return std::pow(body.side(), n);
        case BodyKind::Simplex:
        case BodyKind::VPolytope: {
            const Matrix& V = body.vertices();
            if (V.rows() == n + 1) {
                Matrix E(n, n);
                for (int i = 0; i < n; ++i) E.col(i) = (V.row(i + 1) - V.row(0)).transpose();
                double fact = 1.0;
                for (int i = 2; i <= n; ++i) fact *= i;
                return std::abs(E.determinant()) / fact;
            }
            if (n == 2) return hull_volume_2d(V);
            if (n == 3) return hull_volume_3d(V);
            throw InvalidInput("volume_exact: v_polytope volume needs n <= 3 or a simplex");
        }
        case BodyKind::CrossPolytope:
            return std::exp(n * std::log(2.0) - std::lgamma(n + 1.0));
        case BodyKind::LpBall: {
            double p = body.lp_exponent();
            return std::exp(n * (std::log(2.0) + std::lgamma(1.0 + 1.0 / p)) -
                            std::lgamma(1.0 + n / p));
        }
        case BodyKind::HPolytope:
            if (n > 6) throw InvalidInput("volume_exact: h_polytope volume only for n <= 6");
            return halfspace_volume(body.A(), body.b());
        case BodyKind::LinearImage:
            return body.map_abs_det() * volume_exact(body.base());
    }
    throw InvalidInput("volume_exact: unknown kind");
}

bool has_exact_covariance(const ConvexBody& body) {
    switch (body.kind()) {
        case BodyKind::Ball:
        case BodyKind::Cube:
        case BodyKind::Simplex:
        case BodyKind::CrossPolytope:
        case BodyKind::LpBall:
            return true;
        case BodyKind::HPolytope:
            return body.dim() <= 3;
        case BodyKind::VPolytope:
            return false;
        case BodyKind::LinearImage:
            return has_exact_covariance(body.base());
    }
    return false;
}

void body_mean_cov_exact(const ConvexBody& body, Vector& mean, Matrix& cov) {
    const int n = body.dim();
    mean = Vector::Zero(n);
    switch (body.kind()) {
        case BodyKind::Ball:
            cov = Matrix::Identity(n, n) * (body.radius() * body.radius() / (n + 2.0));
            return;
        case BodyKind::Cube:
            cov = Matrix::Identity(n, n) * (body.side() * body.side() / 12.0);
            return;
        case BodyKind::Simplex: {
            const Matrix& V = body.vertices();
            Vector s = V.colwise().sum().transpose();
            mean = s / (n + 1.0);
            Matrix second = (V.transpose() * V + s * s.transpose()) / ((n + 1.0) * (n + 2.0));
            cov = second - mean * mean.transpose();
            return;
        }
        case BodyKind::CrossPolytope:
            cov = Matrix::Identity(n, n) * (2.0 / ((n + 1.0) * (n + 2.0)));
            return;
        case BodyKind::LpBall: {
            double p = body.lp_exponent();
            // E x_1^2 = B(3/p, (n-1)/p + 1) / B(1/p, (n-1)/p + 1)
            double lb1 = std::lgamma(3.0 / p) + std::lgamma((n - 1.0) / p + 1.0) -
                         std::lgamma((n + 2.0) / p + 1.0);
            double lb0 = std::lgamma(1.0 / p) + std::lgamma((n - 1.0) / p + 1.0) -
                         std::lgamma(n / p + 1.0);
            cov = Matrix::Identity(n, n) * std::exp(lb1 - lb0);
            return;
        }
        case BodyKind::HPolytope: {
            if (n > 3) throw InvalidInput("body_mean_cov_exact: h_polytope needs n <= 3");
            SimplexMesh mesh = mesh_from_halfspaces(body.A(), body.b());
            double vol = mesh.volume();
            if (vol <= 0) throw NumericError("body_mean_cov_exact: degenerate polytope");
            mean = mesh.moment1() / vol;
            cov = mesh.moment2() / vol - mean * mean.transpose();
            return;
        }
        case BodyKind::LinearImage: {
            Vector m0;
            Matrix c0;
            body_mean_cov_exact(body.base(), m0, c0);
            mean = body.map() * m0 + body.shift();
            cov = body.map() * c0 * body.map().transpose();
            return;
        }
        default:
            throw InvalidInput("body_mean_cov_exact: unsupported kind");
    }
}

namespace {

Matrix json_to_matrix(const json& j, const std::string& path, int expect_cols = -1) {
    if (!j.is_array() || j.empty()) throw InvalidInput(path + ": expected non-empty array of rows");
    const int rows = (int)j.size();
    int cols = -1;
    Matrix m;
    for (int i = 0; i < rows; ++i) {
        const json& row = j[(size_t)i];
        if (!row.is_array()) {
            throw InvalidInput(path + "[" + std::to_string(i) + "]: expected array");
        }
        if (cols < 0) {
            cols = (int)row.size();
            if (expect_cols >= 0 && cols != expect_cols) {
                throw InvalidInput(path + "[0]: expected " + std::to_string(expect_cols) +
                                   " entries, got " + std::to_string(cols));
            }
            m.resize(rows, cols);
        }
        if ((int)row.size() != cols) {
            throw InvalidInput(path + "[" + std::to_string(i) + "]: expected " +
                               std::to_string(cols) + " entries, got " +
                               std::to_string(row.size()));
        }
        for (int k = 0; k < cols; ++k) {
            if (!row[(size_t)k].is_number()) {
                throw InvalidInput(path + "[" + std::to_string(i) + "][" + std::to_string(k) +
                                   "]: expected number");
            }
            m(i, k) = row[(size_t)k].get<double>();
        }
    }
    return m;
}

Vector json_to_vector(const json& j, const std::string& path, int expect = -1) {
    if (!j.is_array()) throw InvalidInput(path + ": expected array");
    if (expect >= 0 && (int)j.size() != expect) {
        throw InvalidInput(path + ": expected " + std::to_string(expect) + " entries, got " +
                           std::to_string(j.size()));
    }
    Vector v((Eigen::Index)j.size());
    for (size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) {
            throw InvalidInput(path + "[" + std::to_string(i) + "]: expected number");
        }
        v((Eigen::Index)i) = j[i].get<double>();
    }
    return v;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_to_json(const Vector& v) {
    json arr = json::array();
    for (int i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

}  // namespace

ConvexBody body_from_json(const json& spec, const std::string& path) {
    if (!spec.is_object()) throw InvalidInput(path + ": expected object");
    if (!spec.contains("kind") || !spec["kind"].is_string()) {
        throw InvalidInput(path + ".kind: expected string");
    }
    std::string kind = spec["kind"].get<std::string>();
    auto get_dim = [&]() -> int {
        if (!spec.contains("dim") || !spec["dim"].is_number_integer()) {
            throw InvalidInput(path + ".dim: expected positive integer");
        }
        int n = spec["dim"].get<int>();
        if (n < 1) throw InvalidInput(path + ".dim: expected positive integer");
        return n;
    };
    auto get_num = [&](const char* key, double dflt) -> double {
        if (!spec.contains(key)) return dflt;
        if (!spec[key].is_number()) throw InvalidInput(path + "." + key + ": expected number");
        return spec[key].get<double>();
    };
    if (kind == "ball") return ConvexBody::ball(get_dim(), get_num("radius", 1.0));
    if (kind == "cube") return ConvexBody::cube(get_dim(), get_num("side", 1.0));
    if (kind == "simplex") {
        std::string variant = "regular";
        if (spec.contains("variant")) {
            if (!spec["variant"].is_string()) {
                throw InvalidInput(path + ".variant: expected string");
            }
            variant = spec["variant"].get<std::string>();
        }
        return ConvexBody::simplex(get_dim(), variant);
    }
    if (kind == "cross_polytope") return ConvexBody::cross_polytope(get_dim());
    if (kind == "lp_ball") return ConvexBody::lp_ball(get_dim(), get_num("p", 2.0));
    if (kind == "h_polytope") {
        int n = get_dim();
        if (!spec.contains("A")) throw InvalidInput(path + ".A: required");
        if (!spec.contains("b")) throw InvalidInput(path + ".b: required");
        Matrix A = json_to_matrix(spec["A"], path + ".A", n);
        Vector b = json_to_vector(spec["b"], path + ".b", (int)A.rows());
        return ConvexBody::h_polytope(std::move(A), std::move(b));
    }
    if (kind == "v_polytope") {
        int n = get_dim();
        if (!spec.contains("vertices")) throw InvalidInput(path + ".vertices: required");
        return ConvexBody::v_polytope(json_to_matrix(spec["vertices"], path + ".vertices", n));
    }
    if (kind == "linear_image") {
        int n = get_dim();
        if (!spec.contains("base")) throw InvalidInput(path + ".base: required");
        ConvexBody base = body_from_json(spec["base"], path + ".base");
        if (base.dim() != n) throw InvalidInput(path + ".base.dim: must equal " + path + ".dim");
        if (!spec.contains("T")) throw InvalidInput(path + ".T: required");
        Matrix T = json_to_matrix(spec["T"], path + ".T", n);
        if ((int)T.rows() != n) throw InvalidInput(path + ".T: expected square n x n matrix");
        Vector shift = Vector::Zero(n);
        if (spec.contains("shift")) shift = json_to_vector(spec["shift"], path + ".shift", n);
        return ConvexBody::linear_image(std::move(base), std::move(T), std::move(shift));
    }
    throw InvalidInput(path + ".kind: unknown kind \"" + kind + "\"");
}

json body_to_json(const ConvexBody& body) {
    json j;
    j["kind"] = body_kind_name(body.kind());
    j["dim"] = body.dim();
    switch (body.kind()) {
        case BodyKind::Ball: j["radius"] = body.radius(); break;
        case BodyKind::Cube: j["side"] = body.side(); break;
        case BodyKind::Simplex: j["variant"] = body.simplex_regular() ? "regular" : "standard"; break;
        case BodyKind::LpBall: j["p"] = body.lp_exponent(); break;
        case BodyKind::CrossPolytope: break;
        case BodyKind::HPolytope:
            j["A"] = matrix_to_json(body.A());
            j["b"] = vector_to_json(body.b());
            break;
        case BodyKind::VPolytope: j["vertices"] = matrix_to_json(body.vertices()); break;
        case BodyKind::LinearImage:
            j["base"] = body_to_json(body.base());
            j["T"] = matrix_to_json(body.map());
            j["shift"] = vector_to_json(body.shift());
            break;
    }
    return j;
}

std::uint64_t body_hash(const ConvexBody& body) { return fnv1a64(body_to_json(body).dump()); }

}  // namespace subgauss
