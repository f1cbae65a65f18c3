#include "subgauss/polymesh.hpp"

#include "subgauss/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace subgauss {

namespace {

constexpr double kEps = 1e-12;

Polygon2 clip_one(const Polygon2& poly, const Eigen::Vector2d& g, double h, double scale) {
    Polygon2 out;
    const double tol = kEps * scale * std::max(1.0, g.norm());
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        const Eigen::Vector2d& p = poly[i];
        const Eigen::Vector2d& q = poly[(i + 1) % n];
        double dp = g.dot(p) - h;
        double dq = g.dot(q) - h;
        bool pin = dp <= tol;
        bool qin = dq <= tol;
        if (pin) out.push_back(p);
        if (pin != qin) {
            double t = dp / (dp - dq);
            out.push_back(p + t * (q - p));
        }
    }
    return out;
}

// Complete homogeneous symmetric polynomial h_q(c_0..c_d).
double complete_homogeneous(const std::vector<double>& c, int q) {
    std::vector<double> H(static_cast<size_t>(q) + 1, 0.0);
    H[0] = 1.0;
    for (double ci : c) {
        for (int j = 1; j <= q; ++j) H[static_cast<size_t>(j)] += ci * H[static_cast<size_t>(j) - 1];
    }
    return H[static_cast<size_t>(q)];
}

double simplex_volume(const Matrix& verts) {
    const int d = (int)verts.cols();
    Matrix E(d, d);
    for (int i = 0; i < d; ++i) E.col(i) = (verts.row(i + 1) - verts.row(0)).transpose();
    double det = E.determinant();
    double fact = 1.0;
    for (int i = 2; i <= d; ++i) fact *= i;
    return std::abs(det) / fact;
}

// Orthonormal basis of the complement of unit vector a (n x (n-1)).
Matrix complement_basis(const Vector& a) {
    const int n = (int)a.size();
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix Q = qr.householderQ();
    return Q.rightCols(n - 1);
}

struct NormalizedRows {
    Matrix A;
    Vector b;
};

// Normalize row norms to 1, drop zero rows and near-duplicate rows
// (duplicates would double-count facets in cone decompositions).
NormalizedRows normalize_rows(const Matrix& A, const Vector& b) {
    NormalizedRows out;
    std::vector<int> keep;
    Matrix An(A.rows(), A.cols());
    Vector bn(b.size());
    for (int i = 0; i < A.rows(); ++i) {
        double nrm = A.row(i).norm();
        if (nrm < 1e-14) {
            if (b(i) < -1e-12) {
                // 0 <= b with b < 0: empty body
                out.A.resize(1, A.cols());
                out.A.setZero();
                out.b.resize(1);
                out.b(0) = -1.0;
                return out;
            }
            continue;
        }
        An.row(i) = A.row(i) / nrm;
        bn(i) = b(i) / nrm;
        bool dup = false;
        for (int j : keep) {
            if ((An.row(i) - An.row(j)).norm() < 1e-9 && std::abs(bn(i) - bn(j)) < 1e-9) {
                dup = true;
                break;
            }
            // keep the tighter of two parallel constraints
            if ((An.row(i) - An.row(j)).norm() < 1e-9 && bn(i) < bn(j)) {
                bn(j) = bn(i);
                dup = true;
                break;
            }
            if ((An.row(i) - An.row(j)).norm() < 1e-9) {
                dup = true;
                break;
            }
        }
        if (!dup) keep.push_back(i);
    }
    out.A.resize((Eigen::Index)keep.size(), A.cols());
    out.b.resize((Eigen::Index)keep.size());
    for (size_t k = 0; k < keep.size(); ++k) {
        out.A.row((Eigen::Index)k) = An.row(keep[k]);
        out.b((Eigen::Index)k) = bn(keep[k]);
    }
    return out;
}

double bounding_radius_lp(const Matrix& A, const Vector& b) {
    const int n = (int)A.cols();
    double r = 0.0;
    for (int i = 0; i < n; ++i) {
        for (double s : {1.0, -1.0}) {
            Vector c = Vector::Zero(n);
            c(i) = s;
            LpResult lr = lp_maximize(A, b, c);
            if (lr.status == LpStatus::Unbounded) {
                throw NumericError("halfspace body is unbounded");
            }
            if (lr.status == LpStatus::Optimal) r = std::max(r, std::abs(lr.value));
        }
    }
    return r;
}

}  // namespace

Polygon2 clip_halfplanes(const Matrix& G, const Vector& h, double bound) {
    Polygon2 poly = {{-bound, -bound}, {bound, -bound}, {bound, bound}, {-bound, bound}};
    for (int i = 0; i < G.rows(); ++i) {
        Eigen::Vector2d g = G.row(i).transpose();
        if (g.norm() < 1e-14) {
            if (h(i) < -1e-12) return {};
            continue;
        }
        poly = clip_one(poly, g, h(i), bound);
        if (poly.size() < 3) return {};
    }
    return poly;
}

double polygon_area(const Polygon2& poly) {
    if (poly.size() < 3) return 0.0;
    double a = 0.0;
    for (size_t i = 0; i < poly.size(); ++i) {
        const auto& p = poly[i];
        const auto& q = poly[(i + 1) % poly.size()];
        a += p.x() * q.y() - q.x() * p.y();
    }
    return std::abs(a) * 0.5;
}

double SimplexMesh::volume() const {
    double v = 0.0;
    for (const auto& s : simplices) v += simplex_volume(s);
    return v;
}

Vector SimplexMesh::moment1() const {
    Vector m = Vector::Zero(dim);
    for (const auto& s : simplices) {
        double v = simplex_volume(s);
        m += v * s.colwise().mean().transpose();
    }
    return m;
}

Matrix SimplexMesh::moment2() const {
    // integral over a simplex: vol/((d+1)(d+2)) * (sum v_i v_i^T + s s^T)
    Matrix m = Matrix::Zero(dim, dim);
    const double denom = (dim + 1.0) * (dim + 2.0);
    for (const auto& s : simplices) {
        double v = simplex_volume(s);
        Matrix acc = s.transpose() * s;  // sum over vertices of v v^T
        Vector sum = s.colwise().sum().transpose();
        m += (v / denom) * (acc + sum * sum.transpose());
    }
    return m;
}

double SimplexMesh::linear_power_integral(const Vector& a, double a0, int q) const {
    if (q < 0) throw InvalidInput("linear_power_integral: q must be >= 0");
    double total = 0.0;
    double scale = std::max(1.0, std::abs(a0));
    // q! d! / (q+d)!
    double coeff = 1.0;
    for (int i = 1; i <= q; ++i) coeff *= static_cast<double>(i) / (dim + i);
    for (const auto& s : simplices) {
        std::vector<double> c(static_cast<size_t>(dim) + 1);
        for (int i = 0; i <= dim; ++i) {
            c[static_cast<size_t>(i)] = a.dot(s.row(i).transpose()) + a0;
            if (c[static_cast<size_t>(i)] < -1e-9 * scale) {
                throw NumericError("linear_power_integral: linear form negative on mesh");
            }
            c[static_cast<size_t>(i)] = std::max(0.0, c[static_cast<size_t>(i)]);
        }
        total += simplex_volume(s) * coeff * complete_homogeneous(c, q);
    }
    return total;
}

SimplexMesh mesh_from_halfspaces(const Matrix& A, const Vector& b, double bound_hint) {
    const int n = (int)A.cols();
    if (n < 1 || n > 3) throw InvalidInput("mesh_from_halfspaces: dim must be 1..3");
    NormalizedRows nr = normalize_rows(A, b);
    SimplexMesh mesh;
    mesh.dim = n;
    if (nr.A.rows() == 1 && nr.b(0) < 0 && nr.A.row(0).norm() < 1e-14) return mesh;  // empty

    if (n == 1) {
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        for (int i = 0; i < nr.A.rows(); ++i) {
            double a = nr.A(i, 0);
            if (a > 0) hi = std::min(hi, nr.b(i) / a);
            else if (a < 0) lo = std::max(lo, nr.b(i) / a);
        }
        if (!std::isfinite(lo) || !std::isfinite(hi)) {
            throw NumericError("mesh_from_halfspaces: unbounded interval");
        }
        if (hi - lo > 1e-14) {
            Matrix s(2, 1);
            s << lo, hi;
            mesh.simplices.push_back(s);
        }
        return mesh;
    }

    double bound = bound_hint > 0 ? bound_hint : 2.0 * bounding_radius_lp(nr.A, nr.b) + 1.0;

    if (n == 2) {
        Polygon2 poly = clip_halfplanes(nr.A, nr.b, bound);
        if (poly.size() < 3) return mesh;
        for (size_t i = 1; i + 1 < poly.size(); ++i) {
            Matrix s(3, 2);
            s.row(0) = poly[0].transpose();
            s.row(1) = poly[i].transpose();
            s.row(2) = poly[i + 1].transpose();
            mesh.simplices.push_back(s);
        }
        return mesh;
    }

    // n == 3: facet polygons by clipping within each supporting plane, then
    // cone from an interior point.
    struct Facet {
        std::vector<Vector> verts;
    };
    std::vector<Facet> facets;
    Vector centroid_acc = Vector::Zero(3);
    int centroid_cnt = 0;
    for (int i = 0; i < nr.A.rows(); ++i) {
        Vector a = nr.A.row(i).transpose();
        Vector p = a * nr.b(i);
        Matrix B = complement_basis(a);  // 3 x 2
        // rows j != i restricted to the plane
        Matrix G(nr.A.rows() - 1, 2);
        Vector h(nr.A.rows() - 1);
        int r = 0;
        bool infeasible = false;
        for (int j = 0; j < nr.A.rows(); ++j) {
            if (j == i) continue;
            Eigen::RowVector2d g = nr.A.row(j) * B;
            double slack = nr.b(j) - nr.A.row(j).dot(p);
            if (g.norm() < 1e-13) {
                if (slack < -1e-10 * std::max(1.0, bound)) {
                    infeasible = true;
                    break;
                }
                g.setZero();
            }
            G.row(r) = g;
            h(r) = slack;
            ++r;
        }
        if (infeasible) continue;
        Polygon2 poly = clip_halfplanes(G.topRows(r), h.head(r), bound);
        if (polygon_area(poly) < 1e-14 * bound * bound) continue;
        Facet f;
        for (const auto& v2 : poly) {
            f.verts.push_back(p + B * Vector(v2));
            centroid_acc += f.verts.back();
            ++centroid_cnt;
        }
        facets.push_back(std::move(f));
    }
    if (facets.empty()) return mesh;
    Vector z = centroid_acc / centroid_cnt;
    for (const auto& f : facets) {
        for (size_t k = 1; k + 1 < f.verts.size(); ++k) {
            Matrix s(4, 3);
            s.row(0) = z.transpose();
            s.row(1) = f.verts[0].transpose();
            s.row(2) = f.verts[k].transpose();
            s.row(3) = f.verts[k + 1].transpose();
            mesh.simplices.push_back(s);
        }
    }
    return mesh;
}

double halfspace_volume(const Matrix& A, const Vector& b, double bound_hint) {
    const int n = (int)A.cols();
    if (n < 1 || n > 6) throw InvalidInput("halfspace_volume: dim must be 1..6");
    if (n <= 3) return mesh_from_halfspaces(A, b, bound_hint).volume();
    NormalizedRows nr = normalize_rows(A, b);
    // V = (1/n) * sum_i b_i * vol_{n-1}(facet_i), rows unit-normalized.
    double vol = 0.0;
    for (int i = 0; i < nr.A.rows(); ++i) {
        Vector a = nr.A.row(i).transpose();
        Vector p = a * nr.b(i);
        Matrix B = complement_basis(a);
        Matrix Af(nr.A.rows() - 1, n - 1);
        Vector bf(nr.A.rows() - 1);
        int r = 0;
        bool infeasible = false;
        for (int j = 0; j < nr.A.rows(); ++j) {
            if (j == i) continue;
            Eigen::RowVectorXd g = nr.A.row(j) * B;
            double slack = nr.b(j) - nr.A.row(j).dot(p);
            if (g.norm() < 1e-13 && slack < -1e-10) {
                infeasible = true;
                break;
            }
            Af.row(r) = g;
            bf(r) = slack;
            ++r;
        }
        if (infeasible) continue;
        double facet_vol = 0.0;
        try {
            facet_vol = halfspace_volume(Af.topRows(r), bf.head(r), bound_hint);
        } catch (const NumericError&) {
            throw NumericError("halfspace_volume: unbounded facet (body unbounded)");
        }
        vol += nr.b(i) * facet_vol;
    }
    return vol / n;
}

double hull_volume_2d(const Matrix& pts) {
    if (pts.cols() != 2) throw InvalidInput("hull_volume_2d: points must be 2-d");
    std::vector<Eigen::Vector2d> p;
    p.reserve((size_t)pts.rows());
    for (int i = 0; i < pts.rows(); ++i) p.emplace_back(pts(i, 0), pts(i, 1));
    std::sort(p.begin(), p.end(), [](const auto& a, const auto& b) {
        return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
    });
    p.erase(std::unique(p.begin(), p.end(), [](const auto& a, const auto& b) { return a == b; }),
            p.end());
    const size_t m = p.size();
    if (m < 3) return 0.0;
    auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
        return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
    };
    std::vector<Eigen::Vector2d> hull(2 * m);
    size_t k = 0;
    for (size_t i = 0; i < m; ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p[i]) <= 0) --k;
        hull[k++] = p[i];
    }
    for (size_t i = m - 1, t = k + 1; i > 0; --i) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], p[i - 1]) <= 0) --k;
        hull[k++] = p[i - 1];
    }
    hull.resize(k - 1);
    Polygon2 poly(hull.begin(), hull.end());
    return polygon_area(poly);
}

double hull_volume_3d(const Matrix& pts) {
    if (pts.cols() != 3) throw InvalidInput("hull_volume_3d: points must be 3-d");
    const int N = (int)pts.rows();
    if (N < 4) return 0.0;
    using V3 = Eigen::Vector3d;
    auto at = [&](int i) -> V3 { return pts.row(i).transpose(); };
    double scale = pts.cwiseAbs().maxCoeff();
    if (scale == 0) return 0.0;
    const double eps = 1e-10 * scale;

    // seed tetrahedron
    int i0 = 0, i1 = -1, i2 = -1, i3 = -1;
    double best = eps;
    for (int i = 1; i < N; ++i) {
        double d = (at(i) - at(i0)).norm();
        if (d > best) {
            best = d;
            i1 = i;
        }
    }
    if (i1 < 0) return 0.0;
    best = eps;
    for (int i = 0; i < N; ++i) {
        double d = (at(i) - at(i0)).cross(at(i) - at(i1)).norm();
        if (d > best) {
            best = d;
            i2 = i;
        }
    }
    if (i2 < 0) return 0.0;
    V3 nrm = (at(i1) - at(i0)).cross(at(i2) - at(i0));
    best = eps;
    for (int i = 0; i < N; ++i) {
        double d = std::abs(nrm.dot(at(i) - at(i0)));
        if (d > best) {
            best = d;
            i3 = i;
        }
    }
    if (i3 < 0) return 0.0;

    struct Face {
        int a, b, c;
        V3 n;
        double off;
        bool alive = true;
    };
    std::vector<Face> faces;
    V3 inner = (at(i0) + at(i1) + at(i2) + at(i3)) / 4.0;
    auto add_face = [&](int a, int b, int c) {
        Face f;
        f.a = a;
        f.b = b;
        f.c = c;
        f.n = (at(b) - at(a)).cross(at(c) - at(a));
        f.off = f.n.dot(at(a));
        if (f.n.dot(inner) > f.off) {  // flip outward
            std::swap(f.b, f.c);
            f.n = -f.n;
            f.off = f.n.dot(at(f.a));
        }
        faces.push_back(f);
    };
    add_face(i0, i1, i2);
    add_face(i0, i1, i3);
    add_face(i0, i2, i3);
    add_face(i1, i2, i3);

    for (int p = 0; p < N; ++p) {
        if (p == i0 || p == i1 || p == i2 || p == i3) continue;
        V3 x = at(p);
        std::vector<int> visible;
        for (size_t f = 0; f < faces.size(); ++f) {
            if (!faces[f].alive) continue;
            if (faces[f].n.dot(x) > faces[f].off + eps * faces[f].n.norm()) {
                visible.push_back((int)f);
            }
        }
        if (visible.empty()) continue;
        // horizon: directed edges of visible faces whose reverse edge is not
        // in a visible face
        std::set<std::pair<int, int>> vis_edges;
        for (int f : visible) {
            const Face& fc = faces[(size_t)f];
            vis_edges.insert({fc.a, fc.b});
            vis_edges.insert({fc.b, fc.c});
            vis_edges.insert({fc.c, fc.a});
        }
        std::vector<std::pair<int, int>> horizon;
        for (const auto& e : vis_edges) {
            if (!vis_edges.count({e.second, e.first})) horizon.push_back(e);
        }
        for (int f : visible) faces[(size_t)f].alive = false;
        for (const auto& e : horizon) add_face(e.first, e.second, p);
    }

    double vol = 0.0;
    for (const auto& f : faces) {
        if (!f.alive) continue;
        vol += at(f.a).cross(at(f.b)).dot(at(f.c));
    }
    return vol / 6.0;
}

double distance_to_hull(const Matrix& V, const Vector& x) {
    const int nv = (int)V.rows();
    const int n = (int)V.cols();
    if (x.size() != n) throw InvalidInput("distance_to_hull: dimension mismatch");
    Matrix Q = V.rowwise() - x.transpose();  // points q_i = v_i - x
    double scale = std::max(1.0, Q.rowwise().norm().maxCoeff());
    const double tol = 1e-12 * scale * scale;

    // Wolfe min-norm point over conv(q_i)
    int start = 0;
    double bestn = Q.row(0).squaredNorm();
    for (int i = 1; i < nv; ++i) {
        double d = Q.row(i).squaredNorm();
        if (d < bestn) {
            bestn = d;
            start = i;
        }
    }
    std::vector<int> S = {start};
    std::vector<double> lam = {1.0};
    Vector w = Q.row(start).transpose();

    for (int iter = 0; iter < 200; ++iter) {
        // most improving vertex
        int jstar = 0;
        double dmin = Q.row(0).dot(w.transpose());
        for (int i = 1; i < nv; ++i) {
            double d = Q.row(i).dot(w.transpose());
            if (d < dmin) {
                dmin = d;
                jstar = i;
            }
        }
        if (w.squaredNorm() <= dmin + tol) break;  // optimality
        if (std::find(S.begin(), S.end(), jstar) == S.end()) {
            S.push_back(jstar);
            lam.push_back(0.0);
        }
        // minor cycle: affine minimizer over S, step back onto the simplex
        for (int minor = 0; minor < 100; ++minor) {
            const int k = (int)S.size();
            Matrix M(k + 1, k + 1);
            Vector rhs = Vector::Zero(k + 1);
            for (int i = 0; i < k; ++i) {
                for (int j = 0; j < k; ++j) M(i, j) = Q.row(S[(size_t)i]).dot(Q.row(S[(size_t)j]));
                M(i, k) = 1.0;
                M(k, i) = 1.0;
            }
            M(k, k) = 0.0;
            rhs(k) = 1.0;
            Vector sol = M.fullPivLu().solve(rhs);
            Vector alpha = sol.head(k);
            bool interior = true;
            for (int i = 0; i < k; ++i) {
                if (alpha(i) <= 1e-12) {
                    interior = false;
                    break;
                }
            }
            if (interior) {
                lam.assign(alpha.data(), alpha.data() + k);
                break;
            }
            double theta = 1.0;
            for (int i = 0; i < k; ++i) {
                if (alpha(i) <= 1e-12) {
                    double denom = lam[(size_t)i] - alpha(i);
                    if (denom > 1e-15) theta = std::min(theta, lam[(size_t)i] / denom);
                }
            }
            std::vector<int> S2;
            std::vector<double> lam2;
            for (int i = 0; i < k; ++i) {
                double li = (1 - theta) * lam[(size_t)i] + theta * alpha(i);
                if (li > 1e-12) {
                    S2.push_back(S[(size_t)i]);
                    lam2.push_back(li);
                }
            }
            if (S2.empty()) {  // numerical corner; keep best single point
                S2.push_back(S[0]);
                lam2.push_back(1.0);
            }
            S = std::move(S2);
            lam = std::move(lam2);
        }
        w.setZero();
        for (size_t i = 0; i < S.size(); ++i) w += lam[i] * Q.row(S[(size_t)i]).transpose();
    }
    return w.norm();
}

}  // namespace subgauss
