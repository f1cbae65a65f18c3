#include "subgauss/geomtools.hpp"

#include "subgauss/polymesh.hpp"
#include "subgauss/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace subgauss {

namespace {

// |t|^(q-1) sgn(t), fast for the small integer exponents used here.
inline double signed_power(double t, double qm1) {
    int qi = (int)qm1;
    if ((double)qi == qm1 && qi >= 0 && qi <= 8) {
        double a = 1.0;
        double at = std::abs(t);
        for (int i = 0; i < qi; ++i) a *= at;
        return t >= 0 ? a : -a;
    }
    return std::copysign(std::pow(std::abs(t), qm1), t);
}

Matrix sphere_grid(int n, int m) {
    Matrix dirs(m, n);
    if (n == 2) {
        for (int j = 0; j < m; ++j) {
            double a = 2.0 * M_PI * j / m;
            dirs(j, 0) = std::cos(a);
            dirs(j, 1) = std::sin(a);
        }
        return dirs;
    }
    if (n == 3) {
        // Fibonacci sphere
        const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
        for (int j = 0; j < m; ++j) {
            double z = 1.0 - 2.0 * (j + 0.5) / m;
            double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            double a = 2.0 * M_PI * j / golden;
            dirs(j, 0) = r * std::cos(a);
            dirs(j, 1) = r * std::sin(a);
            dirs(j, 2) = z;
        }
        return dirs;
    }
    throw InvalidInput("sphere_grid: structured grids only for n in {2,3}");
}

Vector random_sphere_dir(CounterRng& rng, int n) {
    Vector d(n);
    for (;;) {
        for (int i = 0; i < n; ++i) d(i) = rng.next_gaussian();
        double nrm = d.norm();
        if (nrm > 1e-12) return d / nrm;
    }
}

}  // namespace

ConvexBody normalize_volume_one(const ConvexBody& body) {
    double vol = volume_exact(body);
    if (std::abs(vol - 1.0) < 1e-12) return body;
    const int n = body.dim();
    double lambda = std::pow(vol, -1.0 / n);
    return ConvexBody::linear_image(body, lambda * Matrix::Identity(n, n));
}

SupportOracle SupportOracle::exact_body(std::shared_ptr<const ConvexBody> body) {
    SupportOracle o;
    o.dim = body->dim();
    o.value = [body](const Vector& u) { return support(*body, u); };
    o.se = [](const Vector&) { return 0.0; };
    return o;
}

SupportOracle SupportOracle::zq_estimator(const SampleCloud& cloud, double q) {
    SupportOracle o;
    o.dim = cloud.dim();
    const SampleCloud* pc = &cloud;
    o.value = [pc, q](const Vector& u) { return directional_moment(*pc, u, q).value; };
    o.se = [pc, q](const Vector& u) { return directional_moment(*pc, u, q).se; };
    return o;
}

MeanWidthResult mean_width(const SupportOracle& oracle, int n_dirs, std::uint64_t seed) {
    if (n_dirs < 100) throw InvalidInput("mean_width: need at least 100 directions");
    CounterRng rng(seed, 17);
    double sum = 0.0, sum2 = 0.0, se_sum = 0.0;
    for (int i = 0; i < n_dirs; ++i) {
        Vector u = random_sphere_dir(rng, oracle.dim);
        double h = oracle.value(u);
        sum += h;
        sum2 += h * h;
        se_sum += oracle.se(u);
    }
    MeanWidthResult r;
    r.value = sum / n_dirs;
    double var = std::max(0.0, sum2 / n_dirs - r.value * r.value);
    // direction-sampling noise plus the (correlated) per-evaluation MC noise
    r.se = std::sqrt(var / n_dirs) + se_sum / n_dirs;
    return r;
}

KqMeanWidthResult kq_mean_width(const SampleCloud& cloud, double L, double q, int n_dirs,
                                std::uint64_t seed) {
    if (L <= 0) throw InvalidInput("kq_mean_width: L must be > 0");
    SupportOracle o = SupportOracle::zq_estimator(cloud, q);
    MeanWidthResult w = mean_width(o, n_dirs, seed);
    KqMeanWidthResult r;
    double scale = std::sqrt(q) * L;
    r.value = w.value / scale;
    r.se = w.se / scale;
    r.q_above_sqrt_n = q > std::sqrt((double)cloud.dim()) + 1e-9;
    r.q_untrusted = q > trusted_q_max(cloud.size());
    return r;
}

ZqPolytopeResult zq_polytope(const SampleCloud& cloud, double q, int dir_count) {
    const int n = cloud.dim();
    if (n != 2 && n != 3) throw InvalidInput("zq_polytope: n must be 2 or 3");
    if ((n == 2 && dir_count < 64) || (n == 3 && dir_count < 512)) {
        throw InvalidInput("zq_polytope: dir_count below the minimum (64 for n=2, 512 for n=3)");
    }
    if (q < 1.0) throw InvalidInput("zq_polytope: q must be >= 1");
    const Eigen::Index N = cloud.size();
    Matrix dirs = sphere_grid(n, dir_count);
    Matrix tangency(dir_count, n);
    Vector hvals(dir_count);
    Vector t(N), w(N);
    for (int j = 0; j < dir_count; ++j) {
        Vector u = dirs.row(j).transpose();
        t = cloud.points * u;
        double mu = 0.0;
        for (Eigen::Index i = 0; i < N; ++i) {
            w(i) = signed_power(t(i), q - 1.0);
            mu += w(i) * t(i);  // |t|^q
        }
        mu /= (double)N;
        double m = std::pow(mu, 1.0 / q);
        hvals(j) = m;
        // support point of Z_q at u: gradient of the q-norm
        Vector g = (cloud.points.transpose() * w) / (double)N;
        tangency.row(j) = (std::pow(m, 1.0 - q) * g).transpose();
    }
    ZqPolytopeResult res;
    res.inner_vertices = tangency;
    res.outer_A = dirs;
    res.outer_b = hvals;
    res.inner_volume = n == 2 ? hull_volume_2d(tangency) : hull_volume_3d(tangency);
    res.outer_volume = mesh_from_halfspaces(dirs, hvals, 4.0 * hvals.maxCoeff()).volume();
    res.bracket_warning =
        res.outer_volume - res.inner_volume > 0.05 * std::max(res.outer_volume, 1e-300);
    return res;
}

LyzResult lyz_check(const ConvexBody& body, double q, Eigen::Index n_samples, std::uint64_t seed,
                    int dir_count) {
    const int n = body.dim();
    if (n != 2 && n != 3) throw InvalidInput("lyz_check: n must be 2 or 3");
    ConvexBody normalized = normalize_volume_one(body);
    SampleCloud cloud = sample_uniform(normalized, n_samples, seed);
    ZqPolytopeResult zq = zq_polytope(cloud, q, dir_count);
    if (zq.outer_volume - zq.inner_volume > 0.08 * zq.outer_volume) {
        throw NumericError("lyz_check: Z_q volume bracket too wide; raise dir_count");
    }
    double rq = ball_marginal_qnorm(n, q);  // h_{Z_q(volume-one ball)}, constant over directions
    double ball_vol_root = std::pow(unit_ball_volume(n), 1.0 / n) * rq;
    LyzResult r;
    r.ball_radius = rq;
    r.ratio_lo = std::pow(zq.inner_volume, 1.0 / n) / ball_vol_root;
    r.ratio_hi = std::pow(zq.outer_volume, 1.0 / n) / ball_vol_root;
    // relative SE of the moment estimator, probed on a few directions
    CounterRng rng(seed, 99);
    double rel_se = 0.0;
    const int probes = 8;
    for (int i = 0; i < probes; ++i) {
        MomentValue mv = directional_moment(cloud, random_sphere_dir(rng, n), q);
        rel_se += mv.se / mv.value;
    }
    rel_se /= probes;
    r.pass = r.ratio_hi >= 1.0 - 2.0 * rel_se;
    return r;
}

namespace {

// Integral over {y in K : <y, phihat> >= 0} of <y, phihat>^q, expressed in the
// slice coordinates spanned by [phihat | E]. Exact via meshing when the slice
// dimension is <= 3 and q is an integer; hit-and-run MC otherwise.
double half_slice_integral(const ConvexBody& hrep, const Matrix& U, int q,
                           Eigen::Index mc_samples, std::uint64_t seed) {
    const int sdim = (int)U.cols();
    Matrix As(hrep.A().rows() + 1, sdim);
    Vector bs(hrep.b().size() + 1);
    As.topRows(hrep.A().rows()) = hrep.A() * U;
    bs.head(hrep.b().size()) = hrep.b();
    As.row(hrep.A().rows()).setZero();
    As(hrep.A().rows(), 0) = -1.0;  // z_1 >= 0
    bs(hrep.b().size()) = 0.0;

    if (sdim <= 3) {
        SimplexMesh mesh = mesh_from_halfspaces(As, bs);
        if (mesh.volume() <= 0) throw NumericError("ball body: empty half-slice");
        Vector e1 = Vector::Zero(sdim);
        e1(0) = 1.0;
        return mesh.linear_power_integral(e1, 0.0, q);
    }
    if (sdim > 6) throw InvalidInput("ball body: slice dimension above 6 unsupported");
    if (mc_samples <= 0) mc_samples = 200000;
    double vol = halfspace_volume(As, bs);
    if (vol <= 0) throw NumericError("ball body: empty half-slice");
    ConvexBody slice = ConvexBody::h_polytope(As, bs);
    SampleCloud pts = sample_uniform(slice, mc_samples, seed);
    double mean = 0.0;
    for (Eigen::Index i = 0; i < pts.size(); ++i) {
        double z1 = pts.points(i, 0);
        double p = 1.0;
        for (int k = 0; k < q; ++k) p *= z1;
        mean += p;
    }
    mean /= (double)pts.size();
    return vol * mean;
}

// Orthonormal [phihat | basis of E] with phi in F.
Matrix half_slice_basis(const SubspaceBasis& F, const Vector& phi) {
    const int n = F.ambient_dim();
    Vector proj = F.columns * (F.columns.transpose() * phi);
    if ((proj - phi).norm() > 1e-9 * std::max(1.0, phi.norm())) {
        throw InvalidInput("ball body: phi must lie in F");
    }
    Vector phihat = phi / phi.norm();
    SubspaceBasis E = F.orthogonal_complement();
    Matrix U(n, 1 + E.subspace_dim());
    U.col(0) = phihat;
    U.rightCols(E.subspace_dim()) = E.columns;
    return U;
}

}  // namespace

double ball_body_gauge(const ConvexBody& body, const SubspaceBasis& F, int q, const Vector& phi,
                       Eigen::Index mc_samples, std::uint64_t seed) {
    if (q < 0) throw InvalidInput("ball_body_gauge: q must be >= 0");
    if (phi.size() != body.dim()) throw InvalidInput("ball_body_gauge: dimension mismatch");
    double pn = phi.norm();
    if (pn == 0.0) throw InvalidInput("ball_body_gauge: phi must be nonzero");
    ConvexBody hrep = to_hpolytope(body);
    Matrix U = half_slice_basis(F, phi);
    double integral = half_slice_integral(hrep, U, q, mc_samples, seed);
    if (integral <= 0) throw NumericError("ball_body_gauge: empty half-slice");
    // the integrand |<y,phi>|^q scales the unit-phihat integral by ||phi||^q
    double I = std::pow(pn, (double)q) * integral;
    return std::pow(pn, 1.0 + (double)q / (q + 1.0)) * std::pow(I, -1.0 / (q + 1.0));
}

BallBodyVolume ball_body_volume(const ConvexBody& body, const SubspaceBasis& F, int q) {
    const int k = F.subspace_dim();
    if (k != 1 && k != 2) throw InvalidInput("ball_body_volume: k must be 1 or 2");
    ConvexBody hrep = to_hpolytope(body);
    BallBodyVolume out;
    if (k == 1) {
        Vector phi = F.columns.col(0);
        double Ip = half_slice_integral(hrep, half_slice_basis(F, phi), q, 0, 0);
        double Im = half_slice_integral(hrep, half_slice_basis(F, Vector(-phi)), q, 0, 0);
        out.radius_plus = std::pow(Ip, 1.0 / (q + 1.0));
        out.radius_minus = std::pow(Im, 1.0 / (q + 1.0));
        // two-point quadrature |B_2^1| * avg I^{k/(q+1)} equals r+ + r-
        out.volume = out.radius_plus + out.radius_minus;
        double g_plus = ball_body_gauge(body, F, q, phi);
        double g_minus = ball_body_gauge(body, F, q, Vector(-phi));
        double gauge_len = 1.0 / g_plus + 1.0 / g_minus;
        if (std::abs(gauge_len - out.volume) > 1e-9 * std::max(1.0, out.volume)) {
            throw NumericError("ball_body_volume: quadrature disagrees with gauge-based length");
        }
        return out;
    }
    const int grid = 256;
    double acc = 0.0;
    for (int l = 0; l < grid; ++l) {
        double a = 2.0 * M_PI * l / grid;
        Vector phi = std::cos(a) * F.columns.col(0) + std::sin(a) * F.columns.col(1);
        double I = half_slice_integral(hrep, half_slice_basis(F, phi), q, 0, 0);
        acc += std::pow(I, 2.0 / (q + 1.0));
    }
    out.volume = M_PI * acc / grid;  // |B_2^2| * average
    return out;
}

Prop21Result prop21_identity_check(const ConvexBody& body, const SubspaceBasis& F, int q,
                                   const SampleCloud* cloud) {
    if (F.subspace_dim() != 1) {
        throw InvalidInput("prop21_identity_check: only k=1 is exactly computable");
    }
    if (q < 1 || q > 3) throw InvalidInput("prop21_identity_check: q must be in {1,2,3}");
    const int n = body.dim();
    if (n > 4) throw InvalidInput("prop21_identity_check: n must be <= 4");
    double vol = volume_exact(body);
    if (std::abs(vol - 1.0) > 1e-6) {
        throw InvalidInput("prop21_identity_check: body must have volume 1");
    }
    Vector theta = F.columns.col(0);
    ConvexBody hrep = to_hpolytope(body);

    Prop21Result res;
    double Ip, Im;
    if (cloud == nullptr) {
        if (n > 3) {
            throw InvalidInput("prop21_identity_check: exact path needs n <= 3; supply a cloud");
        }
        Matrix U = half_slice_basis(F, theta);
        Ip = half_slice_integral(hrep, U, q, 0, 0);
        Im = half_slice_integral(hrep, half_slice_basis(F, Vector(-theta)), q, 0, 0);
        res.lhs = std::pow(Ip + Im, 1.0 / q);  // m_q(theta), |K|=1
        res.lhs_se = 0.0;
    } else {
        MomentValue mv = directional_moment(*cloud, theta, (double)q);
        res.lhs = mv.value;
        res.lhs_se = mv.se;
        // half-space restricted moments from the same cloud
        Vector t = cloud->points * theta;
        const Eigen::Index N = t.size();
        double sp = 0.0, sm = 0.0;
        for (Eigen::Index i = 0; i < N; ++i) {
            double p = 1.0;
            for (int j = 0; j < q; ++j) p *= std::abs(t(i));
            if (t(i) >= 0) sp += p;
            else sm += p;
        }
        Ip = sp / (double)N;
        Im = sm / (double)N;
    }
    double rp = std::pow(Ip, 1.0 / (q + 1.0));
    double rm = std::pow(Im, 1.0 / (q + 1.0));
    double volB = rp + rm;
    // normalized 1-d body: interval of length one, endpoints [-a, b]
    double a = rm / volB, b = rp / volB;
    double zq = std::pow((std::pow(a, q + 1.0) + std::pow(b, q + 1.0)) / (q + 1.0), 1.0 / q);
    res.rhs = std::pow(1.0 + q, 1.0 / q) * std::pow(volB, 1.0 + 1.0 / q) * zq;
    res.gap = std::abs(res.lhs - res.rhs) / std::max({res.lhs, res.rhs, 1e-300});
    return res;
}

ProjectionCheckResult projection_volume_check(const SampleCloud& cloud, double L, double q,
                                              const SubspaceBasis& F, int dir_count) {
    const int k = F.subspace_dim();
    if (k != 1 && k != 2) throw InvalidInput("projection_volume_check: k must be 1 or 2");
    if (L <= 0) throw InvalidInput("projection_volume_check: L must be > 0");
    ProjectionCheckResult res;
    double scale = std::sqrt(q) * L;
    if (k == 1) {
        Vector theta = F.columns.col(0);
        double m = directional_moment(cloud, theta, q).value;
        double proj = 2.0 * m / scale;  // |P_F(K_q)| for the symmetric body K_q
        res.proj_volume_lo = res.proj_volume_hi = proj;
        res.ratio = proj / (std::max(std::sqrt(q), 1.0) * 2.0);
        return res;
    }
    SampleCloud projected = cloud;
    projected.points = cloud.points * F.columns;
    ZqPolytopeResult zq = zq_polytope(projected, q, dir_count);
    res.proj_volume_lo = zq.inner_volume / (scale * scale);
    res.proj_volume_hi = zq.outer_volume / (scale * scale);
    double bound = std::max(std::sqrt(q / 2.0), 1.0) * std::sqrt(M_PI);  // |B_2^2|^{1/2}
    res.ratio = std::sqrt(res.proj_volume_hi) / bound;
    return res;
}

CoveringResult covering_number(const Matrix& points, double r, double resolution) {
    const Eigen::Index M = points.rows();
    if (M < 1) throw InvalidInput("covering_number: empty point set");
    if (resolution > r / 4.0 + 1e-12) {
        throw NumericError("covering_number: point-set resolution too coarse (need <= r/4)");
    }
    Vector centroid = points.colwise().mean().transpose();
    Eigen::Index first = 0;
    double bestd = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < M; ++i) {
        double d = (points.row(i).transpose() - centroid).norm();
        if (d < bestd) {
            bestd = d;
            first = i;
        }
    }
    Vector dist(M);
    for (Eigen::Index i = 0; i < M; ++i) dist(i) = (points.row(i) - points.row(first)).norm();
    CoveringResult res;
    res.cover_count = 1;
    for (;;) {
        Eigen::Index far = 0;
        double dmax = dist.maxCoeff(&far);
        if (dmax <= r) {
            res.cover_radius = dmax;
            break;
        }
        ++res.cover_count;
        for (Eigen::Index i = 0; i < M; ++i) {
            dist(i) = std::min(dist(i), (points.row(i) - points.row(far)).norm());
        }
    }
    // maximal 2r-separated subset, greedy in index order
    std::vector<Eigen::Index> packing;
    for (Eigen::Index i = 0; i < M; ++i) {
        bool ok = true;
        for (Eigen::Index c : packing) {
            if ((points.row(i) - points.row(c)).norm() < 2.0 * r) {
                ok = false;
                break;
            }
        }
        if (ok) packing.push_back(i);
    }
    res.packing_count = (int)packing.size();
    return res;
}

Matrix kq_dense_points(const SampleCloud& cloud, double L, double q, int dir_count,
                       int radial_count, double& resolution) {
    const int n = cloud.dim();
    if (n != 2 && n != 3) throw InvalidInput("kq_dense_points: n must be 2 or 3");
    ZqPolytopeResult zq = zq_polytope(cloud, q, dir_count);
    double scale = 1.0 / (std::sqrt(q) * L);
    Matrix boundary = scale * zq.inner_vertices;
    Matrix out(dir_count * radial_count + 1, n);
    out.row(0).setZero();
    Eigen::Index row = 1;
    for (int jr = 1; jr <= radial_count; ++jr) {
        double lambda = (double)jr / radial_count;
        for (int j = 0; j < dir_count; ++j) out.row(row++) = lambda * boundary.row(j);
    }
    // empirical resolution: worst boundary nearest-neighbor spacing plus the
    // radial shell spacing
    double max_norm = boundary.rowwise().norm().maxCoeff();
    double shell = max_norm / radial_count;
    double nn_max = 0.0;
    for (int i = 0; i < dir_count; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < dir_count; ++j) {
            if (j == i) continue;
            best = std::min(best, (boundary.row(i) - boundary.row(j)).norm());
        }
        nn_max = std::max(nn_max, best);
    }
    resolution = 0.5 * std::hypot(nn_max, shell);
    return out;
}

namespace {

Polygon2 body_polygon(const ConvexBody& body) {
    ConvexBody h = to_hpolytope(body);
    // normalize rows, then clip inside an LP-certified bound
    Matrix A = h.A();
    Vector b = h.b();
    for (int i = 0; i < A.rows(); ++i) {
        double nrm = A.row(i).norm();
        A.row(i) /= nrm;
        b(i) /= nrm;
    }
    double bound = 0.0;
    for (int i = 0; i < 2; ++i) {
        Vector c = Vector::Zero(2);
        for (double s : {1.0, -1.0}) {
            c(i) = s;
            LpResult lr = lp_maximize(A, b, c);
            if (lr.status != LpStatus::Optimal) throw NumericError("body_polygon: unbounded body");
            bound = std::max(bound, std::abs(lr.value));
        }
    }
    Polygon2 poly = clip_halfplanes(A, b, 2.0 * bound + 1.0);
    if (poly.size() < 3) throw NumericError("body_polygon: degenerate polygon");
    return poly;
}

Matrix polytope_vertices(const ConvexBody& body) {
    if (body.kind() == BodyKind::VPolytope || body.kind() == BodyKind::Simplex) {
        return body.vertices();
    }
    ConvexBody h = to_hpolytope(body);
    SimplexMesh mesh = mesh_from_halfspaces(h.A(), h.b());
    std::vector<Vector> verts;
    for (const auto& s : mesh.simplices) {
        for (int i = 0; i < s.rows(); ++i) {
            Vector v = s.row(i).transpose();
            bool dup = false;
            for (const auto& u : verts) {
                if ((u - v).norm() < 1e-10) {
                    dup = true;
                    break;
                }
            }
            if (!dup) verts.push_back(v);
        }
    }
    Matrix out((Eigen::Index)verts.size(), body.dim());
    for (size_t i = 0; i < verts.size(); ++i) out.row((Eigen::Index)i) = verts[i].transpose();
    return out;
}

}  // namespace

QuermassResult quermassintegrals(const ConvexBody& body, const QuermassOptions& opts) {
    const int n = body.dim();
    if (n != 2 && n != 3) throw InvalidInput("quermassintegrals: n must be 2 or 3");
    QuermassResult res;
    res.steiner.assign((size_t)n + 1, 0.0);
    res.steiner_se.assign((size_t)n + 1, 0.0);
    res.kubota.assign((size_t)n + 1, 0.0);
    res.kubota_se.assign((size_t)n + 1, 0.0);

    std::vector<double> tvals;
    for (int i = 1; i <= n + 1; ++i) tvals.push_back(0.5 * i);
    Vector vols(n + 1), vol_ses(n + 1);

    if (n == 2) {
        Polygon2 poly = body_polygon(body);
        double A = polygon_area(poly);
        double P = 0.0;
        for (size_t i = 0; i < poly.size(); ++i) {
            P += (poly[(i + 1) % poly.size()] - poly[i]).norm();
        }
        for (int i = 0; i <= n; ++i) {
            double t = tvals[(size_t)i];
            vols(i) = A + P * t + M_PI * t * t;  // exact convex offset area
            vol_ses(i) = 0.0;
        }
    } else {
        Matrix V = polytope_vertices(body);
        double tmax = tvals.back();
        Vector lo = V.colwise().minCoeff().transpose().array() - tmax;
        Vector hi = V.colwise().maxCoeff().transpose().array() + tmax;
        double boxvol = (hi - lo).prod();
        CounterRng rng(opts.seed, 5);
        std::vector<Eigen::Index> hits((size_t)n + 1, 0);
        Vector x(3);
        for (Eigen::Index s = 0; s < opts.mc_offset_samples; ++s) {
            for (int k = 0; k < 3; ++k) x(k) = lo(k) + (hi(k) - lo(k)) * rng.next_double();
            double d = distance_to_hull(V, x);
            for (int i = 0; i <= n; ++i) {
                if (d <= tvals[(size_t)i]) ++hits[(size_t)i];
            }
        }
        for (int i = 0; i <= n; ++i) {
            double p = (double)hits[(size_t)i] / (double)opts.mc_offset_samples;
            vols(i) = p * boxvol;
            vol_ses(i) = boxvol * std::sqrt(p * (1 - p) / (double)opts.mc_offset_samples);
        }
    }

    // fit |K+tB| = sum_d C(n,d) W_[d] t^d
    Matrix vand(n + 1, n + 1);
    for (int i = 0; i <= n; ++i) {
        double t = tvals[(size_t)i];
        double p = 1.0;
        for (int d = 0; d <= n; ++d) {
            vand(i, d) = p;
            p *= t;
        }
    }
    Matrix vinv = vand.fullPivLu().inverse();
    Vector coeffs = vinv * vols;
    Vector coeff_se = (vinv.cwiseAbs() * vol_ses);
    auto binom = [](int nn, int kk) {
        double r = 1.0;
        for (int i = 1; i <= kk; ++i) r = r * (nn - kk + i) / i;
        return r;
    };
    for (int d = 0; d <= n; ++d) {
        res.steiner[(size_t)d] = coeffs(d) / binom(n, d);
        res.steiner_se[(size_t)d] = coeff_se(d) / binom(n, d);
    }

    // Kubota averages: W_[d] with k = n-d projections, d = 1..n-1;
    // W_[0] = |K| and W_[n] = |B_2^n| directly.
    res.kubota[0] = volume_exact(body);
    res.kubota[(size_t)n] = unit_ball_volume(n);
    Matrix V = polytope_vertices(body);
    CounterRng rng(opts.seed, 6);
    for (int d = 1; d <= n - 1; ++d) {
        int k = n - d;
        double sum = 0.0, sum2 = 0.0;
        for (int it = 0; it < opts.kubota_dirs; ++it) {
            double pv = 0.0;
            if (k == 1) {
                Vector u = random_sphere_dir(rng, n);
                Vector proj = V * u;
                pv = proj.maxCoeff() - proj.minCoeff();
            } else {  // k == 2, n == 3
                Matrix G(n, 2);
                for (int i = 0; i < n; ++i) {
                    G(i, 0) = rng.next_gaussian();
                    G(i, 1) = rng.next_gaussian();
                }
                Eigen::HouseholderQR<Matrix> qr(G);
                Matrix Q = qr.householderQ() * Matrix::Identity(n, 2);
                pv = hull_volume_2d(V * Q);
            }
            sum += pv;
            sum2 += pv * pv;
        }
        double mean = sum / opts.kubota_dirs;
        double var = std::max(0.0, sum2 / opts.kubota_dirs - mean * mean);
        double factor = unit_ball_volume(n) / unit_ball_volume(k);
        res.kubota[(size_t)d] = factor * mean;
        res.kubota_se[(size_t)d] = factor * std::sqrt(var / opts.kubota_dirs);
    }

    for (int d = 0; d <= n; ++d) {
        double s = res.steiner[(size_t)d];
        double kq = res.kubota[(size_t)d];
        double rel = std::abs(s - kq) / std::max({std::abs(s), std::abs(kq), 1e-300});
        res.max_disagreement = std::max(res.max_disagreement, rel);
    }
    if (res.max_disagreement > 0.05) {
        throw NumericError("quermassintegrals: Steiner and Kubota estimators disagree above 5%");
    }
    return res;
}

HullNetResult hull_cover_net(const std::vector<Matrix>& sets, const std::vector<Matrix>& nets,
                             double R, double t, Eigen::Index n_check, std::uint64_t seed) {
    const int s = (int)sets.size();
    if (s < 1 || nets.size() != sets.size()) {
        throw InvalidInput("hull_cover_net: need matching non-empty sets and nets");
    }
    if (t <= 0 || R <= 0) throw InvalidInput("hull_cover_net: R and t must be > 0");
    const int n = (int)sets[0].cols();
    auto nearest = [&](const Matrix& pts, const Vector& x, double& dist) -> Eigen::Index {
        Eigen::Index best = 0;
        dist = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < pts.rows(); ++i) {
            double d = (pts.row(i).transpose() - x).norm();
            if (d < dist) {
                dist = d;
                best = i;
            }
        }
        return best;
    };
    // validate inputs: A_i inside R B_2^n, nets cover at radius t
    for (int i = 0; i < s; ++i) {
        if (sets[(size_t)i].cols() != n || nets[(size_t)i].cols() != n) {
            throw InvalidInput("hull_cover_net: dimension mismatch");
        }
        if (sets[(size_t)i].rowwise().norm().maxCoeff() > R + 1e-9) {
            throw InvalidInput("hull_cover_net: set " + std::to_string(i) + " not inside R B_2^n");
        }
        for (Eigen::Index j = 0; j < sets[(size_t)i].rows(); ++j) {
            double d;
            nearest(nets[(size_t)i], sets[(size_t)i].row(j).transpose(), d);
            if (d > t + 1e-9) {
                throw InvalidInput("hull_cover_net: net " + std::to_string(i) +
                                   " does not cover its set at radius t");
            }
        }
    }

    HullNetResult res;
    double delta = 1.0;
    long gridK = 0;
    if (s == 1) {
        res.l1_net_size = 1;  // Z = {1}
    } else {
        delta = t / (s * (R + t));
        gridK = (long)std::floor(1.0 / delta);
        // count lattice points of the l1 ball |g|_1 <= gridK in Z^s
        std::function<long(int, long)> count = [&](int left, long budget) -> long {
            if (left == 0) return 1;
            long total = 0;
            for (long g = -budget; g <= budget; ++g) total += count(left - 1, budget - std::labs(g));
            return total;
        };
        res.l1_net_size = (std::size_t)count(s, gridK);
    }
    double log10_size = std::log10((double)res.l1_net_size);
    for (int i = 0; i < s; ++i) log10_size += std::log10((double)nets[(size_t)i].rows());
    res.net_size_log10 = log10_size;
    res.bound_constant = std::pow((double)res.l1_net_size, 1.0 / s) * t / R;

    // verify: hull samples must land within 2t of the constructed net; the
    // witness combination follows the construction itself
    CounterRng rng(seed, 31);
    for (Eigen::Index it = 0; it < n_check; ++it) {
        Vector lambda(s);
        for (int i = 0; i < s; ++i) lambda(i) = rng.next_exponential();
        lambda /= lambda.sum();
        Vector w = Vector::Zero(n);
        std::vector<Vector> chosen((size_t)s);
        for (int i = 0; i < s; ++i) {
            Eigen::Index idx =
                std::min<Eigen::Index>((Eigen::Index)(rng.next_double() * sets[(size_t)i].rows()),
                                       sets[(size_t)i].rows() - 1);
            chosen[(size_t)i] = sets[(size_t)i].row(idx).transpose();
            w += lambda(i) * chosen[(size_t)i];
        }
        Vector z(s);
        if (s == 1) {
            z(0) = 1.0;
        } else {
            for (int i = 0; i < s; ++i) z(i) = std::round(lambda(i) / delta) * delta;
            double l1 = z.lpNorm<1>();
            if (l1 > 1.0) z /= l1;
        }
        Vector cand = Vector::Zero(n);
        for (int i = 0; i < s; ++i) {
            double d;
            Eigen::Index idx = nearest(nets[(size_t)i], chosen[(size_t)i], d);
            cand += z(i) * nets[(size_t)i].row(idx).transpose();
        }
        double dev = (w - cand).norm();
        res.max_deviation = std::max(res.max_deviation, dev);
        if (dev > 2.0 * t + 1e-9) {
            std::string msg = "hull_cover_net: coverage violation at sample (";
            for (int i = 0; i < n; ++i) msg += (i ? "," : "") + std::to_string(w(i));
            msg += "), distance " + std::to_string(dev) + " > 2t";
            throw NumericError(msg);
        }
    }
    return res;
}

}  // namespace subgauss
