#pragma once

#include "subgauss/bodies.hpp"
#include "subgauss/common.hpp"
#include "subgauss/moments.hpp"
#include "subgauss/sampler.hpp"

#include <functional>
#include <vector>

namespace subgauss {

/// Direction -> support value with an attached SE model (0 for exact bodies).
struct SupportOracle {
    std::function<double(const Vector&)> value;
    std::function<double(const Vector&)> se;
    int dim = 0;

    static SupportOracle exact_body(std::shared_ptr<const ConvexBody> body);
    /// h_{Z_q}(u) = m_q(u) from a cloud (with delta-method SE).
    static SupportOracle zq_estimator(const SampleCloud& cloud, double q);
};

struct MeanWidthResult {
    double value = 0.0;
    double se = 0.0;
};

/// Spherical average of the support function (the average of h alone, not
/// h(u)+h(-u); for symmetric bodies the two conventions agree).
MeanWidthResult mean_width(const SupportOracle& oracle, int n_dirs, std::uint64_t seed);

struct KqMeanWidthResult {
    double value = 0.0;
    double se = 0.0;
    bool q_above_sqrt_n = false;  // outside the proven w(K_q) <= C regime
    bool q_untrusted = false;     // q > 2 ln N
};

/// w(K_q) = mean width of Z_q(K)/(sqrt(q) L) from the moment estimator.
KqMeanWidthResult kq_mean_width(const SampleCloud& cloud, double L, double q, int n_dirs,
                                std::uint64_t seed);

struct ZqPolytopeResult {
    Matrix inner_vertices;  // support tangency points (rows)
    Matrix outer_A;         // outer halfspaces <x,u_j> <= m_q(u_j)
    Vector outer_b;
    double inner_volume = 0.0;
    double outer_volume = 0.0;
    bool bracket_warning = false;  // relative width > 5%: raise dir_count
};

/// Inner/outer polytope bracket of Z_q from structured direction grids
/// (regular angles for n=2, Fibonacci sphere for n=3).
ZqPolytopeResult zq_polytope(const SampleCloud& cloud, double q, int dir_count);

struct LyzResult {
    double ratio_lo = 0.0;   // bracket of |Z_q(K)|^{1/n} / |Z_q(ball)|^{1/n}
    double ratio_hi = 0.0;
    double ball_radius = 0.0;  // h_{Z_q(volume-one ball)}, exact
    bool pass = false;         // ratio_hi >= 1 - 2 rel-SE
};

/// Affine isoperimetric inequality check; the body is volume-normalized
/// internally. n in {2,3}.
LyzResult lyz_check(const ConvexBody& body, double q, Eigen::Index n_samples, std::uint64_t seed,
                    int dir_count);

/// Gauge of the Ball body B_q(K,F) at phi in F:
/// ||phi||^{1+q/(q+1)} ( integral over K cap E(phi) of |<y,phi>|^q )^{-1/(q+1)}.
/// Exact (meshed) for integer q when the slice dimension n-k+1 is <= 3,
/// otherwise hit-and-run MC in the slice.
double ball_body_gauge(const ConvexBody& body, const SubspaceBasis& F, int q, const Vector& phi,
                       Eigen::Index mc_samples = 0, std::uint64_t seed = 0);

struct BallBodyVolume {
    double volume = 0.0;
    double radius_plus = 0.0;   // k=1 only: 1/gauge(+phi)
    double radius_minus = 0.0;  // k=1 only: 1/gauge(-phi)
};

/// |B_q(K,F)| by sphere quadrature over S_F: exact two-point rule for k=1,
/// 256-point circular grid for k=2.
BallBodyVolume ball_body_volume(const ConvexBody& body, const SubspaceBasis& F, int q);

struct Prop21Result {
    double lhs = 0.0;  // h_{Z_q(K)}(theta_F), theta_F spanning F
    double lhs_se = 0.0;
    double rhs = 0.0;  // (k+q)^{1/q} |B_q|^{1/k+1/q} h_{Z_q(normalized B_q)}(1)
    double gap = 0.0;  // |lhs-rhs| / max(lhs,rhs)
};

/// Projection identity at k=1 (the only exactly computable regime). The body
/// must have volume 1; lhs is exact (meshed) for n <= 3 unless a cloud is
/// supplied, in which case the lhs is the MC moment with its SE.
Prop21Result prop21_identity_check(const ConvexBody& body, const SubspaceBasis& F, int q,
                                   const SampleCloud* cloud = nullptr);

struct ProjectionCheckResult {
    double proj_volume_lo = 0.0;  // |P_F(K_q)| (bracket identical for k=1)
    double proj_volume_hi = 0.0;
    double ratio = 0.0;  // |P|^{1/k} / (max(sqrt(q/k),1) |B_2^k|^{1/k})
};

ProjectionCheckResult projection_volume_check(const SampleCloud& cloud, double L, double q,
                                              const SubspaceBasis& F, int dir_count = 256);

struct CoveringResult {
    int cover_count = 0;      // greedy farthest-first cover at radius r
    int packing_count = 0;    // maximal 2r-separated subset (covering lower bound)
    double cover_radius = 0.0;  // achieved max distance to the centers
};

/// Greedy covering/packing of a dense point set. resolution is the caller's
/// density claim for the set; it must be <= r/4.
CoveringResult covering_number(const Matrix& points, double r, double resolution);

/// Dense point set of K_q (radial x angular grid of Z_q tangency points,
/// scaled by 1/(sqrt(q) L)); returns the points and an empirical resolution
/// estimate.
Matrix kq_dense_points(const SampleCloud& cloud, double L, double q, int dir_count,
                       int radial_count, double& resolution);

struct QuermassResult {
    std::vector<double> steiner;     // W_[0..n] from the Steiner fit
    std::vector<double> steiner_se;  // 0 for the exact n=2 path
    std::vector<double> kubota;      // W_[0..n], Kubota averages for 1..n-1
    std::vector<double> kubota_se;
    double max_disagreement = 0.0;  // relative, over comparable entries
};

struct QuermassOptions {
    Eigen::Index mc_offset_samples = 1000000;  // n=3 offset volumes
    int kubota_dirs = 4096;
    std::uint64_t seed = 1;
};

/// Steiner-polynomial fit vs Kubota projection averages, n in {2,3}.
/// Throws if the two estimators disagree by more than 5%.
QuermassResult quermassintegrals(const ConvexBody& body, const QuermassOptions& opts = {});

struct HullNetResult {
    std::size_t l1_net_size = 0;       // |Z|, the (t/(R+t))-net of the l1 ball
    double net_size_log10 = 0.0;       // log10(|Z| prod |N_i|)
    double max_deviation = 0.0;        // worst sample-to-net distance observed
    double bound_constant = 0.0;       // |Z|^{1/s} t / R, effective grid constant
};

/// Constructive net for conv(union A_i) per the combination-grid recipe:
/// candidate points sum z_i x_i with x_i in the per-set nets and z in an l1
/// grid. Verifies 10^4 (or n_check) hull samples land within 2t of the net;
/// throws with a witness point on violation.
HullNetResult hull_cover_net(const std::vector<Matrix>& sets, const std::vector<Matrix>& nets,
                             double R, double t, Eigen::Index n_check, std::uint64_t seed);

/// K / |K|^{1/n}, the volume-one dilation.
ConvexBody normalize_volume_one(const ConvexBody& body);

}  // namespace subgauss
