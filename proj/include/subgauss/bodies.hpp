#pragma once

#include "subgauss/common.hpp"

#include <nlohmann/json_fwd.hpp>

#include <memory>
#include <string>

namespace subgauss {

enum class BodyKind {
    Ball,
    Cube,
    Simplex,
    CrossPolytope,
    LpBall,
    HPolytope,
    VPolytope,
    LinearImage,
};

const char* body_kind_name(BodyKind k);

/// Tagged convex body with exact oracles. Reference-body constructors are
/// canonically centered (center of mass at the origin). Values are immutable
/// after construction and safe to share across threads.
class ConvexBody {
  public:
    BodyKind kind() const { return kind_; }
    int dim() const { return dim_; }

    static ConvexBody ball(int n, double radius = 1.0);
    static ConvexBody cube(int n, double side = 1.0);
    /// variant "standard": conv{0, e_i} recentered; "regular": regular
    /// simplex with volume 1 and barycenter 0.
    static ConvexBody simplex(int n, const std::string& variant = "regular");
    static ConvexBody cross_polytope(int n);
    static ConvexBody lp_ball(int n, double p);
    static ConvexBody h_polytope(Matrix A, Vector b);
    static ConvexBody v_polytope(Matrix vertices);
    static ConvexBody linear_image(ConvexBody base, Matrix T, Vector shift);
    static ConvexBody linear_image(ConvexBody base, Matrix T);

    // parameter accessors (valid per kind)
    double radius() const { return param_; }
    double side() const { return param_; }
    double lp_exponent() const { return param_; }
    bool simplex_regular() const { return regular_; }
    const Matrix& A() const { return A_; }
    const Vector& b() const { return b_; }
    const Matrix& vertices() const { return verts_; }
    const ConvexBody& base() const { return *base_; }
    const Matrix& map() const { return T_; }
    const Matrix& map_inverse() const { return Tinv_; }
    const Vector& shift() const { return shift_; }
    double map_abs_det() const { return absdet_; }

  private:
    BodyKind kind_ = BodyKind::Ball;
    int dim_ = 0;
    double param_ = 1.0;  // radius / side / p
    bool regular_ = true;
    Matrix A_;
    Vector b_;
    Matrix verts_;
    std::shared_ptr<const ConvexBody> base_;
    Matrix T_, Tinv_;
    Vector shift_;
    double absdet_ = 1.0;
};

/// n x k orthonormal columns spanning a subspace F (codim=false) or marking
/// that the object of interest is E = F^perp (codim=true).
struct SubspaceBasis {
    Matrix columns;
    bool codim = false;

    int ambient_dim() const { return (int)columns.rows(); }
    int subspace_dim() const { return (int)columns.cols(); }

    /// Orthonormalizes the given columns; throws if rank-deficient.
    static SubspaceBasis from(const Matrix& raw, bool codim = false);
    static SubspaceBasis span_of(const Vector& v);
    SubspaceBasis orthogonal_complement() const;
};

double support(const ConvexBody& body, const Vector& x);
bool membership(const ConvexBody& body, const Vector& y, double tol = 1e-9);
double gauge(const ConvexBody& body, const Vector& y);

struct SliceResult {
    ConvexBody body;          // h_polytope in k coordinates z, y = U z
    bool empty_interior = false;  // feasible but no interior point
};

/// K ∩ span(U) expressed in the basis coordinates: {z : (A U) z <= b}.
/// Requires an H-representation (see to_hpolytope). Throws on empty slice.
SliceResult slice_subspace(const ConvexBody& body, const SubspaceBasis& basis);

bool has_hrep(const ConvexBody& body);
/// H-representation for cube/simplex/cross-polytope/h_polytope and linear
/// images of those. Throws for ball/lp_ball/v_polytope.
ConvexBody to_hpolytope(const ConvexBody& body);

bool has_exact_volume(const ConvexBody& body);
double volume_exact(const ConvexBody& body);

bool has_exact_covariance(const ConvexBody& body);
/// Mean and covariance of the uniform probability measure on the body.
/// Closed forms for reference bodies; meshed for polytopes with n <= 3.
void body_mean_cov_exact(const ConvexBody& body, Vector& mean, Matrix& cov);

/// JSON body-spec round trip. Parse errors name the offending field path.
ConvexBody body_from_json(const nlohmann::json& spec, const std::string& path = "body");
nlohmann::json body_to_json(const ConvexBody& body);
std::uint64_t body_hash(const ConvexBody& body);

}  // namespace subgauss
