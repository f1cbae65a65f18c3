#pragma once

#include "subgauss/bodies.hpp"
#include "subgauss/common.hpp"
#include "subgauss/sampler.hpp"

#include <vector>

namespace subgauss {

enum class Convention { Measure, Body };

const char* convention_name(Convention c);

/// Affine normalization x' = map (x - shift). Under the measure convention
/// the normalized covariance is I and L := 1; under the body convention the
/// normalized body has volume one and covariance L^2 I, with
/// L = det(Cov)^{1/2n} / |K|^{1/n}. Either way m_2(theta) = L on the
/// normalized cloud.
struct IsotropicModel {
    Vector shift;
    Matrix map;
    double L = 1.0;
    Convention convention = Convention::Measure;
};

struct IsotropizeResult {
    IsotropicModel model;
    SampleCloud normalized;
};

/// Body convention requires the body volume (volume_exact); pass volume <= 0
/// for the measure convention.
IsotropizeResult isotropize(const SampleCloud& cloud, Convention conv, double volume = -1.0);

/// L_K = det(Cov_p)^{1/2n} / |K|^{1/n} from exact moments (reference bodies,
/// linear images, polytopes with n <= 3).
double isotropic_constant(const ConvexBody& body);
double isotropic_constant_from_cloud(const SampleCloud& cloud, double volume);

struct MomentValue {
    double value = 0.0;
    double se = 0.0;
};

/// Empirical q-norm of <y,x> with a delta-method standard error (jackknife
/// fallback when the variance estimate of |<y,x>|^q is dominated by a single
/// point). Hit-and-run clouds get an effective-sample-size SE inflation.
MomentValue directional_moment(const SampleCloud& cloud, const Vector& x, double q);

/// 2 ln N; empirical q-norms above this are dominated by extremes.
double trusted_q_max(Eigen::Index n_samples);

struct MomentProfile {
    std::vector<double> q_grid;
    std::vector<double> values;
    std::vector<double> std_errors;
    std::vector<bool> trusted;
    Vector direction;
};

/// Dyadic {1,2,4,...,2^floor(log2 n)} plus q=3, sorted.
std::vector<double> default_q_grid(int n);

MomentProfile moment_profile(const SampleCloud& cloud, const Vector& direction,
                             const std::vector<double>& q_grid);

void write_moment_profile_csv(const MomentProfile& profile, const std::string& path);

/// Orlicz psi_alpha norm: the root of mean exp((|<y,x>|/t)^alpha) = 2,
/// bisected over [max/50, 50 max] to 1e-8 relative.
double orlicz_norm(const SampleCloud& cloud, const Vector& x, double alpha);

/// max_q m_q / (sqrt(q) m_1) over the profile grid (trusted entries).
double psi2_constant(const MomentProfile& profile);

/// max_q m_q / (q m_1); empirically bounded by 2 on convex bodies.
double psi1_borell_report(const MomentProfile& profile);

nlohmann::json isotropic_model_to_json(const IsotropicModel& model);
IsotropicModel isotropic_model_from_json(const nlohmann::json& j);

}  // namespace subgauss
