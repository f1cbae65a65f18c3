#pragma once

#include "subgauss/bodies.hpp"
#include "subgauss/common.hpp"

#include <memory>
#include <string>

namespace subgauss {

enum class SamplerKind { Exact, HitAndRun };

struct SamplerOptions {
    bool force_hit_and_run = false;
    int burn_in = -1;   // -1: 5 n^2
    int thinning = -1;  // -1: n
    int chains = 1;
};

/// Seeded point sample. Regenerating with the same (seed, sampler settings,
/// N) reproduces the matrix bit-identically.
struct SampleCloud {
    Matrix points;  // N x n, rows are points
    std::uint64_t seed = 0;
    std::string source;
    SamplerKind sampler = SamplerKind::Exact;
    int burn_in = 0;
    int thinning = 0;
    int chains = 1;

    Eigen::Index size() const { return points.rows(); }
    int dim() const { return (int)points.cols(); }
};

SampleCloud sample_uniform(const ConvexBody& body, Eigen::Index count, std::uint64_t seed,
                           const SamplerOptions& opts = {});

struct LogConcaveSpec {
    enum class Family { Gaussian, ProductExponential, UniformBody };
    Family family = Family::Gaussian;
    int dim = 0;
    Matrix cov;    // gaussian
    Vector rates;  // product_exponential (coordinates centered to mean zero)
    std::shared_ptr<const ConvexBody> body;

    static LogConcaveSpec gaussian(Matrix cov);
    static LogConcaveSpec gaussian_std(int n);
    static LogConcaveSpec product_exponential(Vector rates);
    static LogConcaveSpec product_exponential(int n, double rate);
    static LogConcaveSpec uniform_body(ConvexBody body);
};

LogConcaveSpec logconcave_from_json(const nlohmann::json& spec, const std::string& path = "measure");
nlohmann::json logconcave_to_json(const LogConcaveSpec& spec);

SampleCloud sample_logconcave(const LogConcaveSpec& spec, Eigen::Index count, std::uint64_t seed,
                              const SamplerOptions& opts = {});

struct CloudDiagnostics {
    Vector mean;
    Vector variance;
    Vector lag1;        // per-coordinate lag-1 autocorrelation (within chains)
    bool mcmc = false;
    bool autocorr_flag = false;  // lag-1 above 0.2 after thinning
    bool degenerate = false;     // some coordinate has (near) zero variance
    double ess = 0.0;            // N (1-rho)/(1+rho), rho = worst positive lag-1
};

CloudDiagnostics diagnostics(const SampleCloud& cloud);

/// Binary matrix file: magic, dim, N, seed (+ sampler metadata), then
/// little-endian 64-bit floats row-major.
void save_cloud(const SampleCloud& cloud, const std::string& path);
SampleCloud load_cloud(const std::string& path);
void save_cloud_csv(const SampleCloud& cloud, const std::string& path);

}  // namespace subgauss
