#pragma once

#include "subgauss/common.hpp"
#include "subgauss/moments.hpp"
#include "subgauss/sampler.hpp"

#include <string>
#include <vector>

namespace subgauss {

/// Hull body T = conv( union over i of (1/i) K_{2^i} ) with
/// K_q = Z_q(K) / (sqrt(q) L). Its support function is
/// h_T(x) = max_i m_{2^i}(x) / (i 2^{i/2} L). Levels run i = 1..floor(log2 n);
/// levels with 2^i > 2 ln N are statistically untrusted.
struct TBodySpec {
    const SampleCloud* cloud = nullptr;  // normalized cloud (not owned)
    double L = 1.0;
    std::vector<int> levels;          // level indices i in use (q = 2^i)
    std::vector<int> dropped_levels;  // untrusted levels excluded by clamping

    /// clamp=true drops untrusted levels (recorded in dropped_levels);
    /// clamp=false keeps them all and t_support will refuse to evaluate.
    static TBodySpec make(const SampleCloud& normalized_cloud, double L, bool clamp = true);
};

/// h_T(x); positively homogeneous. Throws if the spec contains an untrusted
/// level (raise N or lower n).
double t_support(const TBodySpec& spec, const Vector& x);

struct SearchConfig {
    int starts = 64;
    double step_init = 0.5;
    double step_tol = 1e-6;
    int max_polls = 400;              // poll rounds per start
    Eigen::Index search_subsample = 0;  // 0 = search on the full cloud
    std::uint64_t seed = 0;
    int workers = 1;
    std::vector<double> t_grid;  // tail grid; empty = 1.0,1.25,...,12.0
};

struct TailRow {
    double t = 0.0;
    double tail = 0.0;   // empirical P(|<y,theta>| >= t m_1)
    double bound = 0.0;  // exp(-c t^2 / ln^2(t+1)) at the fitted c
};

struct DirectionReport {
    Vector theta;
    double objective = 0.0;  // h_T(theta)
    double psi2_proxy = 0.0;
    double psi2_orlicz_ratio = 0.0;  // ||<.,theta>||_psi2 / ||<.,theta>||_1
    double growth_constant = 0.0;    // sup_q m_q/(sqrt(q) ln(q+1) m_2)
    std::vector<TailRow> tail_table;
    double fitted_c = 0.0;
    double tau = 2.0;  // exponent convention of the tail bound
    std::vector<int> levels_used;
    std::vector<int> levels_dropped;
    bool no_improvement = false;
    std::uint64_t seed = 0;
    Eigen::Index n_samples = 0;
    std::string body_hash;
};

/// Minimize h_T over the unit sphere by seeded multi-start compass search on
/// the tangent space. Deterministic given (config.seed, starts); ties break
/// to the lexicographically smallest theta.
DirectionReport find_direction(const SampleCloud& normalized_cloud, double L,
                               const SearchConfig& config = {});

/// Empirical tails P(|<y,theta>| >= t m_1) on the grid, keeping entries with
/// at least 10 exceedances. fitted_c = min over kept t of
/// -log(tail) ln^2(t+1) / t^2 (tau = 2 convention).
std::vector<TailRow> tail_profile(const SampleCloud& cloud, const Vector& theta,
                                  const std::vector<double>& t_grid, double& fitted_c);

/// sup over dyadic q in [2, q_max] of m_q / (sqrt(q) ln(q+1) m_2).
double moment_growth_check(const SampleCloud& cloud, const Vector& theta, double q_max);

/// (E ||y||_2^q)^{1/q} with standard error.
MomentValue euclidean_moment(const SampleCloud& cloud, double q);

nlohmann::json direction_report_to_json(const DirectionReport& report);
void write_tail_table_csv(const std::vector<TailRow>& table, const std::string& path);

}  // namespace subgauss
