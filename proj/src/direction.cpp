#include "subgauss/direction.hpp"

#include "subgauss/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <thread>

namespace subgauss {

using nlohmann::json;

TBodySpec TBodySpec::make(const SampleCloud& normalized_cloud, double L, bool clamp) {
    if (L <= 0) throw InvalidInput("TBodySpec: L must be > 0");
    const int n = normalized_cloud.dim();
    if (n < 2) throw InvalidInput("TBodySpec: need dimension >= 2");
    TBodySpec spec;
    spec.cloud = &normalized_cloud;
    spec.L = L;
    const int s = (int)std::floor(std::log2((double)n));
    const double qmax = trusted_q_max(normalized_cloud.size());
    for (int i = 1; i <= s; ++i) {
        double q = std::pow(2.0, i);
        if (clamp && q > qmax) spec.dropped_levels.push_back(i);
        else spec.levels.push_back(i);
    }
    if (spec.levels.empty()) {
        throw NumericError("TBodySpec: all levels untrusted; raise N");
    }
    return spec;
}

namespace {

// h_T from precomputed projections u = P x (exploits homogeneity: the caller
// divides by ||x|| separately). Levels are dyadic, so |u|^{2^i} comes from
// repeated squaring, no pow calls.
double t_objective_from_proj(const Vector& u, const std::vector<int>& levels, double L) {
    const Eigen::Index N = u.size();
    Eigen::ArrayXd s = u.array().square();
    double best = 0.0;
    int cur = 1;
    for (int i : levels) {
        while (cur < i) {
            s = s.square();
            ++cur;
        }
        double q = std::pow(2.0, i);
        double m = std::pow(s.sum() / (double)N, 1.0 / q);
        best = std::max(best, m / ((double)i * std::sqrt(q) * L));
    }
    return best;
}

Matrix tangent_basis(const Vector& theta) {
    const int n = (int)theta.size();
    Eigen::HouseholderQR<Matrix> qr(theta);
    Matrix Q = qr.householderQ();
    return Q.rightCols(n - 1);
}

struct StartResult {
    double objective = 0.0;
    Vector theta;
    bool improved = false;
};

StartResult run_start(const Matrix& P, const std::vector<int>& levels, double L,
                      const SearchConfig& cfg, std::uint64_t seed, int start_index) {
    const int n = (int)P.cols();
    CounterRng rng(seed, 1000 + (std::uint64_t)start_index);
    Vector theta(n);
    for (;;) {
        for (int i = 0; i < n; ++i) theta(i) = rng.next_gaussian();
        double nrm = theta.norm();
        if (nrm > 1e-12) {
            theta /= nrm;
            break;
        }
    }
    Vector u = P * theta;
    double f = t_objective_from_proj(u, levels, L);
    const double f0 = f;

    Matrix B = tangent_basis(theta);
    Matrix U = P * B;  // projections of the tangent frame
    double h = cfg.step_init;
    for (int poll = 0; poll < cfg.max_polls && h >= cfg.step_tol; ++poll) {
        bool improved = false;
        const double scale = 1.0 / std::sqrt(1.0 + h * h);  // theta and frame orthonormal
        for (int j = 0; j < n - 1 && !improved; ++j) {
            for (double sgn : {1.0, -1.0}) {
                Vector ucand = u + (sgn * h) * U.col(j);
                double fc = t_objective_from_proj(ucand, levels, L) * scale;
                if (fc < f - 1e-15) {
                    theta = (theta + (sgn * h) * B.col(j)) * scale;
                    theta /= theta.norm();  // kill accumulated drift
                    u = P * theta;
                    f = t_objective_from_proj(u, levels, L);
                    B = tangent_basis(theta);
                    U = P * B;
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) h *= 0.5;
    }
    StartResult res;
    res.objective = f;
    res.theta = theta;
    res.improved = f < f0 - 1e-15;
    return res;
}

bool theta_less(const Vector& a, const Vector& b) {
    for (int i = 0; i < a.size(); ++i) {
        if (a(i) < b(i)) return true;
        if (a(i) > b(i)) return false;
    }
    return false;
}

}  // namespace

double t_support(const TBodySpec& spec, const Vector& x) {
    if (spec.cloud == nullptr) throw InvalidInput("t_support: spec has no cloud");
    if (x.size() != spec.cloud->dim()) throw InvalidInput("t_support: dimension mismatch");
    double nrm = x.norm();
    if (nrm == 0.0) throw InvalidInput("t_support: x must be nonzero");
    const double qmax = trusted_q_max(spec.cloud->size());
    for (int i : spec.levels) {
        if (std::pow(2.0, i) > qmax) {
            throw NumericError(
                "t_support: level q=" + std::to_string((long)std::pow(2.0, i)) +
                " exceeds the trusted range 2 ln N; raise N or lower the dimension");
        }
    }
    Vector u = spec.cloud->points * x;  // scales linearly with x; h_T is homogeneous
    return t_objective_from_proj(u, spec.levels, spec.L);
}

std::vector<TailRow> tail_profile(const SampleCloud& cloud, const Vector& theta,
                                  const std::vector<double>& t_grid, double& fitted_c) {
    if (std::abs(theta.norm() - 1.0) > 1e-9) throw InvalidInput("tail_profile: theta must be unit");
    const Eigen::Index N = cloud.size();
    Vector u = (cloud.points * theta).cwiseAbs();
    double m1 = u.mean();
    if (!(m1 > 0) || m1 < 1e-12 * u.maxCoeff()) {
        throw NumericError("tail_profile: m_1 ~ 0 (degenerate direction)");
    }
    std::vector<double> sorted(u.data(), u.data() + N);
    std::sort(sorted.begin(), sorted.end());
    std::vector<TailRow> rows;
    fitted_c = std::numeric_limits<double>::infinity();
    for (double t : t_grid) {
        if (t < 1.0) throw InvalidInput("tail_profile: t grid must lie in [1, t_max]");
        double thresh = t * m1;
        auto it = std::lower_bound(sorted.begin(), sorted.end(), thresh);
        Eigen::Index count = (Eigen::Index)(sorted.end() - it);
        if (count < 10) continue;  // dropped: relative error unusable below 10 exceedances
        TailRow r;
        r.t = t;
        r.tail = (double)count / (double)N;
        rows.push_back(r);
        double lg = std::log(t + 1.0);
        fitted_c = std::min(fitted_c, -std::log(r.tail) * lg * lg / (t * t));
    }
    if (rows.empty()) throw NumericError("tail_profile: no grid point has >= 10 exceedances");
    if (!std::isfinite(fitted_c)) fitted_c = 0.0;
    for (auto& r : rows) {
        double lg = std::log(r.t + 1.0);
        r.bound = std::exp(-fitted_c * r.t * r.t / (lg * lg));
    }
    return rows;
}

double moment_growth_check(const SampleCloud& cloud, const Vector& theta, double q_max) {
    const double cap = std::min((double)cloud.dim(), trusted_q_max(cloud.size()));
    if (q_max > cap + 1e-9) {
        throw InvalidInput("moment_growth_check: q_max exceeds min(n, 2 ln N)");
    }
    if (q_max < 2.0) throw InvalidInput("moment_growth_check: q_max must be >= 2");
    MomentValue m2 = directional_moment(cloud, theta, 2.0);
    if (!(m2.value > 0)) throw NumericError("moment_growth_check: degenerate m_2");
    double best = 0.0;
    for (double q = 2.0; q <= q_max; q *= 2.0) {
        double mq = directional_moment(cloud, theta, q).value;
        best = std::max(best, mq / (std::sqrt(q) * std::log(q + 1.0) * m2.value));
    }
    return best;
}

MomentValue euclidean_moment(const SampleCloud& cloud, double q) {
    if (q < 1.0) throw InvalidInput("euclidean_moment: q must be >= 1");
    const Eigen::Index N = cloud.size();
    Vector w = cloud.points.rowwise().norm();
    for (Eigen::Index i = 0; i < N; ++i) w(i) = std::pow(w(i), q);
    double mu = w.mean();
    MomentValue out;
    out.value = std::pow(mu, 1.0 / q);
    double sd = std::sqrt((w.array() - mu).square().sum() / (double)(N - 1));
    if (mu > 0) out.se = out.value / (q * mu) * sd / std::sqrt((double)N);
    return out;
}

DirectionReport find_direction(const SampleCloud& normalized_cloud, double L,
                               const SearchConfig& config) {
    const int n = normalized_cloud.dim();
    if (n < 2) throw InvalidInput("find_direction: need dimension >= 2");
    TBodySpec spec = TBodySpec::make(normalized_cloud, L, /*clamp=*/true);

    // The search runs on a deterministic prefix subsample (common random
    // numbers); the reported objective and certificates use the full cloud.
    Eigen::Index M = normalized_cloud.size();
    if (config.search_subsample > 0) M = std::min(M, config.search_subsample);
    Matrix Psearch = normalized_cloud.points.topRows(M);

    const int starts = std::max(1, config.starts);
    std::vector<StartResult> results((size_t)starts);
    const int workers = std::max(1, std::min(config.workers, starts));
    if (workers == 1) {
        for (int s = 0; s < starts; ++s) {
            results[(size_t)s] = run_start(Psearch, spec.levels, L, config, config.seed, s);
        }
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w]() {
                for (int s = w; s < starts; s += workers) {
                    results[(size_t)s] = run_start(Psearch, spec.levels, L, config, config.seed, s);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    // order-independent reduction: min objective, lexicographic tie-break
    int best = 0;
    for (int s = 1; s < starts; ++s) {
        if (results[(size_t)s].objective < results[(size_t)best].objective ||
            (results[(size_t)s].objective == results[(size_t)best].objective &&
             theta_less(results[(size_t)s].theta, results[(size_t)best].theta))) {
            best = s;
        }
    }

    DirectionReport rep;
    rep.theta = results[(size_t)best].theta;
    // canonical sign: first nonzero coordinate positive (h_T is even)
    for (int i = 0; i < n; ++i) {
        if (std::abs(rep.theta(i)) > 1e-12) {
            if (rep.theta(i) < 0) rep.theta = -rep.theta;
            break;
        }
    }
    rep.theta /= rep.theta.norm();
    rep.no_improvement = true;
    for (const auto& r : results) rep.no_improvement = rep.no_improvement && !r.improved;
    rep.objective = t_support(spec, rep.theta);
    rep.levels_used = spec.levels;
    rep.levels_dropped = spec.dropped_levels;
    rep.seed = config.seed;
    rep.n_samples = normalized_cloud.size();

    MomentProfile prof = moment_profile(normalized_cloud, rep.theta, default_q_grid(n));
    rep.psi2_proxy = psi2_constant(prof);
    double m1 = prof.values[0];
    rep.psi2_orlicz_ratio = orlicz_norm(normalized_cloud, rep.theta, 2.0) / m1;
    double q_cap = std::min((double)n, trusted_q_max(normalized_cloud.size()));
    rep.growth_constant = moment_growth_check(normalized_cloud, rep.theta, q_cap);

    std::vector<double> t_grid = config.t_grid;
    if (t_grid.empty()) {
        for (double t = 1.0; t <= 12.0 + 1e-9; t += 0.25) t_grid.push_back(t);
    }
    rep.tail_table = tail_profile(normalized_cloud, rep.theta, t_grid, rep.fitted_c);
    return rep;
}

json direction_report_to_json(const DirectionReport& rep) {
    json j;
    json theta = json::array();
    for (int i = 0; i < rep.theta.size(); ++i) theta.push_back(rep.theta(i));
    j["theta"] = std::move(theta);
    j["objective"] = rep.objective;
    j["psi2_proxy"] = rep.psi2_proxy;
    j["psi2_orlicz_ratio"] = rep.psi2_orlicz_ratio;
    j["growth_constant"] = rep.growth_constant;
    json table = json::array();
    for (const auto& r : rep.tail_table) {
        table.push_back(json{{"t", r.t}, {"tail", r.tail}, {"bound", r.bound}});
    }
    j["tail_table"] = std::move(table);
    j["fitted_c"] = rep.fitted_c;
    j["tau"] = rep.tau;
    j["levels_used"] = rep.levels_used;
    j["levels_dropped"] = rep.levels_dropped;
    j["no_improvement"] = rep.no_improvement;
    j["seed"] = rep.seed;
    j["n_samples"] = (std::int64_t)rep.n_samples;
    j["body_hash"] = rep.body_hash;
    return j;
}

void write_tail_table_csv(const std::vector<TailRow>& table, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw NumericError("write_tail_table_csv: cannot open " + path);
    f << "t,tail,bound\n";
    char buf[128];
    for (const auto& r : table) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", r.t, r.tail, r.bound);
        f << buf;
    }
}

}  // namespace subgauss
