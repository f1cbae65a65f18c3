#include "subgauss/moments.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace subgauss {

using nlohmann::json;

const char* convention_name(Convention c) {
    return c == Convention::Measure ? "measure" : "body";
}

namespace {

void mean_cov(const Matrix& pts, Vector& mean, Matrix& cov) {
    mean = pts.colwise().mean().transpose();
    Matrix centered = pts.rowwise() - mean.transpose();
    cov = (centered.transpose() * centered) / (double)pts.rows();
}

Matrix sym_inv_sqrt(const Matrix& cov) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
    if (es.info() != Eigen::Success) throw NumericError("isotropize: eigensolver failed");
    Vector ev = es.eigenvalues();
    if (ev.minCoeff() <= 1e-12 * std::max(1.0, ev.maxCoeff())) {
        throw NumericError("isotropize: covariance is singular or near-singular");
    }
    return es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() *
           es.eigenvectors().transpose();
}

// Effective-sample-size factor for SE inflation on MCMC chains, from the
// lag-1 autocorrelation of the series w.
double ess_factor(const Vector& w) {
    const Eigen::Index N = w.size();
    if (N < 3) return 1.0;
    double mu = w.mean();
    double num = 0.0, den = 0.0;
    for (Eigen::Index i = 0; i < N; ++i) {
        double c = w(i) - mu;
        den += c * c;
        if (i + 1 < N) num += c * (w(i + 1) - mu);
    }
    if (den <= 0) return 1.0;
    double rho = std::min(0.999, std::max(0.0, num / den));
    return std::sqrt((1.0 + rho) / (1.0 - rho));
}

}  // namespace

IsotropizeResult isotropize(const SampleCloud& cloud, Convention conv, double volume) {
    const Eigen::Index N = cloud.size();
    const int n = cloud.dim();
    if (N < 10 * (Eigen::Index)n * n) {
        throw InvalidInput("isotropize: need at least 10 n^2 samples");
    }
    Vector mean;
    Matrix cov;
    mean_cov(cloud.points, mean, cov);
    Matrix w = sym_inv_sqrt(cov);

    IsotropizeResult out;
    out.model.shift = mean;
    out.model.convention = conv;
    if (conv == Convention::Measure) {
        out.model.map = w;
        out.model.L = 1.0;
    } else {
        if (volume <= 0) throw InvalidInput("isotropize: body convention requires the volume");
        double logdet = 0.0;
        Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
        for (int i = 0; i < n; ++i) logdet += std::log(es.eigenvalues()(i));
        double lambda = std::exp(logdet / (2.0 * n)) / std::pow(volume, 1.0 / n);
        out.model.map = lambda * w;
        out.model.L = lambda;
    }
    out.normalized = cloud;
    out.normalized.points =
        (cloud.points.rowwise() - mean.transpose()) * out.model.map.transpose();
    return out;
}

double isotropic_constant(const ConvexBody& body) {
    if (!has_exact_covariance(body) || !has_exact_volume(body)) {
        throw InvalidInput(
            "isotropic_constant: exact volume/covariance unavailable for this body; use "
            "isotropic_constant_from_cloud with a known volume");
    }
    Vector mean;
    Matrix cov;
    body_mean_cov_exact(body, mean, cov);
    const int n = body.dim();
    Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
    double logdet = 0.0;
    for (int i = 0; i < n; ++i) logdet += std::log(es.eigenvalues()(i));
    return std::exp(logdet / (2.0 * n)) / std::pow(volume_exact(body), 1.0 / n);
}

double isotropic_constant_from_cloud(const SampleCloud& cloud, double volume) {
    if (volume <= 0) throw InvalidInput("isotropic_constant_from_cloud: volume must be > 0");
    Vector mean;
    Matrix cov;
    mean_cov(cloud.points, mean, cov);
    const int n = cloud.dim();
    Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
    if (es.eigenvalues().minCoeff() <= 0) {
        throw NumericError("isotropic_constant_from_cloud: degenerate covariance");
    }
    double logdet = 0.0;
    for (int i = 0; i < n; ++i) logdet += std::log(es.eigenvalues()(i));
    return std::exp(logdet / (2.0 * n)) / std::pow(volume, 1.0 / n);
}

double trusted_q_max(Eigen::Index n_samples) { return 2.0 * std::log((double)n_samples); }

MomentValue directional_moment(const SampleCloud& cloud, const Vector& x, double q) {
    if (q < 1.0) throw InvalidInput("directional_moment: q must be >= 1");
    if (x.size() != cloud.dim()) throw InvalidInput("directional_moment: dimension mismatch");
    if (x.norm() == 0.0) throw InvalidInput("directional_moment: x must be nonzero");
    const Eigen::Index N = cloud.size();
    Vector w = (cloud.points * x).cwiseAbs();
    for (Eigen::Index i = 0; i < N; ++i) w(i) = std::pow(w(i), q);
    double S = w.sum();
    double mu = S / (double)N;
    MomentValue out;
    out.value = std::pow(mu, 1.0 / q);
    if (mu <= 0) {
        out.se = 0.0;
        return out;
    }
    // delta method; jackknife when the variance sum is dominated by one point
    double var_sum = 0.0, max_term = 0.0;
    for (Eigen::Index i = 0; i < N; ++i) {
        double c = w(i) - mu;
        var_sum += c * c;
        max_term = std::max(max_term, c * c);
    }
    bool unstable = var_sum > 0 && max_term > 0.5 * var_sum;
    if (!unstable) {
        double sd = std::sqrt(var_sum / (double)(N - 1));
        out.se = out.value / (q * mu) * sd / std::sqrt((double)N);
    } else {
        double msum = 0.0, m2sum = 0.0;
        for (Eigen::Index i = 0; i < N; ++i) {
            double mi = std::pow((S - w(i)) / (double)(N - 1), 1.0 / q);
            msum += mi;
            m2sum += mi * mi;
        }
        double mbar = msum / (double)N;
        out.se = std::sqrt(std::max(0.0, (double)(N - 1) / (double)N * (m2sum - (double)N * mbar * mbar)));
    }
    if (cloud.sampler == SamplerKind::HitAndRun) out.se *= ess_factor(w);
    return out;
}

std::vector<double> default_q_grid(int n) {
    std::vector<double> grid = {1.0, 2.0, 3.0};
    for (double q = 4.0; q <= (double)n; q *= 2.0) grid.push_back(q);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

MomentProfile moment_profile(const SampleCloud& cloud, const Vector& direction,
                             const std::vector<double>& q_grid) {
    MomentProfile p;
    p.q_grid = q_grid;
    p.direction = direction;
    double qmax = trusted_q_max(cloud.size());
    for (double q : q_grid) {
        MomentValue mv = directional_moment(cloud, direction, q);
        p.values.push_back(mv.value);
        p.std_errors.push_back(mv.se);
        p.trusted.push_back(q <= qmax);
    }
    return p;
}

void write_moment_profile_csv(const MomentProfile& profile, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw NumericError("write_moment_profile_csv: cannot open " + path);
    f << "q,value,se\n";
    char buf[128];
    for (size_t i = 0; i < profile.q_grid.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", profile.q_grid[i],
                      profile.values[i], profile.std_errors[i]);
        f << buf;
    }
}

double orlicz_norm(const SampleCloud& cloud, const Vector& x, double alpha) {
    if (alpha < 1.0 || alpha > 2.0) throw InvalidInput("orlicz_norm: alpha must be in [1,2]");
    if (x.norm() == 0.0) throw InvalidInput("orlicz_norm: x must be nonzero");
    Vector u = (cloud.points * x).cwiseAbs();
    double m = u.maxCoeff();
    if (m <= 0) throw NumericError("orlicz_norm: samples of <y,x> are all zero");
    auto g = [&](double t) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < u.size(); ++i) {
            acc += std::exp(std::pow(u(i) / t, alpha));
        }
        return acc / (double)u.size() - 2.0;
    };
    double lo = m / 50.0, hi = 50.0 * m;
    double glo = g(lo), ghi = g(hi);
    if (!(glo > 0.0) || !(ghi < 0.0)) {
        throw NumericError(
            "orlicz_norm: no sign change in bracket [max/50, 50 max]; g(lo)=" +
            std::to_string(glo) + " g(hi)=" + std::to_string(ghi));
    }
    while (hi - lo > 1e-8 * hi) {
        double mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

size_t find_q1(const MomentProfile& p) {
    for (size_t i = 0; i < p.q_grid.size(); ++i) {
        if (std::abs(p.q_grid[i] - 1.0) < 1e-12) return i;
    }
    throw InvalidInput("moment profile must contain q=1");
}

}  // namespace

double psi2_constant(const MomentProfile& p) {
    size_t i1 = find_q1(p);
    double m1 = p.values[i1];
    double vmax = *std::max_element(p.values.begin(), p.values.end());
    if (!(m1 > 0.0) || m1 < 1e-9 * vmax) {
        throw NumericError("psi2_constant: degenerate direction (m_1 ~ 0)");
    }
    double best = 0.0;
    for (size_t i = 0; i < p.q_grid.size(); ++i) {
        if (!p.trusted[i]) continue;
        best = std::max(best, p.values[i] / (std::sqrt(p.q_grid[i]) * m1));
    }
    return best;
}

double psi1_borell_report(const MomentProfile& p) {
    size_t i1 = find_q1(p);
    double m1 = p.values[i1];
    if (m1 <= 1e-300) throw NumericError("psi1_borell_report: degenerate direction");
    double best = 0.0;
    for (size_t i = 0; i < p.q_grid.size(); ++i) {
        if (!p.trusted[i]) continue;
        best = std::max(best, p.values[i] / (p.q_grid[i] * m1));
    }
    return best;
}

json isotropic_model_to_json(const IsotropicModel& model) {
    json j;
    json shift = json::array();
    for (int i = 0; i < model.shift.size(); ++i) shift.push_back(model.shift(i));
    j["shift"] = std::move(shift);
    json rows = json::array();
    for (int i = 0; i < model.map.rows(); ++i) {
        json row = json::array();
        for (int k = 0; k < model.map.cols(); ++k) row.push_back(model.map(i, k));
        rows.push_back(std::move(row));
    }
    j["map"] = std::move(rows);
    j["L"] = model.L;
    j["convention"] = convention_name(model.convention);
    return j;
}

IsotropicModel isotropic_model_from_json(const json& j) {
    IsotropicModel m;
    const json& js = j.at("shift");
    m.shift.resize((Eigen::Index)js.size());
    for (size_t i = 0; i < js.size(); ++i) m.shift((Eigen::Index)i) = js[i].get<double>();
    const json& jm = j.at("map");
    m.map.resize((Eigen::Index)jm.size(), (Eigen::Index)jm.size());
    for (size_t i = 0; i < jm.size(); ++i) {
        for (size_t k = 0; k < jm[i].size(); ++k) {
            m.map((Eigen::Index)i, (Eigen::Index)k) = jm[i][k].get<double>();
        }
    }
    m.L = j.at("L").get<double>();
    m.convention = j.at("convention").get<std::string>() == "body" ? Convention::Body
                                                                   : Convention::Measure;
    return m;
}

}  // namespace subgauss
