#include "subgauss/sampler.hpp"

#include "subgauss/lp.hpp"
#include "subgauss/rng.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <vector>

namespace subgauss {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'S', 'G', 'C', 'L', 'O', 'U', 'D', '1'};

bool exactly_samplable(const ConvexBody& body) {
    switch (body.kind()) {
        case BodyKind::Ball:
        case BodyKind::Cube:
        case BodyKind::Simplex:
        case BodyKind::CrossPolytope:
        case BodyKind::LpBall:
            return true;
        case BodyKind::LinearImage:
            return exactly_samplable(body.base());
        default:
            return false;
    }
}

Vector sphere_direction(CounterRng& rng, int n) {
    Vector d(n);
    for (;;) {
        for (int i = 0; i < n; ++i) d(i) = rng.next_gaussian();
        double nrm = d.norm();
        if (nrm > 1e-12) return d / nrm;
    }
}

void exact_sample_row(const ConvexBody& body, CounterRng& rng, Eigen::Ref<Eigen::RowVectorXd> row) {
    const int n = body.dim();
    switch (body.kind()) {
        case BodyKind::Ball: {
            Vector d = sphere_direction(rng, n);
            double r = body.radius() * std::pow(rng.next_double_pos(), 1.0 / n);
            row = (r * d).transpose();
            return;
        }
        case BodyKind::Cube: {
            for (int i = 0; i < n; ++i) row(i) = body.side() * (rng.next_double() - 0.5);
            return;
        }
        case BodyKind::Simplex: {
            // Dirichlet(1,...,1) barycentric weights via exponential spacings
            Vector e(n + 1);
            for (int i = 0; i <= n; ++i) e(i) = rng.next_exponential();
            e /= e.sum();
            row = (body.vertices().transpose() * e).transpose();
            return;
        }
        case BodyKind::CrossPolytope: {
            // cone measure on the l1 sphere (normalized Laplace) + radial factor
            double s = 0.0;
            for (int i = 0; i < n; ++i) {
                double lap = rng.next_exponential();
                double sign = rng.next_double() < 0.5 ? -1.0 : 1.0;
                row(i) = sign * lap;
                s += lap;
            }
            double r = std::pow(rng.next_double_pos(), 1.0 / n);
            row *= r / s;
            return;
        }
        case BodyKind::LpBall: {
            double p = body.lp_exponent();
            double s = 0.0;
            for (int i = 0; i < n; ++i) {
                double g = rng.next_gamma(1.0 / p);
                double t = std::pow(g, 1.0 / p);
                double sign = rng.next_double() < 0.5 ? -1.0 : 1.0;
                row(i) = sign * t;
                s += std::pow(t, p);
            }
            double r = std::pow(rng.next_double_pos(), 1.0 / n);
            row *= r / std::pow(s, 1.0 / p);
            return;
        }
        case BodyKind::LinearImage: {
            exact_sample_row(body.base(), rng, row);
            row = (body.map() * row.transpose() + body.shift()).transpose();
            return;
        }
        default:
            throw InvalidInput("exact sampler: unsupported kind");
    }
}

Vector interior_point(const ConvexBody& body) {
    switch (body.kind()) {
        case BodyKind::HPolytope: {
            ChebyshevResult cc = chebyshev_center(body.A(), body.b());
            if (!cc.feasible || cc.radius <= 1e-12) {
                throw NumericError("sampler: no interior point found");
            }
            return cc.center;
        }
        case BodyKind::VPolytope:
            return body.vertices().colwise().mean().transpose();
        case BodyKind::LinearImage:
            return body.map() * interior_point(body.base()) + body.shift();
        default:
            return Vector::Zero(body.dim());
    }
}

// Chord of the body through y along unit d: returns (t_lo, t_hi).
void chord(const ConvexBody& body, const Vector& y, const Vector& d, double& t_lo, double& t_hi) {
    if (body.kind() == BodyKind::HPolytope) {
        const Matrix& A = body.A();
        const Vector& b = body.b();
        t_lo = -std::numeric_limits<double>::infinity();
        t_hi = std::numeric_limits<double>::infinity();
        Vector Ad = A * d;
        Vector slack = b - A * y;
        for (int i = 0; i < A.rows(); ++i) {
            if (Ad(i) > 1e-14) t_hi = std::min(t_hi, slack(i) / Ad(i));
            else if (Ad(i) < -1e-14) t_lo = std::max(t_lo, slack(i) / Ad(i));
        }
        if (!std::isfinite(t_lo) || !std::isfinite(t_hi)) {
            throw NumericError("hit-and-run: unbounded chord (polytope unbounded)");
        }
        return;
    }
    // membership-oracle bisection, tolerance 1e-10
    auto boundary = [&](double sgn) {
        double inside = 0.0;
        double outside = sgn;
        int guard = 0;
        while (membership(body, y + outside * d, 0.0)) {
            inside = outside;
            outside *= 2.0;
            if (++guard > 600) throw NumericError("hit-and-run: body appears unbounded");
        }
        while (std::abs(outside - inside) > 1e-10) {
            double mid = 0.5 * (inside + outside);
            if (membership(body, y + mid * d, 0.0)) inside = mid;
            else outside = mid;
        }
        return inside;
    };
    t_hi = boundary(1.0);
    t_lo = boundary(-1.0);
}

void hit_and_run_chain(const ConvexBody& body, Eigen::Index count, CounterRng& rng, int burn_in,
                       int thinning, Matrix& out, Eigen::Index row0) {
    const int n = body.dim();
    Vector y = interior_point(body);
    auto step = [&]() {
        Vector d = sphere_direction(rng, n);
        double t_lo, t_hi;
        chord(body, y, d, t_lo, t_hi);
        double u = rng.next_double();
        y += (t_lo + u * (t_hi - t_lo)) * d;
    };
    for (int i = 0; i < burn_in; ++i) step();
    for (Eigen::Index k = 0; k < count; ++k) {
        for (int i = 0; i < thinning; ++i) step();
        out.row(row0 + k) = y.transpose();
    }
}

void chain_layout(Eigen::Index count, int chains, std::vector<Eigen::Index>& lens) {
    lens.assign((size_t)chains, count / chains);
    for (Eigen::Index r = 0; r < count % chains; ++r) ++lens[(size_t)r];
}

}  // namespace

SampleCloud sample_uniform(const ConvexBody& body, Eigen::Index count, std::uint64_t seed,
                           const SamplerOptions& opts) {
    if (count < 1) throw InvalidInput("sample_uniform: N must be >= 1");
    const int n = body.dim();
    SampleCloud cloud;
    cloud.seed = seed;
    cloud.source = json{{"body", body_to_json(body)}}.dump();
    cloud.points.resize(count, n);
    const bool exact = exactly_samplable(body) && !opts.force_hit_and_run;
    if (exact) {
        cloud.sampler = SamplerKind::Exact;
        CounterRng rng(seed, 0);
        for (Eigen::Index i = 0; i < count; ++i) exact_sample_row(body, rng, cloud.points.row(i));
        return cloud;
    }
    cloud.sampler = SamplerKind::HitAndRun;
    cloud.burn_in = opts.burn_in >= 0 ? opts.burn_in : 5 * n * n;
    cloud.thinning = opts.thinning >= 0 ? std::max(1, opts.thinning) : n;
    cloud.chains = std::max(1, opts.chains);
    std::vector<Eigen::Index> lens;
    chain_layout(count, cloud.chains, lens);
    Eigen::Index row0 = 0;
    for (int c = 0; c < cloud.chains; ++c) {
        CounterRng rng(seed, (std::uint64_t)c);
        hit_and_run_chain(body, lens[(size_t)c], rng, cloud.burn_in, cloud.thinning, cloud.points,
                          row0);
        row0 += lens[(size_t)c];
    }
    return cloud;
}

LogConcaveSpec LogConcaveSpec::gaussian(Matrix cov) {
    if (cov.rows() != cov.cols() || cov.rows() < 1) {
        throw InvalidInput("gaussian: covariance must be square");
    }
    LogConcaveSpec s;
    s.family = Family::Gaussian;
    s.dim = (int)cov.rows();
    s.cov = std::move(cov);
    Eigen::LLT<Matrix> llt(s.cov);
    if (llt.info() != Eigen::Success) {
        throw InvalidInput("gaussian: covariance not positive definite (not log-concave)");
    }
    return s;
}

LogConcaveSpec LogConcaveSpec::gaussian_std(int n) { return gaussian(Matrix::Identity(n, n)); }

LogConcaveSpec LogConcaveSpec::product_exponential(Vector rates) {
    if (rates.size() < 1 || rates.minCoeff() <= 0) {
        throw InvalidInput("product_exponential: rates must be positive");
    }
    LogConcaveSpec s;
    s.family = Family::ProductExponential;
    s.dim = (int)rates.size();
    s.rates = std::move(rates);
    return s;
}

LogConcaveSpec LogConcaveSpec::product_exponential(int n, double rate) {
    return product_exponential(Vector::Constant(n, rate));
}

LogConcaveSpec LogConcaveSpec::uniform_body(ConvexBody body) {
    LogConcaveSpec s;
    s.family = Family::UniformBody;
    s.dim = body.dim();
    s.body = std::make_shared<ConvexBody>(std::move(body));
    return s;
}

LogConcaveSpec logconcave_from_json(const json& spec, const std::string& path) {
    if (!spec.is_object() || !spec.contains("family") || !spec["family"].is_string()) {
        throw InvalidInput(path + ".family: expected string");
    }
    std::string family = spec["family"].get<std::string>();
    if (family == "gaussian") {
        if (spec.contains("cov")) {
            const json& jc = spec["cov"];
            if (!jc.is_array()) throw InvalidInput(path + ".cov: expected matrix");
            Matrix cov((Eigen::Index)jc.size(), (Eigen::Index)jc.size());
            for (size_t i = 0; i < jc.size(); ++i) {
                if (!jc[i].is_array() || jc[i].size() != jc.size()) {
                    throw InvalidInput(path + ".cov[" + std::to_string(i) + "]: expected square row");
                }
                for (size_t k = 0; k < jc[i].size(); ++k) {
                    cov((Eigen::Index)i, (Eigen::Index)k) = jc[i][k].get<double>();
                }
            }
            return LogConcaveSpec::gaussian(std::move(cov));
        }
        if (!spec.contains("dim") || !spec["dim"].is_number_integer()) {
            throw InvalidInput(path + ".dim: required when cov omitted");
        }
        return LogConcaveSpec::gaussian_std(spec["dim"].get<int>());
    }
    if (family == "product_exponential") {
        if (spec.contains("rates")) {
            const json& jr = spec["rates"];
            Vector rates((Eigen::Index)jr.size());
            for (size_t i = 0; i < jr.size(); ++i) {
                if (!jr[i].is_number()) {
                    throw InvalidInput(path + ".rates[" + std::to_string(i) + "]: expected number");
                }
                rates((Eigen::Index)i) = jr[i].get<double>();
            }
            return LogConcaveSpec::product_exponential(std::move(rates));
        }
        if (!spec.contains("dim") || !spec["dim"].is_number_integer()) {
            throw InvalidInput(path + ".dim: required when rates omitted");
        }
        double rate = spec.value("rate", 1.0);
        return LogConcaveSpec::product_exponential(spec["dim"].get<int>(), rate);
    }
    if (family == "uniform_body") {
        if (!spec.contains("body")) throw InvalidInput(path + ".body: required");
        return LogConcaveSpec::uniform_body(body_from_json(spec["body"], path + ".body"));
    }
    throw InvalidInput(path + ".family: unknown family \"" + family + "\"");
}

json logconcave_to_json(const LogConcaveSpec& spec) {
    json j;
    switch (spec.family) {
        case LogConcaveSpec::Family::Gaussian: {
            j["family"] = "gaussian";
            j["dim"] = spec.dim;
            json rows = json::array();
            for (int i = 0; i < spec.cov.rows(); ++i) {
                json row = json::array();
                for (int k = 0; k < spec.cov.cols(); ++k) row.push_back(spec.cov(i, k));
                rows.push_back(std::move(row));
            }
            j["cov"] = std::move(rows);
            break;
        }
        case LogConcaveSpec::Family::ProductExponential: {
            j["family"] = "product_exponential";
            j["dim"] = spec.dim;
            json rates = json::array();
            for (int i = 0; i < spec.rates.size(); ++i) rates.push_back(spec.rates(i));
            j["rates"] = std::move(rates);
            break;
        }
        case LogConcaveSpec::Family::UniformBody:
            j["family"] = "uniform_body";
            j["dim"] = spec.dim;
            j["body"] = body_to_json(*spec.body);
            break;
    }
    return j;
}

SampleCloud sample_logconcave(const LogConcaveSpec& spec, Eigen::Index count, std::uint64_t seed,
                              const SamplerOptions& opts) {
    if (count < 1) throw InvalidInput("sample_logconcave: N must be >= 1");
    if (spec.family == LogConcaveSpec::Family::UniformBody) {
        return sample_uniform(*spec.body, count, seed, opts);
    }
    SampleCloud cloud;
    cloud.seed = seed;
    cloud.source = json{{"measure", logconcave_to_json(spec)}}.dump();
    cloud.sampler = SamplerKind::Exact;
    cloud.points.resize(count, spec.dim);
    CounterRng rng(seed, 0);
    if (spec.family == LogConcaveSpec::Family::Gaussian) {
        Eigen::LLT<Matrix> llt(spec.cov);
        Matrix L = llt.matrixL();
        Vector g(spec.dim);
        for (Eigen::Index i = 0; i < count; ++i) {
            for (int k = 0; k < spec.dim; ++k) g(k) = rng.next_gaussian();
            cloud.points.row(i) = (L * g).transpose();
        }
    } else {  // centered product exponential
        for (Eigen::Index i = 0; i < count; ++i) {
            for (int k = 0; k < spec.dim; ++k) {
                cloud.points(i, k) = (rng.next_exponential() - 1.0) / spec.rates(k);
            }
        }
    }
    return cloud;
}

CloudDiagnostics diagnostics(const SampleCloud& cloud) {
    const Eigen::Index N = cloud.size();
    if (N < 100) throw InvalidInput("diagnostics: need at least 100 points");
    const int n = cloud.dim();
    CloudDiagnostics d;
    d.mean = cloud.points.colwise().mean().transpose();
    Matrix centered = cloud.points.rowwise() - d.mean.transpose();
    d.variance = centered.array().square().colwise().mean().transpose();
    d.mcmc = cloud.sampler == SamplerKind::HitAndRun;

    // lag-1 within chains
    std::vector<Eigen::Index> lens;
    chain_layout(N, std::max(1, cloud.chains), lens);
    d.lag1 = Vector::Zero(n);
    Vector denom = Vector::Zero(n);
    Eigen::Index row0 = 0;
    for (Eigen::Index len : lens) {
        if (len >= 2) {
            for (int j = 0; j < n; ++j) {
                auto seg = centered.col(j).segment(row0, len);
                d.lag1(j) += seg.head(len - 1).dot(seg.tail(len - 1));
                denom(j) += seg.squaredNorm();
            }
        }
        row0 += len;
    }
    double scale = d.variance.maxCoeff();
    d.degenerate = d.variance.minCoeff() <= 1e-14 * std::max(1.0, scale);
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        d.lag1(j) = denom(j) > 0 ? d.lag1(j) / denom(j) : 0.0;
        worst = std::max(worst, d.lag1(j));
    }
    d.autocorr_flag = d.lag1.cwiseAbs().maxCoeff() > 0.2;
    double rho = std::min(0.999, std::max(0.0, worst));
    d.ess = (double)N * (1.0 - rho) / (1.0 + rho);
    return d;
}

void save_cloud(const SampleCloud& cloud, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw NumericError("save_cloud: cannot open " + path);
    f.write(kMagic, 8);
    auto w64 = [&](std::uint64_t v) { f.write(reinterpret_cast<const char*>(&v), 8); };
    auto w32 = [&](std::uint32_t v) { f.write(reinterpret_cast<const char*>(&v), 4); };
    w64((std::uint64_t)cloud.dim());
    w64((std::uint64_t)cloud.size());
    w64(cloud.seed);
    w32(cloud.sampler == SamplerKind::Exact ? 0u : 1u);
    w32((std::uint32_t)cloud.burn_in);
    w32((std::uint32_t)cloud.thinning);
    w32((std::uint32_t)cloud.chains);
    w64((std::uint64_t)cloud.source.size());
    f.write(cloud.source.data(), (std::streamsize)cloud.source.size());
    // row-major little-endian doubles (host is little-endian)
    for (Eigen::Index i = 0; i < cloud.size(); ++i) {
        for (int j = 0; j < cloud.dim(); ++j) {
            double v = cloud.points(i, j);
            f.write(reinterpret_cast<const char*>(&v), 8);
        }
    }
    if (!f) throw NumericError("save_cloud: write failed for " + path);
}

SampleCloud load_cloud(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw NumericError("load_cloud: cannot open " + path);
    char magic[8];
    f.read(magic, 8);
    if (std::memcmp(magic, kMagic, 8) != 0) throw NumericError("load_cloud: bad magic in " + path);
    auto r64 = [&]() {
        std::uint64_t v = 0;
        f.read(reinterpret_cast<char*>(&v), 8);
        return v;
    };
    auto r32 = [&]() {
        std::uint32_t v = 0;
        f.read(reinterpret_cast<char*>(&v), 4);
        return v;
    };
    SampleCloud cloud;
    std::uint64_t dim = r64();
    std::uint64_t N = r64();
    cloud.seed = r64();
    cloud.sampler = r32() == 0 ? SamplerKind::Exact : SamplerKind::HitAndRun;
    cloud.burn_in = (int)r32();
    cloud.thinning = (int)r32();
    cloud.chains = (int)r32();
    std::uint64_t slen = r64();
    cloud.source.resize(slen);
    f.read(cloud.source.data(), (std::streamsize)slen);
    cloud.points.resize((Eigen::Index)N, (Eigen::Index)dim);
    for (Eigen::Index i = 0; i < (Eigen::Index)N; ++i) {
        for (Eigen::Index j = 0; j < (Eigen::Index)dim; ++j) {
            double v;
            f.read(reinterpret_cast<char*>(&v), 8);
            cloud.points(i, j) = v;
        }
    }
    if (!f) throw NumericError("load_cloud: truncated file " + path);
    return cloud;
}

void save_cloud_csv(const SampleCloud& cloud, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw NumericError("save_cloud_csv: cannot open " + path);
    for (int j = 0; j < cloud.dim(); ++j) f << (j ? ",x" : "x") << j;
    f << "\n";
    char buf[32];
    for (Eigen::Index i = 0; i < cloud.size(); ++i) {
        for (int j = 0; j < cloud.dim(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", cloud.points(i, j));
            f << (j ? "," : "") << buf;
        }
        f << "\n";
    }
}

}  // namespace subgauss
