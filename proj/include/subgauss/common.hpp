#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace subgauss {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr const char* kToolkitVersion = "0.1.0";

/// Precondition / input validation failure (bad arguments, bad config).
struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Numeric failure (bracket not found, SE blowup, degenerate data).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// FNV-1a 64-bit. Stable across platforms; used for config/body hashes.
inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

/// Volume of the Euclidean unit ball B_2^n.
double unit_ball_volume(int n);

/// log Gamma wrapper (positive arguments).
double log_gamma(double x);

/// q-norm of the 1-d marginal of the uniform measure on the volume-one
/// Euclidean ball in R^n, i.e. h_{Z_q(ball)}(theta) for any unit theta.
double ball_marginal_qnorm(int n, double q);

/// q-norm of a standard Gaussian: (E|g|^q)^{1/q}.
double gaussian_qnorm(double q);

}  // namespace subgauss
