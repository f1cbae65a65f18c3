#pragma once

#include <cmath>
#include <cstdint>

namespace subgauss {

// Counter-based splittable generator (SplitMix64 output function over a
// per-stream key). The i-th draw of stream s under master seed m is a pure
// function of (m, s, i), so parallel chains reproduce independent of
// scheduling and a stream can be replayed from any offset.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(stream_key(seed, stream)), counter_(0) {}

    static std::uint64_t mix64(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream) {
        return mix64(seed + 0x9e3779b97f4a7c15ULL * (stream + 1)) ^ mix64(~stream);
    }

    std::uint64_t next_u64() {
        std::uint64_t z = key_ + (++counter_) * 0x9e3779b97f4a7c15ULL;
        return mix64(z);
    }

    /// Uniform in [0,1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform in (0,1]; safe as log() argument.
    double next_double_pos() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller (explicit transform; the sequence is
    /// part of the reproducibility contract, so no std::normal_distribution).
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_double_pos();
        double u2 = next_double();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Exp(1) variate.
    double next_exponential() { return -std::log(next_double_pos()); }

    /// Gamma(shape,1) via Marsaglia-Tsang, boosted for shape < 1.
    double next_gamma(double shape) {
        if (shape < 1.0) {
            double u = next_double_pos();
            return next_gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        double d = shape - 1.0 / 3.0;
        double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = next_gaussian();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            double u = next_double_pos();
            if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
                return d * v;
            }
        }
    }

    std::uint64_t counter() const { return counter_; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace subgauss
