#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace geols {

/// SplitMix64 stream. Pinned as the project-wide generator so that a seed
/// produces the same sequence on every platform; the standard library
/// distributions carry no such guarantee.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    /// Derive an independent stream, e.g. one per Monte-Carlo trial.
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t index) {
        Rng r(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
        return r.next_u64();
    }

    /// Poisson sample: CDF inversion for small rates, rejection around the
    /// normal approximation (heavy-tailed comparison function) above.
    std::uint64_t next_poisson(double lambda) {
        if (lambda <= 0.0) return 0;
        if (lambda <= 30.0) {
            const double limit = std::exp(-lambda);
            double prod = next_double();
            std::uint64_t k = 0;
            while (prod > limit) {
                ++k;
                prod *= next_double();
            }
            return k;
        }
        const double sq = std::sqrt(2.0 * lambda);
        const double loglam = std::log(lambda);
        const double g = lambda * loglam - std::lgamma(lambda + 1.0);
        while (true) {
            double y, em;
            do {
                y = std::tan(std::numbers::pi * next_double());
                em = sq * y + lambda;
            } while (em < 0.0);
            em = std::floor(em);
            const double t = 0.9 * (1.0 + y * y) * std::exp(em * loglam - std::lgamma(em + 1.0) - g);
            if (next_double() <= t) return static_cast<std::uint64_t>(em);
        }
    }

  private:
    std::uint64_t state_;
};

}  // namespace geols
