#ifndef GSAMPLER_RNG_HPP
#define GSAMPLER_RNG_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace gsampler {

// Deterministic draws across platforms: std::mt19937_64 plus hand-rolled
// transforms (libstdc++/libc++ distributions differ, which would break
// byte-identical reruns).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    // Integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Rejection-free would bias tiny amounts; rejection keeps it exact.
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t v;
        do { v = gen_(); } while (v >= limit);
        return v % n;
    }

    // Box-Muller, one value per call (the pair's second half is discarded so
    // the draw count stays predictable).
    double normal() {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    std::mt19937_64& engine() { return gen_; }

  private:
    std::mt19937_64 gen_;
};

} // namespace gsampler

#endif
