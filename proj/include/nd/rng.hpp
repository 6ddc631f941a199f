#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace nd {

// SplitMix64 finalizer; full-avalanche mix of a 64-bit word.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Counter-based splittable RNG. A generator is a (key, counter) pair; output i
// is mix64(key + i*gamma), i.e. the SplitMix64 stream for that key. Streams for
// sub-tasks are derived by hashing labels into the key, so any (seed, labels...)
// path yields the same values regardless of call order or thread placement.
class Rng {
  public:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;

    explicit Rng(std::uint64_t seed) : key_(mix64(seed + kGamma)) {}

    // Child generator for an independent labeled stream.
    Rng split(std::uint64_t label) const {
        Rng child(0);
        child.key_ = mix64(key_ ^ mix64(label + 0x6a09e667f3bcc909ull));
        child.ctr_ = 0;
        return child;
    }
    Rng split(std::uint64_t a, std::uint64_t b) const { return split(a).split(b); }

    std::uint64_t next_u64() { return mix64(key_ + kGamma * ++ctr_); }

    // Uniform on [0,1).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0,1); both u and 1-u stay strictly inside, so logs and
    // antithetic mirrors are always finite.
    double next_unit_open() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller (consumes two uniforms, no caching).
    double next_gauss() {
        const double u1 = next_unit_open();
        const double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    bool next_bernoulli(double p) { return next_unit() < p; }

    // Poisson by Knuth's product method, chunked so exp(-lambda) never underflows.
    std::uint64_t next_poisson(double mean) {
        std::uint64_t total = 0;
        while (mean > 500.0) {
            total += poisson_knuth(500.0);
            mean -= 500.0;
        }
        return total + poisson_knuth(mean);
    }

  private:
    std::uint64_t poisson_knuth(double lambda) {
        if (lambda <= 0.0) return 0;
        const double limit = std::exp(-lambda);
        double prod = next_unit_open();
        std::uint64_t n = 0;
        while (prod > limit) {
            prod *= next_unit_open();
            ++n;
        }
        return n;
    }

    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
};

}  // namespace nd
