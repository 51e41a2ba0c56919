#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace tcspc {

// splitmix64; used to derive independent per-stream seeds from one root seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream, std::uint64_t index) {
    return splitmix64(splitmix64(root ^ splitmix64(stream)) + index);
}

/**
 * Deterministic random source. The engine is std::mt19937_64 (its output
 * sequence is pinned by the standard); every variate transform is done by
 * hand so that streams are reproducible across standard-library versions.
 */
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t raw() { return eng_(); }

    // uniform on (0, 1]; never returns 0, so log() is always safe
    double uniform() {
        return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform() <= p; }

    // inverse-CDF exponential sample, mean = 1/rate
    double exponential(double rate) { return -std::log(uniform()) / rate; }

    // Knuth multiplication method; intended for small means (< ~30)
    int poisson(double mean) {
        const double limit = std::exp(-mean);
        int n = 0;
        double prod = uniform();
        while (prod > limit) {
            ++n;
            prod *= uniform();
        }
        return n;
    }

    // Box-Muller, single draw (no cached spare, keeps draw order simple)
    double normal(double sigma) {
        const double u1 = uniform();
        const double u2 = uniform();
        return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace tcspc
