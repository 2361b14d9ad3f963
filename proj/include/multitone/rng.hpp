#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace multitone {

// splitmix64 finalizer; used to derive independent per-run seeds so Monte
// Carlo runs are reproducible regardless of execution order.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t counter) {
    return mix64(base ^ mix64(counter));
}

// Gaussian draws on top of mt19937_64 with a hand-rolled Box-Muller, so the
// output stream depends only on the seed and not on the standard library's
// normal_distribution implementation.
class GaussianRng {
public:
    explicit GaussianRng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Circular complex Gaussian with E|z|^2 = variance (sigma^2/2 per part).
    std::complex<double> complex_gaussian(double variance) {
        double u1 = 1.0 - uniform(); // (0, 1]
        double u2 = uniform();
        double r = std::sqrt(-variance * std::log(u1));
        return std::polar(r, 2.0 * 3.14159265358979323846 * u2);
    }

private:
    std::mt19937_64 engine_;
};

} // namespace multitone
