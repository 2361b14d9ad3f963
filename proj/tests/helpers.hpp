#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "multitone/signal.hpp"

// Brute-force oracles used to pin the fast paths. Kept independent of the
// library implementations they check.
namespace oracle {

using multitone::Complex;
using multitone::SampleBuffer;

inline std::vector<Complex> dft_direct(const SampleBuffer& x) {
    const std::size_t n = x.size();
    std::vector<Complex> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        Complex acc{0.0, 0.0};
        for (std::size_t m = 0; m < n; ++m) {
            double phase = -2.0 * std::numbers::pi *
                           static_cast<double>(k) * static_cast<double>(m) /
                           static_cast<double>(n);
            acc += x[m] * std::polar(1.0, phase);
        }
        out[k] = acc;
    }
    return out;
}

inline Complex coefficient_direct(const SampleBuffer& x, double location) {
    const auto n = static_cast<double>(x.size());
    Complex acc{0.0, 0.0};
    for (std::size_t m = 0; m < x.size(); ++m) {
        double phase =
            -2.0 * std::numbers::pi * location * static_cast<double>(m) / n;
        acc += x[m] * std::polar(1.0, phase);
    }
    return acc / n;
}

// Closed-form single-tone coefficient at m_hat +/- 0.5 for a tone with
// residual delta relative to m_hat: (A/N)(1+e^{j2pi delta}) /
// (1 - e^{j(2pi/N)(delta -+ 0.5)}).
inline Complex half_bin_coefficient(Complex amp, double delta, int n,
                                    bool plus) {
    double half = plus ? 0.5 : -0.5;
    Complex num = 1.0 + std::polar(1.0, 2.0 * std::numbers::pi * delta);
    Complex den = 1.0 - std::polar(1.0, 2.0 * std::numbers::pi / n *
                                            (delta - half));
    return amp / static_cast<double>(n) * num / den;
}

inline SampleBuffer random_buffer(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SampleBuffer x(n);
    for (Complex& s : x) {
        s = Complex{u(rng), u(rng)};
    }
    return x;
}

inline double rel_error(Complex got, Complex want) {
    double scale = std::max(std::abs(want), 1e-30);
    return std::abs(got - want) / scale;
}

} // namespace oracle
