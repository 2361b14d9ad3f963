#pragma once

#include <complex>
#include <cstddef>
#include <span>

// Data-parallel inner loops shared by the synthesizer and the fractional
// Fourier coefficient evaluation. Scalar reference implementations are
// always available; an AVX2 variant is selected at runtime on x86-64.
// Set MULTITONE_KERNELS=scalar to force the reference path.

namespace multitone::kernels {

using Complex = std::complex<double>;

// sum_n x[n] * exp(-i * omega * n)
Complex cexp_dot(std::span<const Complex> x, double omega);
Complex cexp_dot_scalar(std::span<const Complex> x, double omega);

// y[n] += amp * exp(i * omega * n)
void add_tone(std::span<Complex> y, Complex amp, double omega);
void add_tone_scalar(std::span<Complex> y, Complex amp, double omega);

// Name of the backend the dispatcher picked ("avx2" or "scalar").
const char* active_backend();

} // namespace multitone::kernels
