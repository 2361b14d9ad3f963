#pragma once

#include "multitone/signal.hpp"

namespace multitone {

// Unnormalized N-point DFT values X(k), k = 0..N-1.
using Spectrum = std::vector<Complex>;

// bins[k] = sum_n x(n) e^{-j 2 pi k n / N}. Any N >= 1 (mixed radix).
Spectrum dft(const SampleBuffer& buffer);

// (1/N) sum_n x(n) e^{-j 2 pi location n / N} for any real bin location.
// Note the 1/N here, absent from dft().
Complex coefficient_at(const SampleBuffer& buffer, double location);

// argmax_k |X(k)|^2, ties broken by smallest k.
int coarse_peak(const Spectrum& spectrum);

// Closed-form normalized Fourier coefficient of a pure tone with complex
// amplitude `amp` at fractional bin position `source_bins`, evaluated at
// fractional bin `target_bins` (Dirichlet kernel). Exact for any real
// locations; equals `amp` when the locations coincide mod N.
Complex tone_coefficient(Complex amp, double source_bins, double target_bins,
                         int n);

} // namespace multitone
