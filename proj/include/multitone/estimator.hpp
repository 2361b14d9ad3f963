#pragma once

#include "multitone/signal.hpp"

#include <json.hpp>

namespace multitone {

// Per-component running state: frequency is (coarse_bin + residual)/N.
struct ToneEstimate {
    int coarse_bin = 0;
    double residual = 0.0; // bins, in [-0.5, 0.5]
    Complex amplitude{0.0, 0.0};

    double position_bins() const { return coarse_bin + residual; }
    double frequency(int n) const {
        return wrap_frequency(position_bins() / static_cast<double>(n));
    }
};

struct EstimatorConfig {
    int num_components = 1;
    int max_iterations = 2;
    // Early-stop threshold on the residual change between iterations, in
    // bins; 0 disables early stopping.
    double stop_tolerance_bins = 0.0;
};

struct EstimationResult {
    std::vector<ToneEstimate> estimates; // discovery order
    int iterations_run = 0;
    std::vector<std::vector<double>> residual_history; // per iteration

    nlohmann::json to_json(int n) const;
};

// A&M interpolator on a pair of Fourier coefficients taken half a bin either
// side of the current location. Returns the remaining residual in bins,
// clamped to [-0.5, 0.5].
double am_interpolate(Complex coef_minus, Complex coef_plus, int n);

// Closed-form leakage of an estimated tone at a fractional bin location.
// Throws CoincidentFrequencyError when the source sits on the target.
Complex leakage_term(const ToneEstimate& source, double target_location_bins,
                     int n);

// Normalized coefficient at own_freq minus the closed-form leakage of every
// other component. own_freq in cycles/sample; others positioned via their
// (coarse_bin, residual) state.
Complex estimate_amplitude(const SampleBuffer& buffer, double own_freq,
                           const std::vector<ToneEstimate>& others);

// Iterative multi-component estimation with leakage subtraction.
EstimationResult estimate(const SampleBuffer& buffer,
                          const EstimatorConfig& config);

// Same loop with every leakage term forced to zero (per-component A&M on the
// raw coefficients); the baseline the subtraction is measured against.
EstimationResult estimate_no_subtraction(const SampleBuffer& buffer,
                                         const EstimatorConfig& config);

} // namespace multitone
