#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <json.hpp>

namespace multitone {

using Complex = std::complex<double>;
using SampleBuffer = std::vector<Complex>;

// Wrap a normalized frequency into [-0.5, 0.5).
double wrap_frequency(double f);

// Wrapped difference f_a - f_b in [-0.5, 0.5).
double wrap_frequency_delta(double fa, double fb);

// One complex exponential: amplitude a*e^{j*phi}, frequency in cycles/sample.
struct Tone {
    Complex amplitude{1.0, 0.0};
    double frequency = 0.0;
};

struct Scenario {
    std::vector<Tone> tones;
    int num_samples = 0;
    double noise_variance = 0.0; // total complex variance sigma^2

    // Throws ConfigError on violated invariants.
    void validate() const;

    nlohmann::json to_json() const;
    static Scenario from_json(const nlohmann::json& j);
};

// sigma^2 = amplitude_mag^2 / 10^(snr_db/10)
double snr_to_noise_variance(double amplitude_mag, double snr_db);

double noise_variance_to_snr_db(double amplitude_mag, double noise_variance);

// x(n) = sum_l A_l e^{j 2 pi f_l n} + w(n), w circular complex Gaussian with
// E|w|^2 = sigma^2. Deterministic for a fixed (scenario, seed).
SampleBuffer synthesize(const Scenario& scenario, std::uint64_t seed);

} // namespace multitone
