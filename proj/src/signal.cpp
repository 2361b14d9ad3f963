#include "multitone/signal.hpp"

#include <cmath>
#include <numbers>

#include "multitone/errors.hpp"
#include "multitone/kernels.hpp"
#include "multitone/rng.hpp"

namespace multitone {

double wrap_frequency(double f) {
    double w = f - std::floor(f + 0.5);
    if (w >= 0.5) {
        w -= 1.0; // floor rounding at the boundary
    }
    return w;
}

double wrap_frequency_delta(double fa, double fb) {
    return wrap_frequency(fa - fb);
}

void Scenario::validate() const {
    if (tones.empty()) {
        throw ConfigError("scenario needs at least one tone");
    }
    if (num_samples < 8) {
        throw ConfigError("num_samples must be >= 8");
    }
    if (noise_variance < 0.0) {
        throw ConfigError("noise_variance must be >= 0");
    }
    for (const Tone& t : tones) {
        if (std::abs(t.amplitude) <= 0.0) {
            throw ConfigError("tone amplitude must be nonzero");
        }
        if (t.frequency < -0.5 || t.frequency > 0.5) {
            throw ConfigError("tone frequency must lie in [-0.5, 0.5]");
        }
    }
    for (std::size_t p = 0; p < tones.size(); ++p) {
        for (std::size_t l = p + 1; l < tones.size(); ++l) {
            if (wrap_frequency_delta(tones[p].frequency, tones[l].frequency) == 0.0) {
                throw ConfigError("tones share a frequency");
            }
        }
    }
}

nlohmann::json Scenario::to_json() const {
    nlohmann::json jt = nlohmann::json::array();
    for (const Tone& t : tones) {
        jt.push_back({{"amp", std::abs(t.amplitude)},
                      {"phase_rad", std::arg(t.amplitude)},
                      {"freq", t.frequency}});
    }
    return {{"n", num_samples}, {"noise_variance", noise_variance}, {"tones", jt}};
}

Scenario Scenario::from_json(const nlohmann::json& j) {
    Scenario s;
    s.num_samples = j.at("n").get<int>();
    s.noise_variance = j.at("noise_variance").get<double>();
    for (const auto& jt : j.at("tones")) {
        Tone t;
        t.amplitude = std::polar(jt.at("amp").get<double>(),
                                 jt.value("phase_rad", 0.0));
        t.frequency = jt.at("freq").get<double>();
        s.tones.push_back(t);
    }
    s.validate();
    return s;
}

double snr_to_noise_variance(double amplitude_mag, double snr_db) {
    if (amplitude_mag <= 0.0) {
        throw ConfigError("amplitude magnitude must be positive");
    }
    return amplitude_mag * amplitude_mag / std::pow(10.0, snr_db / 10.0);
}

double noise_variance_to_snr_db(double amplitude_mag, double noise_variance) {
    return 10.0 * std::log10(amplitude_mag * amplitude_mag / noise_variance);
}

SampleBuffer synthesize(const Scenario& scenario, std::uint64_t seed) {
    scenario.validate();
    const int n = scenario.num_samples;
    SampleBuffer x(static_cast<std::size_t>(n), Complex{0.0, 0.0});
    for (const Tone& t : scenario.tones) {
        double omega = 2.0 * std::numbers::pi * wrap_frequency(t.frequency);
        kernels::add_tone(x, t.amplitude, omega);
    }
    if (scenario.noise_variance > 0.0) {
        GaussianRng rng(seed);
        for (Complex& s : x) {
            s += rng.complex_gaussian(scenario.noise_variance);
        }
    }
    return x;
}

} // namespace multitone
