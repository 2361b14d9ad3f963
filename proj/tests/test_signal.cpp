#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "multitone/errors.hpp"
#include "multitone/rng.hpp"
#include "multitone/signal.hpp"

using namespace multitone;

namespace {

Scenario benchmark15_scenario() {
    // L = 15, N = 64, component 1 at 5 dB sets sigma^2 for all.
    const double amps[] = {1.0000, 0.6379, 0.3825, 0.8980, 0.6046,
                           0.9748, 0.4310, 0.5777, 0.9284, 0.8939,
                           0.3282, 0.4311, 0.6182, 0.8352, 0.8690};
    const double freqs[] = {-0.3071, -0.2623, -0.2082, -0.1609, -0.1204,
                            -0.0855, -0.0414, -0.0080, 0.0404,  0.0785,
                            0.1098,  0.1655,  0.2166,  0.2683,  0.3148};
    Scenario s;
    s.num_samples = 64;
    s.noise_variance = snr_to_noise_variance(1.0, 5.0);
    for (int l = 0; l < 15; ++l) {
        s.tones.push_back({Complex{amps[l], 0.0}, freqs[l]});
    }
    return s;
}

} // namespace

TEST_CASE("constant exponential") {
    Scenario s{{{Complex{1.0, 0.0}, 0.0}}, 8, 0.0};
    auto x = synthesize(s, 1);
    for (const Complex& v : x) {
        CHECK(std::abs(v - Complex{1.0, 0.0}) < 1e-15);
    }
}

TEST_CASE("quarter-rate exponential") {
    Scenario s{{{Complex{1.0, 0.0}, 0.25}}, 8, 0.0};
    auto x = synthesize(s, 1);
    const Complex expected[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (int n = 0; n < 8; ++n) {
        CHECK(std::abs(x[n] - expected[n % 4]) < 1e-12);
    }
}

TEST_CASE("determinism and seed sensitivity") {
    Scenario s{{{Complex{1.0, 0.0}, 0.1}}, 32, 0.5};
    auto a = synthesize(s, 42);
    auto b = synthesize(s, 42);
    auto c = synthesize(s, 43);
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("noise statistics") {
    Scenario s{{{Complex{1e-12, 0.0}, 0.0}}, 16, 0.0};
    // draw noise directly through the generator used by synthesize
    GaussianRng rng(987);
    const int count = 100000;
    const double sigma2 = 0.8;
    Complex mean{0.0, 0.0};
    double power = 0.0;
    for (int i = 0; i < count; ++i) {
        Complex w = rng.complex_gaussian(sigma2);
        mean += w;
        power += std::norm(w);
    }
    mean /= static_cast<double>(count);
    power /= count;
    double sigma = std::sqrt(sigma2);
    CHECK(std::abs(mean) < 4.0 * sigma / std::sqrt(static_cast<double>(count)));
    CHECK(power == doctest::Approx(sigma2).epsilon(0.02));
}

TEST_CASE("superposition of noiseless tones") {
    Scenario two{{{Complex{1.0, 0.5}, 0.11}, {Complex{0.3, -0.2}, -0.27}}, 64, 0.0};
    auto x = synthesize(two, 5);
    Scenario one_a{{two.tones[0]}, 64, 0.0};
    Scenario one_b{{two.tones[1]}, 64, 0.0};
    auto a = synthesize(one_a, 5);
    auto b = synthesize(one_b, 5);
    for (int n = 0; n < 64; ++n) {
        CHECK(std::abs(x[n] - (a[n] + b[n])) < 1e-12);
    }
}

TEST_CASE("fifteen-tone benchmark scenario mean power") {
    Scenario s = benchmark15_scenario();
    // deterministic part straight from the model definition (the tones are
    // not bin-aligned, so cross terms do not vanish)
    double expected = s.noise_variance;
    {
        double clean_power = 0.0;
        for (int n = 0; n < s.num_samples; ++n) {
            Complex v{0.0, 0.0};
            for (const Tone& t : s.tones) {
                v += t.amplitude *
                     std::polar(1.0, 2.0 * std::numbers::pi * t.frequency * n);
            }
            clean_power += std::norm(v);
        }
        expected += clean_power / s.num_samples;
    }
    double power = 0.0;
    const int seeds = 1000;
    for (int seed = 0; seed < seeds; ++seed) {
        auto x = synthesize(s, derive_seed(100, seed));
        for (const Complex& v : x) {
            power += std::norm(v);
        }
    }
    power /= static_cast<double>(seeds) * s.num_samples;
    CHECK(power == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("snr conversion") {
    CHECK(snr_to_noise_variance(1.0, 0.0) == doctest::Approx(1.0));
    CHECK(snr_to_noise_variance(1.0, 20.0) == doctest::Approx(0.01));
    // benchmark component 2 shares sigma^2 with component 1 at 5 dB
    double sigma2 = snr_to_noise_variance(1.0, 5.0);
    CHECK(sigma2 == doctest::Approx(0.31623).epsilon(1e-4));
    CHECK(snr_to_noise_variance(0.6379, 1.0947) ==
          doctest::Approx(sigma2).epsilon(1e-4));
    CHECK(noise_variance_to_snr_db(0.6379, sigma2) ==
          doctest::Approx(1.0947).epsilon(1e-3));
}

TEST_CASE("frequency wrapping") {
    CHECK(wrap_frequency(0.6) == doctest::Approx(-0.4));
    CHECK(wrap_frequency(-0.5) == doctest::Approx(-0.5));
    CHECK(wrap_frequency(0.5) == doctest::Approx(-0.5));
    CHECK(wrap_frequency(1.25) == doctest::Approx(0.25));
}

TEST_CASE("invalid scenarios are rejected") {
    CHECK_THROWS_AS(synthesize(Scenario{{}, 64, 0.0}, 1), ConfigError);
    CHECK_THROWS_AS(
        synthesize(Scenario{{{Complex{1.0, 0.0}, 0.1}}, 4, 0.0}, 1),
        ConfigError);
    CHECK_THROWS_AS(
        synthesize(Scenario{{{Complex{0.0, 0.0}, 0.1}}, 64, 0.0}, 1),
        ConfigError);
    CHECK_THROWS_AS(
        synthesize(
            Scenario{{{Complex{1.0, 0.0}, 0.1}, {Complex{1.0, 0.0}, 0.1}}, 64, 0.0},
            1),
        ConfigError);
}

TEST_CASE("scenario JSON round trip") {
    Scenario s = benchmark15_scenario();
    Scenario back = Scenario::from_json(s.to_json());
    REQUIRE(back.tones.size() == s.tones.size());
    CHECK(back.num_samples == s.num_samples);
    CHECK(back.noise_variance == doctest::Approx(s.noise_variance));
    for (std::size_t i = 0; i < s.tones.size(); ++i) {
        CHECK(std::abs(back.tones[i].amplitude - s.tones[i].amplitude) < 1e-12);
        CHECK(back.tones[i].frequency == doctest::Approx(s.tones[i].frequency));
    }
}
