#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <random>

#include "helpers.hpp"
#include "multitone/kernels.hpp"

using multitone::Complex;
using namespace multitone::kernels;

TEST_CASE("dispatched cexp_dot matches scalar reference") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uw(-8.0, 8.0);
    for (std::size_t n : {1u, 2u, 3u, 7u, 64u, 129u, 257u, 1000u}) {
        auto x = oracle::random_buffer(rng, n);
        for (int trial = 0; trial < 10; ++trial) {
            double omega = uw(rng);
            Complex fast = cexp_dot(x, omega);
            Complex ref = cexp_dot_scalar(x, omega);
            CHECK(oracle::rel_error(fast, ref) < 1e-12);
        }
    }
}

TEST_CASE("dispatched add_tone matches scalar reference") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> uw(-8.0, 8.0);
    for (std::size_t n : {1u, 5u, 64u, 257u, 513u}) {
        auto base = oracle::random_buffer(rng, n);
        Complex amp{0.7, -0.4};
        double omega = uw(rng);
        auto a = base;
        auto b = base;
        add_tone(a, amp, omega);
        add_tone_scalar(b, amp, omega);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(std::abs(a[i] - b[i]) < 1e-12);
        }
    }
}

TEST_CASE("add_tone then cexp_dot recovers N * amp") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> uw(-3.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        double omega = uw(rng);
        Complex amp{uw(rng), uw(rng)};
        std::vector<Complex> y(128, Complex{0.0, 0.0});
        add_tone(y, amp, omega);
        Complex dot = cexp_dot(y, omega);
        CHECK(oracle::rel_error(dot, 128.0 * amp) < 1e-12);
    }
}

TEST_CASE("backend is reported") {
    const char* name = active_backend();
    bool known = std::strcmp(name, "avx2") == 0 || std::strcmp(name, "scalar") == 0;
    CHECK(known);
}
