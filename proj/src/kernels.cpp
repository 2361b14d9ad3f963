#include "multitone/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

#if defined(__x86_64__) || defined(_M_X64)
#define MULTITONE_X86 1
#include <immintrin.h>
#else
#define MULTITONE_X86 0
#endif

namespace multitone::kernels {

namespace {

// Period between exact re-seeds of the recurrence-generated twiddles.
// Keeps accumulated rounding under a few ulps.
constexpr std::size_t kReseedBlock = 64;

Complex twiddle(double omega, std::size_t n) {
    return std::polar(1.0, omega * static_cast<double>(n));
}

} // namespace

Complex cexp_dot_scalar(std::span<const Complex> x, double omega) {
    Complex acc{0.0, 0.0};
    for (std::size_t n = 0; n < x.size(); ++n) {
        acc += x[n] * twiddle(-omega, n);
    }
    return acc;
}

void add_tone_scalar(std::span<Complex> y, Complex amp, double omega) {
    for (std::size_t n = 0; n < y.size(); ++n) {
        y[n] += amp * twiddle(omega, n);
    }
}

#if MULTITONE_X86

namespace {

// Packed complex multiply: two complex doubles per __m256d, [re0 im0 re1 im1].
__attribute__((target("avx2,fma"), always_inline)) inline __m256d cmul(__m256d a, __m256d b) {
    __m256d b_re = _mm256_movedup_pd(b);
    __m256d b_im = _mm256_permute_pd(b, 0xF);
    __m256d a_sw = _mm256_permute_pd(a, 0x5);
    return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

__attribute__((target("avx2,fma"), always_inline)) inline __m256d twiddle_pair(double omega, std::size_t n) {
    Complex t0 = twiddle(omega, n);
    Complex t1 = twiddle(omega, n + 1);
    return _mm256_setr_pd(t0.real(), t0.imag(), t1.real(), t1.imag());
}

__attribute__((target("avx2,fma")))
Complex cexp_dot_avx2(std::span<const Complex> x, double omega) {
    const std::size_t n = x.size();
    const auto* p = reinterpret_cast<const double*>(x.data());
    __m256d acc = _mm256_setzero_pd();
    Complex step2c = twiddle(-omega, 2);
    __m256d step2 = _mm256_setr_pd(step2c.real(), step2c.imag(),
                                   step2c.real(), step2c.imag());
    std::size_t i = 0;
    __m256d tw = _mm256_setzero_pd();
    for (; i + 2 <= n; i += 2) {
        if (i % (2 * kReseedBlock) == 0) {
            tw = twiddle_pair(-omega, i);
        }
        __m256d xv = _mm256_loadu_pd(p + 2 * i);
        acc = _mm256_add_pd(acc, cmul(xv, tw));
        tw = cmul(tw, step2);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    Complex out{lanes[0] + lanes[2], lanes[1] + lanes[3]};
    for (; i < n; ++i) {
        out += x[i] * twiddle(-omega, i);
    }
    return out;
}

__attribute__((target("avx2,fma")))
void add_tone_avx2(std::span<Complex> y, Complex amp, double omega) {
    const std::size_t n = y.size();
    auto* p = reinterpret_cast<double*>(y.data());
    Complex step2c = twiddle(omega, 2);
    __m256d step2 = _mm256_setr_pd(step2c.real(), step2c.imag(),
                                   step2c.real(), step2c.imag());
    __m256d av = _mm256_setr_pd(amp.real(), amp.imag(), amp.real(), amp.imag());
    std::size_t i = 0;
    __m256d tw = _mm256_setzero_pd();
    for (; i + 2 <= n; i += 2) {
        if (i % (2 * kReseedBlock) == 0) {
            tw = twiddle_pair(omega, i);
        }
        __m256d yv = _mm256_loadu_pd(p + 2 * i);
        yv = _mm256_add_pd(yv, cmul(av, tw));
        _mm256_storeu_pd(p + 2 * i, yv);
        tw = cmul(tw, step2);
    }
    for (; i < n; ++i) {
        y[i] += amp * twiddle(omega, i);
    }
}

} // namespace

#endif // MULTITONE_X86

namespace {

using CexpDotFn = Complex (*)(std::span<const Complex>, double);
using AddToneFn = void (*)(std::span<Complex>, Complex, double);

struct Dispatch {
    CexpDotFn cexp_dot = &cexp_dot_scalar;
    AddToneFn add_tone = &add_tone_scalar;
    const char* name = "scalar";

    Dispatch() {
        const char* force = std::getenv("MULTITONE_KERNELS");
        if (force != nullptr && std::strcmp(force, "scalar") == 0) {
            return;
        }
#if MULTITONE_X86
        if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
            cexp_dot = &cexp_dot_avx2;
            add_tone = &add_tone_avx2;
            name = "avx2";
        }
#endif
    }
};

const Dispatch& dispatch() {
    static const Dispatch d;
    return d;
}

} // namespace

Complex cexp_dot(std::span<const Complex> x, double omega) {
    return dispatch().cexp_dot(x, omega);
}

void add_tone(std::span<Complex> y, Complex amp, double omega) {
    dispatch().add_tone(y, amp, omega);
}

const char* active_backend() { return dispatch().name; }

} // namespace multitone::kernels
