#include "multitone/fourier.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <unordered_map>

#include <fftw3.h>

#include "multitone/errors.hpp"
#include "multitone/kernels.hpp"

namespace multitone {

namespace {

// FFTW planning is not thread safe; plans are cached per length and executed
// via the new-array interface. FFTW_UNALIGNED so caller buffers need no
// special alignment.
class PlanCache {
public:
    fftw_plan get(int n) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = plans_.find(n);
        if (it != plans_.end()) {
            return it->second;
        }
        std::vector<Complex> scratch_in(static_cast<std::size_t>(n));
        std::vector<Complex> scratch_out(static_cast<std::size_t>(n));
        fftw_plan plan = fftw_plan_dft_1d(
            n, reinterpret_cast<fftw_complex*>(scratch_in.data()),
            reinterpret_cast<fftw_complex*>(scratch_out.data()), FFTW_FORWARD,
            FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(n, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::unordered_map<int, fftw_plan> plans_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

} // namespace

Spectrum dft(const SampleBuffer& buffer) {
    const int n = static_cast<int>(buffer.size());
    if (n < 1) {
        throw ConfigError("dft needs a nonempty buffer");
    }
    Spectrum out(buffer.size());
    SampleBuffer in = buffer; // fftw may clobber input for some plans
    fftw_execute_dft(plan_cache().get(n),
                     reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

Complex coefficient_at(const SampleBuffer& buffer, double location) {
    const auto n = static_cast<double>(buffer.size());
    double omega = 2.0 * std::numbers::pi * location / n;
    return kernels::cexp_dot(buffer, omega) / n;
}

int coarse_peak(const Spectrum& spectrum) {
    if (spectrum.empty()) {
        throw ConfigError("coarse_peak needs a nonempty spectrum");
    }
    int best = 0;
    double best_power = std::norm(spectrum[0]);
    for (int k = 1; k < static_cast<int>(spectrum.size()); ++k) {
        double p = std::norm(spectrum[static_cast<std::size_t>(k)]);
        if (p > best_power) {
            best_power = p;
            best = k;
        }
    }
    return best;
}

Complex tone_coefficient(Complex amp, double source_bins, double target_bins,
                         int n) {
    const double dn = static_cast<double>(n);
    double d = source_bins - target_bins;
    double dw = d - dn * std::round(d / dn); // wrapped to (-N/2, N/2]
    Complex phase = std::polar(1.0, std::numbers::pi * dw * (1.0 - 1.0 / dn));
    if (std::abs(dw) < 1e-12) {
        return amp * phase; // Dirichlet main-lobe limit
    }
    double ratio = std::sin(std::numbers::pi * dw) /
                   (dn * std::sin(std::numbers::pi * dw / dn));
    return amp * ratio * phase;
}

} // namespace multitone
