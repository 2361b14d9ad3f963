#include "multitone/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "multitone/errors.hpp"
#include "multitone/fourier.hpp"

namespace multitone {

namespace {

constexpr double kPi = std::numbers::pi;

double clamp_residual(double d) { return std::clamp(d, -0.5, 0.5); }

// Wrapped bin distance from a source position to a target location.
double wrapped_bin_delta(double source_bins, double target_bins, int n) {
    double d = source_bins - target_bins;
    return d - n * std::round(d / static_cast<double>(n));
}

struct Loop {
    const SampleBuffer& buffer;
    const EstimatorConfig& config;
    bool subtract;
    int n;
    Spectrum spectrum;
    std::vector<ToneEstimate> est;

    Loop(const SampleBuffer& buf, const EstimatorConfig& cfg, bool sub)
        : buffer(buf), config(cfg), subtract(sub),
          n(static_cast<int>(buf.size())), spectrum(dft(buf)) {
        if (config.num_components < 1 || config.num_components > n / 4) {
            throw ConfigError("num_components must satisfy 1 <= L <= N/4");
        }
        if (config.max_iterations < 1) {
            throw ConfigError("max_iterations must be >= 1");
        }
        if (config.stop_tolerance_bins < 0.0) {
            throw ConfigError("stop_tolerance_bins must be >= 0");
        }
    }

    // Peak of the periodogram of the residual signal: the measured spectrum
    // minus the closed-form contribution of the components found so far.
    int residual_peak() const {
        int best = -1;
        double best_power = -1.0;
        for (int k = 0; k < n; ++k) {
            Complex r = spectrum[static_cast<std::size_t>(k)];
            for (const ToneEstimate& e : est) {
                r -= static_cast<double>(n) *
                     tone_coefficient(e.amplitude, e.position_bins(), k, n);
            }
            double p = std::norm(r);
            if (p > best_power) {
                best_power = p;
                best = k;
            }
        }
        return best;
    }

    Complex leakage_free_coefficient(int p, double location) const {
        Complex c = coefficient_at(buffer, location);
        if (!subtract) {
            return c;
        }
        for (int l = 0; l < static_cast<int>(est.size()); ++l) {
            if (l == p || std::abs(est[static_cast<std::size_t>(l)].amplitude) == 0.0) {
                continue;
            }
            c -= leakage_term(est[static_cast<std::size_t>(l)], location, n);
        }
        return c;
    }

    // Keep the (coarse_bin, residual) split canonical: when the residual
    // walks past half a bin, move to the neighboring bin so the position
    // stays continuous instead of pinning at the clamp.
    void update_residual(ToneEstimate& e, double interpolated) {
        double nr = e.residual + interpolated;
        while (nr > 0.5 || nr < -0.5) {
            int dir = nr > 0.5 ? 1 : -1;
            e.coarse_bin = ((e.coarse_bin + dir) % n + n) % n;
            nr -= dir;
        }
        e.residual = clamp_residual(nr);
    }

    void update_amplitude(int p) {
        ToneEstimate& e = est[static_cast<std::size_t>(p)];
        double f = e.frequency(n);
        std::vector<ToneEstimate> others;
        if (subtract) {
            for (int l = 0; l < static_cast<int>(est.size()); ++l) {
                if (l != p) {
                    others.push_back(est[static_cast<std::size_t>(l)]);
                }
            }
        }
        e.amplitude = estimate_amplitude(buffer, f, others);
    }

    EstimationResult run() {
        EstimationResult result;
        std::vector<double> prev_residuals;
        for (int q = 1; q <= config.max_iterations; ++q) {
            for (int p = 0; p < config.num_components; ++p) {
                if (q == 1) {
                    int m = residual_peak();
                    for (const ToneEstimate& other : est) {
                        if (other.coarse_bin == m) {
                            throw UnresolvableComponentsError(
                                "two coarse peaks landed on bin " +
                                std::to_string(m));
                        }
                    }
                    est.push_back(ToneEstimate{m, 0.0, Complex{0.0, 0.0}});
                }
                ToneEstimate& e = est[static_cast<std::size_t>(p)];
                double center = e.position_bins();
                Complex sm = leakage_free_coefficient(p, center - 0.5);
                Complex sp = leakage_free_coefficient(p, center + 0.5);
                update_residual(e, am_interpolate(sm, sp, n));
                update_amplitude(p);
            }
            std::vector<double> residuals;
            residuals.reserve(est.size());
            for (const ToneEstimate& e : est) {
                residuals.push_back(e.residual);
            }
            result.residual_history.push_back(residuals);
            result.iterations_run = q;
            if (q >= 2 && config.stop_tolerance_bins > 0.0) {
                double max_change = 0.0;
                for (std::size_t i = 0; i < residuals.size(); ++i) {
                    max_change = std::max(
                        max_change, std::abs(residuals[i] - prev_residuals[i]));
                }
                if (max_change < config.stop_tolerance_bins) {
                    break;
                }
            }
            prev_residuals = residuals;
        }
        result.estimates = std::move(est);
        return result;
    }
};

} // namespace

double am_interpolate(Complex coef_minus, Complex coef_plus, int n) {
    if (coef_plus == coef_minus) {
        throw DegenerateInterpolationError(
            "interpolation coefficients are identical");
    }
    Complex h = 0.5 * (coef_plus + coef_minus) / (coef_plus - coef_minus);
    Complex z_inv = std::cos(kPi / n) -
                    2.0 * Complex{0.0, 1.0} * h * std::sin(kPi / n);
    double delta = -(n / (2.0 * kPi)) * std::imag(std::log(z_inv));
    return clamp_residual(delta);
}

Complex leakage_term(const ToneEstimate& source, double target_location_bins,
                     int n) {
    if (!std::isfinite(std::abs(source.amplitude))) {
        throw ConfigError("source amplitude must be finite");
    }
    double dw = wrapped_bin_delta(source.position_bins(), target_location_bins, n);
    double denom_mag = 2.0 * std::abs(std::sin(kPi * dw / n));
    if (denom_mag < 1e-14) {
        throw CoincidentFrequencyError(
            "leakage source coincides with target location");
    }
    return tone_coefficient(source.amplitude, source.position_bins(),
                            target_location_bins, n);
}

Complex estimate_amplitude(const SampleBuffer& buffer, double own_freq,
                           const std::vector<ToneEstimate>& others) {
    const int n = static_cast<int>(buffer.size());
    Complex amp = coefficient_at(buffer, own_freq * n);
    for (const ToneEstimate& o : others) {
        if (std::abs(o.amplitude) == 0.0) {
            continue;
        }
        double df = wrap_frequency_delta(o.frequency(n), own_freq);
        if (std::abs(df) < 1e-12) {
            throw CoincidentFrequencyError(
                "amplitude update with coincident component frequencies");
        }
        amp -= tone_coefficient(o.amplitude, o.position_bins(), own_freq * n, n);
    }
    return amp;
}

EstimationResult estimate(const SampleBuffer& buffer,
                          const EstimatorConfig& config) {
    return Loop(buffer, config, true).run();
}

EstimationResult estimate_no_subtraction(const SampleBuffer& buffer,
                                         const EstimatorConfig& config) {
    return Loop(buffer, config, false).run();
}

nlohmann::json EstimationResult::to_json(int n) const {
    nlohmann::json comps = nlohmann::json::array();
    for (const ToneEstimate& e : estimates) {
        comps.push_back({{"coarse_bin", e.coarse_bin},
                         {"residual", e.residual},
                         {"freq", e.frequency(n)},
                         {"amp_re", e.amplitude.real()},
                         {"amp_im", e.amplitude.imag()}});
    }
    return {{"components", comps},
            {"iterations_run", iterations_run},
            {"residual_history", residual_history}};
}

} // namespace multitone
