#include "multitone/theory.hpp"

#include <cmath>
#include <numbers>

#include "multitone/errors.hpp"

namespace multitone {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

Complex cis(double x) { return std::polar(1.0, x); }

// (1 - e^{j 2 pi x}) / (N (1 - e^{j 2 pi x / N})), continued to 1 at x = 0.
Complex gamma_factor(double x, int n) {
    if (x == 0.0) {
        return Complex{1.0, 0.0};
    }
    double ratio = std::sin(kPi * x) / (n * std::sin(kPi * x / n));
    return ratio * cis(kPi * x * (1.0 - 1.0 / n));
}

struct ResidualState {
    std::vector<int> bins;    // true coarse bins m_l
    std::vector<double> delta; // true residuals
    std::vector<double> nu;    // assumed residual estimates
};

ResidualState residual_state(const Scenario& scenario,
                             const std::vector<double>& errors) {
    ResidualState s;
    const int n = scenario.num_samples;
    for (std::size_t l = 0; l < scenario.tones.size(); ++l) {
        double pos = scenario.tones[l].frequency * n;
        int m = static_cast<int>(std::lround(pos));
        s.bins.push_back(m);
        s.delta.push_back(pos - m);
        s.nu.push_back(pos - m - errors[l]);
    }
    return s;
}

} // namespace

void TheoryQuery::validate() const {
    scenario.validate();
    if (assumed_residual_errors.size() != scenario.tones.size()) {
        throw ConfigError("need one residual error per component");
    }
    if (component_index < 1 ||
        component_index > static_cast<int>(scenario.tones.size())) {
        throw ConfigError("component_index out of range");
    }
}

int true_coarse_bin(double frequency, int n) {
    return static_cast<int>(std::lround(frequency * n));
}

double true_residual(double frequency, int n) {
    return frequency * n - std::lround(frequency * n);
}

std::pair<Complex, Complex> beta_terms(
    const Scenario& scenario, int p, int l,
    const std::vector<double>& residual_errors) {
    if (p == l) {
        throw ConfigError("beta_terms needs two distinct components");
    }
    const int n = scenario.num_samples;
    ResidualState s = residual_state(scenario, residual_errors);
    const int pi_ = p - 1;
    const int li = l - 1;
    const double m = s.bins[static_cast<std::size_t>(li)] -
                     s.bins[static_cast<std::size_t>(pi_)];
    const double dl = s.delta[static_cast<std::size_t>(li)];
    const double nl = s.nu[static_cast<std::size_t>(li)];
    const double np = s.nu[static_cast<std::size_t>(pi_)];
    Complex gamma = gamma_factor(dl - nl, n);

    auto one_side = [&](double half) {
        Complex den1 = 1.0 - cis(2.0 * kPi / n * (m + dl - np - half));
        Complex den2 = 1.0 - cis(2.0 * kPi / n * (m + nl - np - half));
        if (std::abs(den1) < 1e-14 || std::abs(den2) < 1e-14) {
            throw CoincidentFrequencyError(
                "beta denominator vanishes: components share a location");
        }
        Complex t1 = (1.0 + cis(2.0 * kPi * (dl - np))) / den1;
        Complex t2 = gamma * (1.0 + cis(2.0 * kPi * (nl - np))) / den2;
        return t1 - t2;
    };
    return {one_side(0.5), one_side(-0.5)};
}

double theoretical_bias(const TheoryQuery& query) {
    query.validate();
    const Scenario& sc = query.scenario;
    const int n = sc.num_samples;
    const int p = query.component_index;
    const double dp = query.assumed_residual_errors[static_cast<std::size_t>(p - 1)];
    double cosp = std::cos(kPi * dp);
    if (cosp == 0.0) {
        throw NumericalError("residual error of 0.5 puts cos(pi d') at zero");
    }
    const Complex ap = sc.tones[static_cast<std::size_t>(p - 1)].amplitude;
    Complex sum{0.0, 0.0};
    for (int l = 1; l <= static_cast<int>(sc.tones.size()); ++l) {
        if (l == p) {
            continue;
        }
        auto [bp, bm] = beta_terms(sc, p, l, query.assumed_residual_errors);
        const Complex al = sc.tones[static_cast<std::size_t>(l - 1)].amplitude;
        sum += (al / ap) * ((1.0 - 2.0 * dp) * bp + (1.0 + 2.0 * dp) * bm);
    }
    double prefactor =
        kPi * (dp * dp - 0.25) /
        (2.0 * static_cast<double>(n) * static_cast<double>(n) * cosp);
    return prefactor * std::imag(cis(-2.0 * kPi * dp) * sum);
}

double theoretical_variance(const TheoryQuery& query, bool exact_eta) {
    query.validate();
    const Scenario& sc = query.scenario;
    if (sc.noise_variance <= 0.0) {
        throw ConfigError("theoretical_variance needs sigma^2 > 0");
    }
    const int n = sc.num_samples;
    const int p = query.component_index;
    const double dp = query.assumed_residual_errors[static_cast<std::size_t>(p - 1)];
    double cosp = std::cos(kPi * dp);
    if (cosp == 0.0) {
        throw NumericalError("residual error of 0.5 puts cos(pi d') at zero");
    }
    double rho = std::norm(sc.tones[static_cast<std::size_t>(p - 1)].amplitude) /
                 sc.noise_variance;
    double n3 = std::pow(static_cast<double>(n), 3.0);
    double prefactor = kPi * kPi * (dp * dp - 0.25) * (dp * dp - 0.25) /
                       (4.0 * rho * n3 * cosp * cosp);
    double bracket = 1.0 + 4.0 * dp * dp;
    if (exact_eta) {
        ResidualState s = residual_state(sc, query.assumed_residual_errors);
        const int pi_ = p - 1;
        for (int l = 1; l <= static_cast<int>(sc.tones.size()); ++l) {
            if (l == p) {
                continue;
            }
            const int li = l - 1;
            double m = s.bins[static_cast<std::size_t>(li)] -
                       s.bins[static_cast<std::size_t>(pi_)];
            double nl = s.nu[static_cast<std::size_t>(li)];
            double np = s.nu[static_cast<std::size_t>(pi_)];
            auto eta = [&](double half) {
                Complex den =
                    static_cast<double>(n) *
                    (1.0 - cis(2.0 * kPi / n * (m + nl - np - half)));
                return (1.0 + cis(2.0 * kPi * (nl - np))) / den;
            };
            Complex ep = eta(0.5);
            Complex em = eta(-0.5);
            bracket -= 0.5 * (1.0 - 2.0 * dp) * (1.0 - 2.0 * dp) * std::norm(ep);
            bracket -= 0.5 * (1.0 + 2.0 * dp) * (1.0 + 2.0 * dp) * std::norm(em);
            bracket -= 0.5 * (1.0 - 4.0 * dp * dp) *
                       (2.0 * std::real(std::conj(ep) * em));
        }
    }
    return prefactor * bracket;
}

double acrlb(double snr_linear, int n) {
    if (snr_linear <= 0.0 || n < 1) {
        throw ConfigError("acrlb needs snr > 0 and n >= 1");
    }
    return 6.0 / (4.0 * kPi * kPi * snr_linear * std::pow(n, 3.0));
}

double convergence_bound(const Scenario& scenario) {
    scenario.validate();
    const int n = scenario.num_samples;
    const auto L = scenario.tones.size();
    if (L < 2) {
        throw ConfigError("convergence_bound needs L >= 2");
    }
    double worst = std::sqrt(std::log(static_cast<double>(n)) / n);
    for (std::size_t l = 0; l < L; ++l) {
        for (std::size_t p = 0; p < L; ++p) {
            if (l == p) {
                continue;
            }
            double sep = wrap_frequency_delta(scenario.tones[l].frequency,
                                              scenario.tones[p].frequency) * n;
            double bins = std::round(sep);
            if (bins == 0.0) {
                throw NumericalError("components share a coarse bin");
            }
            double gamma =
                std::norm(scenario.tones[l].amplitude) / (bins * bins);
            worst = std::max(worst, std::sqrt(gamma));
        }
    }
    return std::sqrt(static_cast<double>(L)) * worst;
}

TheoryReport evaluate(const TheoryQuery& query) {
    query.validate();
    TheoryReport r;
    const Scenario& sc = query.scenario;
    const int n = sc.num_samples;
    const int p = query.component_index;
    r.bias_freq = theoretical_bias(query);
    r.variance_freq = theoretical_variance(query);
    double rho = std::norm(sc.tones[static_cast<std::size_t>(p - 1)].amplitude) /
                 sc.noise_variance;
    r.acrlb_freq = acrlb(rho, n);
    r.crlb_freq = r.acrlb_freq;
    r.variance_to_acrlb_ratio = r.variance_freq / r.acrlb_freq;
    r.convergence_bound =
        sc.tones.size() >= 2 ? convergence_bound(sc) : 0.0;
    return r;
}

nlohmann::json TheoryReport::to_json() const {
    return {{"bias_freq", bias_freq},
            {"variance_freq", variance_freq},
            {"crlb_freq", crlb_freq},
            {"acrlb_freq", acrlb_freq},
            {"variance_to_acrlb_ratio", variance_to_acrlb_ratio},
            {"convergence_bound", convergence_bound}};
}

} // namespace multitone
