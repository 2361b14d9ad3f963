#pragma once

#include "multitone/signal.hpp"

#include <json.hpp>
#include <utility>

namespace multitone {

// Closed-form predictions for a scenario, evaluated at an assumed estimator
// state: per-component residual-estimate errors delta_p - nu_p (bins).
struct TheoryQuery {
    Scenario scenario;
    std::vector<double> assumed_residual_errors; // one per component, bins
    int component_index = 1;                     // 1-based

    void validate() const;
};

struct TheoryReport {
    double bias_freq = 0.0;      // cycles/sample
    double variance_freq = 0.0;  // cycles^2/sample^2
    double crlb_freq = 0.0;
    double acrlb_freq = 0.0;
    double variance_to_acrlb_ratio = 0.0;
    double convergence_bound = 0.0; // dimensionless rate bound (order, const 1)

    nlohmann::json to_json() const;
};

// True residual decomposition of a tone position: nearest bin and offset.
int true_coarse_bin(double frequency, int n);
double true_residual(double frequency, int n);

// The pair (beta_plus, beta_minus) for interferer l against component p
// (both 1-based), evaluated at the residual-error state of the query.
std::pair<Complex, Complex> beta_terms(const Scenario& scenario, int p, int l,
                                       const std::vector<double>& residual_errors);

// Mean of the asymptotic frequency-estimate distribution, cycles/sample.
// Exactly 0 when every residual error is 0.
double theoretical_bias(const TheoryQuery& query);

// Asymptotic variance of the frequency estimate. With exact_eta the
// finite-N correction terms are kept instead of dropped.
double theoretical_variance(const TheoryQuery& query, bool exact_eta = false);

// 6 / (4 pi^2 rho N^3)
double acrlb(double snr_linear, int n);

// sqrt(L) * max over pairs of {sqrt(Gamma_lp), sqrt(ln N / N)}; leading
// constant taken as 1, used for regime classification only.
double convergence_bound(const Scenario& scenario);

TheoryReport evaluate(const TheoryQuery& query);

} // namespace multitone
