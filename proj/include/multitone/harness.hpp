#pragma once

#include "multitone/estimator.hpp"
#include "multitone/signal.hpp"

#include <cstdint>
#include <iosfwd>
#include <json.hpp>
#include <optional>
#include <string>

namespace multitone {

enum class EstimatorKind { subtracting, no_subtraction };

// A Monte Carlo experiment: a scenario template, one swept parameter, the
// per-run randomized fields, and the estimator settings.
struct Experiment {
    Scenario scenario_template;
    std::string sweep_param = "none"; // "snr_db" | "sep_bins" | "n" | "none"
    std::vector<double> sweep_values = {0.0};
    bool randomize_phase = false;
    bool randomize_f1 = false;
    std::optional<std::pair<double, double>> randomize_snr_db;
    int runs = 1;
    std::uint64_t base_seed = 0;
    EstimatorKind estimator = EstimatorKind::subtracting;
    int q = 2;
    double stop_tolerance_bins = 0.0;
    bool auto_tolerance = false; // tolerance = N * sqrt(ACRLB) per grid point

    void validate() const;
    static Experiment from_json(const nlohmann::json& j);
};

struct ComponentStats {
    double rmse = 0.0;
    double bias = 0.0;
    double crlb = 0.0;
    double acrlb = 0.0;
    double theory_var = 0.0;
};

struct GridPointStats {
    double grid_value = 0.0;
    std::vector<ComponentStats> components;
    double mean_iterations = 0.0;
    int failures = 0;
};

struct SweepResult {
    std::vector<GridPointStats> points;

    void write_csv(std::ostream& out) const;
    nlohmann::json to_json() const;
};

// Deterministic given the experiment (any worker count): per-run seeds are
// derived from (base_seed, grid index, run index) and the reduction order is
// fixed by run index.
SweepResult run_experiment(const Experiment& experiment, int workers = 1);

// Fig.-1-style convergence protocol: sweep_param must be "n" and a stopping
// tolerance enabled; returns (N, mean iterations to converge) pairs.
std::vector<std::pair<int, double>> convergence_study(
    const Experiment& experiment, int workers = 1);

// Minimum-total-wrapped-frequency-distance assignment between ground truth
// and estimates. Returns per-truth-index estimate indices.
std::vector<int> match_estimates(const std::vector<Tone>& truth,
                                 const std::vector<ToneEstimate>& estimates,
                                 int n);

} // namespace multitone
