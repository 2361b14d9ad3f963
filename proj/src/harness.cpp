#include "multitone/harness.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <thread>

#include "multitone/errors.hpp"
#include "multitone/rng.hpp"
#include "multitone/theory.hpp"

namespace multitone {

namespace {

// O(n^3) assignment with potentials (Kuhn-Munkres).
std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost) {
    const int n = static_cast<int>(cost.size());
    const double kInf = 1e100;
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            int i0 = p[j0], j1 = -1;
            double delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) {
                    continue;
                }
                double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> result(n, -1);
    for (int j = 1; j <= n; ++j) {
        if (p[j] != 0) {
            result[static_cast<std::size_t>(p[j] - 1)] = j - 1;
        }
    }
    return result;
}

struct RunRecord {
    std::vector<double> freq_error; // signed, wrapped, per truth component
    int iterations = 0;
    bool failed = false;
};

Scenario grid_scenario(const Experiment& e, double value) {
    Scenario s = e.scenario_template;
    if (e.sweep_param == "snr_db") {
        s.noise_variance =
            snr_to_noise_variance(std::abs(s.tones.at(0).amplitude), value);
    } else if (e.sweep_param == "sep_bins") {
        if (s.tones.size() != 2) {
            throw ConfigError("sep_bins sweep needs a two-tone template");
        }
        s.tones[1].frequency = wrap_frequency(
            s.tones[0].frequency + value / s.num_samples);
    } else if (e.sweep_param == "n") {
        s.num_samples = static_cast<int>(value);
    } else if (e.sweep_param != "none") {
        throw ConfigError("unknown sweep_param: " + e.sweep_param);
    }
    return s;
}

Scenario randomize_scenario(const Experiment& e, const Scenario& base,
                            GaussianRng& rng) {
    Scenario s = base;
    if (e.randomize_f1) {
        double f1 = rng.uniform(-0.5, 0.5);
        for (std::size_t l = 0; l < s.tones.size(); ++l) {
            double offset = l == 0 ? 0.0
                                   : wrap_frequency_delta(
                                         base.tones[l].frequency,
                                         base.tones[0].frequency);
            s.tones[l].frequency = wrap_frequency(f1 + offset);
        }
    }
    if (e.randomize_phase) {
        for (Tone& t : s.tones) {
            t.amplitude = std::polar(std::abs(t.amplitude),
                                     rng.uniform(-3.14159265358979323846,
                                                 3.14159265358979323846));
        }
    }
    if (e.randomize_snr_db) {
        double snr = rng.uniform(e.randomize_snr_db->first,
                                 e.randomize_snr_db->second);
        s.noise_variance =
            snr_to_noise_variance(std::abs(s.tones.at(0).amplitude), snr);
    }
    return s;
}

RunRecord one_run(const Experiment& e, const Scenario& grid_base,
                  std::uint64_t run_seed) {
    RunRecord rec;
    try {
        GaussianRng param_rng(derive_seed(run_seed, 1));
        Scenario s = randomize_scenario(e, grid_base, param_rng);
        SampleBuffer x = synthesize(s, derive_seed(run_seed, 2));
        EstimatorConfig cfg;
        cfg.num_components = static_cast<int>(s.tones.size());
        cfg.max_iterations = e.q;
        if (e.auto_tolerance) {
            double rho = std::norm(s.tones[0].amplitude) / s.noise_variance;
            cfg.stop_tolerance_bins =
                s.num_samples * std::sqrt(acrlb(rho, s.num_samples));
        } else {
            cfg.stop_tolerance_bins = e.stop_tolerance_bins;
        }
        EstimationResult r = e.estimator == EstimatorKind::subtracting
                                 ? estimate(x, cfg)
                                 : estimate_no_subtraction(x, cfg);
        std::vector<int> pairing =
            match_estimates(s.tones, r.estimates, s.num_samples);
        rec.freq_error.resize(s.tones.size());
        for (std::size_t i = 0; i < s.tones.size(); ++i) {
            const ToneEstimate& est =
                r.estimates[static_cast<std::size_t>(pairing[i])];
            rec.freq_error[i] = wrap_frequency_delta(
                est.frequency(s.num_samples), s.tones[i].frequency);
        }
        rec.iterations = r.iterations_run;
    } catch (const std::exception&) {
        rec.failed = true;
    }
    return rec;
}

} // namespace

void Experiment::validate() const {
    scenario_template.validate();
    if (runs < 1) {
        throw ConfigError("runs must be >= 1");
    }
    if (sweep_values.empty()) {
        throw ConfigError("sweep grid must be nonempty");
    }
    if (q < 1) {
        throw ConfigError("q must be >= 1");
    }
}

Experiment Experiment::from_json(const nlohmann::json& j) {
    Experiment e;
    e.scenario_template = Scenario::from_json(j.at("scenario"));
    if (j.contains("sweep")) {
        e.sweep_param = j["sweep"].at("param").get<std::string>();
        e.sweep_values = j["sweep"].at("values").get<std::vector<double>>();
    }
    if (j.contains("randomize")) {
        const auto& r = j["randomize"];
        e.randomize_phase = r.value("phase", false);
        e.randomize_f1 = r.value("f1", false);
        if (r.contains("snr_db_range")) {
            auto range = r["snr_db_range"].get<std::vector<double>>();
            if (range.size() != 2) {
                throw ConfigError("snr_db_range needs [lo, hi]");
            }
            e.randomize_snr_db = {range[0], range[1]};
        }
    }
    e.runs = j.at("runs").get<int>();
    e.base_seed = j.at("base_seed").get<std::uint64_t>();
    std::string kind = j.value("estimator", "subtracting");
    if (kind == "subtracting") {
        e.estimator = EstimatorKind::subtracting;
    } else if (kind == "no_subtraction") {
        e.estimator = EstimatorKind::no_subtraction;
    } else {
        throw ConfigError("unknown estimator kind: " + kind);
    }
    e.q = j.at("q").get<int>();
    if (j.contains("stop_tolerance_bins")) {
        const auto& t = j["stop_tolerance_bins"];
        if (t.is_string() && t.get<std::string>() == "auto") {
            e.auto_tolerance = true;
        } else {
            e.stop_tolerance_bins = t.get<double>();
        }
    }
    e.validate();
    return e;
}

std::vector<int> match_estimates(const std::vector<Tone>& truth,
                                 const std::vector<ToneEstimate>& estimates,
                                 int n) {
    if (truth.size() != estimates.size()) {
        throw ConfigError("match_estimates needs equal-length lists");
    }
    const std::size_t L = truth.size();
    std::vector<std::vector<double>> cost(L, std::vector<double>(L));
    for (std::size_t i = 0; i < L; ++i) {
        for (std::size_t j = 0; j < L; ++j) {
            cost[i][j] = std::abs(wrap_frequency_delta(
                truth[i].frequency, estimates[j].frequency(n)));
        }
    }
    return solve_assignment(cost);
}

SweepResult run_experiment(const Experiment& experiment, int workers) {
    experiment.validate();
    if (workers < 1) {
        workers = 1;
    }
    SweepResult result;
    for (std::size_t g = 0; g < experiment.sweep_values.size(); ++g) {
        const double value = experiment.sweep_values[g];
        const Scenario grid_base = grid_scenario(experiment, value);
        grid_base.validate();
        const std::uint64_t grid_seed =
            derive_seed(experiment.base_seed, static_cast<std::uint64_t>(g));
        const int runs = experiment.runs;
        std::vector<RunRecord> records(static_cast<std::size_t>(runs));

        auto work = [&](int worker) {
            for (int r = worker; r < runs; r += workers) {
                records[static_cast<std::size_t>(r)] = one_run(
                    experiment, grid_base,
                    derive_seed(grid_seed, static_cast<std::uint64_t>(r)));
            }
        };
        if (workers == 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            pool.reserve(static_cast<std::size_t>(workers));
            for (int w = 0; w < workers; ++w) {
                pool.emplace_back(work, w);
            }
            for (std::thread& t : pool) {
                t.join();
            }
        }

        // Fixed-order reduction so the output is independent of scheduling.
        const std::size_t L = grid_base.tones.size();
        std::vector<double> sq(L, 0.0), sum(L, 0.0);
        double iters = 0.0;
        int ok = 0, failures = 0;
        for (const RunRecord& rec : records) {
            if (rec.failed) {
                ++failures;
                continue;
            }
            ++ok;
            iters += rec.iterations;
            for (std::size_t c = 0; c < L; ++c) {
                sq[c] += rec.freq_error[c] * rec.freq_error[c];
                sum[c] += rec.freq_error[c];
            }
        }
        GridPointStats stats;
        stats.grid_value = value;
        stats.failures = failures;
        stats.mean_iterations = ok > 0 ? iters / ok : 0.0;
        for (std::size_t c = 0; c < L; ++c) {
            ComponentStats cs;
            if (ok > 0) {
                cs.rmse = std::sqrt(sq[c] / ok);
                cs.bias = sum[c] / ok;
            }
            if (grid_base.noise_variance > 0.0) {
                double rho = std::norm(grid_base.tones[c].amplitude) /
                             grid_base.noise_variance;
                cs.acrlb = acrlb(rho, grid_base.num_samples);
                cs.crlb = cs.acrlb;
                TheoryQuery q;
                q.scenario = grid_base;
                q.assumed_residual_errors.assign(L, 0.0);
                q.component_index = static_cast<int>(c) + 1;
                cs.theory_var = theoretical_variance(q);
            }
            stats.components.push_back(cs);
        }
        result.points.push_back(std::move(stats));
    }
    return result;
}

std::vector<std::pair<int, double>> convergence_study(
    const Experiment& experiment, int workers) {
    if (experiment.sweep_param != "n") {
        throw ConfigError("convergence_study sweeps n");
    }
    if (!experiment.auto_tolerance && experiment.stop_tolerance_bins <= 0.0) {
        throw ConfigError("convergence_study needs a stopping tolerance");
    }
    SweepResult sweep = run_experiment(experiment, workers);
    std::vector<std::pair<int, double>> out;
    out.reserve(sweep.points.size());
    for (const GridPointStats& p : sweep.points) {
        out.emplace_back(static_cast<int>(p.grid_value), p.mean_iterations);
    }
    return out;
}

void SweepResult::write_csv(std::ostream& out) const {
    out << "grid_value,component,rmse,bias,crlb,acrlb,theory_var,mean_iters,"
           "failures\n";
    out << std::setprecision(15);
    for (const GridPointStats& p : points) {
        for (std::size_t c = 0; c < p.components.size(); ++c) {
            const ComponentStats& cs = p.components[c];
            out << p.grid_value << ',' << c + 1 << ',' << cs.rmse << ','
                << cs.bias << ',' << cs.crlb << ',' << cs.acrlb << ','
                << cs.theory_var << ',' << p.mean_iterations << ','
                << p.failures << '\n';
        }
    }
}

nlohmann::json SweepResult::to_json() const {
    nlohmann::json jp = nlohmann::json::array();
    for (const GridPointStats& p : points) {
        nlohmann::json jc = nlohmann::json::array();
        for (const ComponentStats& cs : p.components) {
            jc.push_back({{"rmse", cs.rmse},
                          {"bias", cs.bias},
                          {"crlb", cs.crlb},
                          {"acrlb", cs.acrlb},
                          {"theory_var", cs.theory_var}});
        }
        jp.push_back({{"grid_value", p.grid_value},
                      {"components", jc},
                      {"mean_iters", p.mean_iterations},
                      {"failures", p.failures}});
    }
    return {{"points", jp}};
}

} // namespace multitone
