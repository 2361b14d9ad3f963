#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "multitone/errors.hpp"
#include "multitone/estimator.hpp"
#include "multitone/harness.hpp"
#include "multitone/signal.hpp"
#include "multitone/theory.hpp"

namespace {

using multitone::Complex;
using multitone::SampleBuffer;

constexpr int kExitParse = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

std::string infer_format(const std::string& path, const std::string& override_fmt) {
    if (!override_fmt.empty()) {
        return override_fmt;
    }
    return std::filesystem::path(path).extension() == ".bin" ? "bin" : "csv";
}

SampleBuffer read_samples(const std::string& path, const std::string& fmt) {
    SampleBuffer x;
    if (fmt == "bin") {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw multitone::IoError("cannot open " + path);
        }
        double pair[2];
        while (in.read(reinterpret_cast<char*>(pair), sizeof(pair))) {
            x.emplace_back(pair[0], pair[1]);
        }
    } else {
        std::ifstream in(path);
        if (!in) {
            throw multitone::IoError("cannot open " + path);
        }
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) {
                continue;
            }
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream ls(line);
            double re = 0.0, im = 0.0;
            if (!(ls >> re >> im)) {
                throw multitone::IoError("malformed sample line: " + line);
            }
            x.emplace_back(re, im);
        }
    }
    if (x.empty()) {
        throw multitone::IoError("no samples in " + path);
    }
    return x;
}

void write_samples(const std::string& path, const std::string& fmt,
                   const SampleBuffer& x) {
    if (fmt == "bin") {
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw multitone::IoError("cannot write " + path);
        }
        for (const Complex& s : x) {
            double pair[2] = {s.real(), s.imag()};
            out.write(reinterpret_cast<const char*>(pair), sizeof(pair));
        }
    } else {
        std::ofstream out(path);
        if (!out) {
            throw multitone::IoError("cannot write " + path);
        }
        out << std::setprecision(17);
        for (const Complex& s : x) {
            out << s.real() << ',' << s.imag() << '\n';
        }
    }
}

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw multitone::IoError("cannot open " + path);
    }
    return nlohmann::json::parse(in);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) {
        throw multitone::IoError("cannot write " + path);
    }
    out << text;
}

int default_workers() {
    if (const char* env = std::getenv("MULTITONE_WORKERS")) {
        int w = std::atoi(env);
        if (w >= 1) {
            return w;
        }
    }
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Iterative leakage-subtraction frequency estimation for "
                 "multiple complex exponentials"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "Synthesize a scenario to a sample file");
    std::string synth_scenario, synth_output, synth_fmt;
    std::uint64_t synth_seed = 0;
    synth->add_option("scenario", synth_scenario, "Scenario JSON file")->required();
    synth->add_option("--seed", synth_seed, "RNG seed");
    synth->add_option("--output,-o", synth_output, "Output sample file")->required();
    synth->add_option("--format", synth_fmt, "csv or bin (default: by extension)");

    // estimate
    auto* est = app.add_subcommand("estimate", "Estimate tone parameters from samples");
    std::string est_input, est_output, est_fmt;
    int est_L = 1, est_Q = 2;
    double est_tol = 0.0;
    bool est_nosub = false;
    est->add_option("input", est_input, "Sample file")->required();
    est->add_option("--components,-L", est_L, "Number of components")->required();
    est->add_option("--iterations,-Q", est_Q, "Iteration budget");
    est->add_option("--tolerance-bins", est_tol, "Early-stop tolerance (bins)");
    est->add_flag("--no-subtraction", est_nosub, "Disable leakage subtraction");
    est->add_option("--format", est_fmt, "csv or bin (default: by extension)");
    est->add_option("--output,-o", est_output, "Output JSON (default: stdout)");

    // theory
    auto* theory = app.add_subcommand("theory", "Evaluate closed-form predictions");
    std::string theory_scenario, theory_output;
    int theory_component = 1;
    std::vector<double> theory_errors;
    theory->add_option("scenario", theory_scenario, "Scenario JSON file")->required();
    theory->add_option("--component", theory_component, "Component index (1-based)");
    theory->add_option("--residual-errors", theory_errors,
                       "Assumed residual errors (bins), one per component");
    theory->add_option("--output,-o", theory_output, "Output JSON (default: stdout)");

    // experiment
    auto* exp = app.add_subcommand("experiment", "Run a Monte Carlo experiment");
    std::string exp_config, exp_outdir = ".";
    int exp_workers = default_workers();
    exp->add_option("config", exp_config, "Experiment JSON file")->required();
    exp->add_option("--output-dir,-o", exp_outdir, "Output directory");
    exp->add_option("--workers", exp_workers, "Worker thread count");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*synth) {
            auto scenario = multitone::Scenario::from_json(load_json(synth_scenario));
            auto x = multitone::synthesize(scenario, synth_seed);
            write_samples(synth_output, infer_format(synth_output, synth_fmt), x);
        } else if (*est) {
            auto x = read_samples(est_input, infer_format(est_input, est_fmt));
            multitone::EstimatorConfig cfg;
            cfg.num_components = est_L;
            cfg.max_iterations = est_Q;
            cfg.stop_tolerance_bins = est_tol;
            auto result = est_nosub ? multitone::estimate_no_subtraction(x, cfg)
                                    : multitone::estimate(x, cfg);
            std::string text =
                result.to_json(static_cast<int>(x.size())).dump(2) + "\n";
            if (est_output.empty()) {
                std::cout << text;
            } else {
                write_text(est_output, text);
            }
        } else if (*theory) {
            multitone::TheoryQuery query;
            query.scenario = multitone::Scenario::from_json(load_json(theory_scenario));
            query.component_index = theory_component;
            query.assumed_residual_errors = theory_errors;
            if (query.assumed_residual_errors.empty()) {
                query.assumed_residual_errors.assign(query.scenario.tones.size(), 0.0);
            }
            std::string text = multitone::evaluate(query).to_json().dump(2) + "\n";
            if (theory_output.empty()) {
                std::cout << text;
            } else {
                write_text(theory_output, text);
            }
        } else if (*exp) {
            auto experiment = multitone::Experiment::from_json(load_json(exp_config));
            auto sweep = multitone::run_experiment(experiment, exp_workers);
            std::filesystem::create_directories(exp_outdir);
            std::string stem = std::filesystem::path(exp_config).stem().string();
            std::ostringstream csv;
            sweep.write_csv(csv);
            write_text(exp_outdir + "/" + stem + ".csv", csv.str());
            write_text(exp_outdir + "/" + stem + ".json",
                       sweep.to_json().dump(2) + "\n");
        }
    } catch (const multitone::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const multitone::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const multitone::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitParse;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return 0;
}
