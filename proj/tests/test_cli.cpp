#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>
#include <unistd.h>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kCli = MULTITONE_CLI_PATH;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("multitone_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const {
        return (path / name).string();
    }
};

int run(const std::string& args) {
    std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    return json::parse(in);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string single_tone_scenario(double freq, int n, double sigma2) {
    json j = {{"n", n},
              {"noise_variance", sigma2},
              {"tones", json::array({{{"amp", 1.0},
                                      {"phase_rad", 0.0},
                                      {"freq", freq}}})}};
    return j.dump();
}

} // namespace

TEST_CASE("synth then estimate recovers a noiseless tone") {
    TempDir tmp;
    write_file(tmp.file("scn.json"), single_tone_scenario(0.25, 32, 0.0));
    REQUIRE(run("synth " + tmp.file("scn.json") + " -o " + tmp.file("x.csv")) == 0);
    REQUIRE(run("estimate " + tmp.file("x.csv") + " -L 1 -Q 2 -o " +
                tmp.file("est.json")) == 0);
    json est = read_json(tmp.file("est.json"));
    REQUIRE(est.at("components").size() == 1);
    const json& c = est["components"][0];
    CHECK(std::abs(c.at("freq").get<double>() - 0.25) < 1e-10);
    CHECK(std::abs(c.at("amp_re").get<double>() - 1.0) < 1e-10);
    CHECK(std::abs(c.at("amp_im").get<double>()) < 1e-10);
    CHECK(est.at("iterations_run").get<int>() == 2);
    CHECK(est.at("residual_history").size() == 2);
}

TEST_CASE("binary sample format round-trips") {
    TempDir tmp;
    write_file(tmp.file("scn.json"), single_tone_scenario(-0.125, 64, 0.0));
    REQUIRE(run("synth " + tmp.file("scn.json") + " -o " + tmp.file("x.bin")) == 0);
    CHECK(fs::file_size(tmp.file("x.bin")) == 64 * 2 * sizeof(double));
    REQUIRE(run("estimate " + tmp.file("x.bin") + " -L 1 -o " +
                tmp.file("est.json")) == 0);
    json est = read_json(tmp.file("est.json"));
    CHECK(std::abs(est["components"][0]["freq"].get<double>() + 0.125) < 1e-10);
}

TEST_CASE("theory subcommand reports the variance-to-bound ratio") {
    TempDir tmp;
    json j = {{"n", 64},
              {"noise_variance", 0.5},
              {"tones",
               json::array({{{"amp", 1.0}, {"phase_rad", 0.0}, {"freq", 10.0 / 64}},
                            {{"amp", 0.8}, {"phase_rad", 0.4}, {"freq", 26.0 / 64}}})}};
    write_file(tmp.file("scn.json"), j.dump());
    REQUIRE(run("theory " + tmp.file("scn.json") + " -o " + tmp.file("rep.json")) == 0);
    json rep = read_json(tmp.file("rep.json"));
    CHECK(rep.at("bias_freq").get<double>() == 0.0);
    CHECK(std::abs(rep.at("variance_to_acrlb_ratio").get<double>() - 1.0147) < 1e-3);
    CHECK(rep.at("crlb_freq") == rep.at("acrlb_freq"));
}

TEST_CASE("experiment outputs are byte-identical for any worker count") {
    TempDir tmp;
    json cfg = {
        {"scenario",
         {{"n", 64},
          {"noise_variance", 0.01},
          {"tones",
           json::array({{{"amp", 1.0}, {"phase_rad", 0.0}, {"freq", 0.1}},
                        {{"amp", 0.9}, {"phase_rad", 0.7}, {"freq", 0.2}}})}}},
        {"sweep", {{"param", "snr_db"}, {"values", {15.0, 25.0}}}},
        {"runs", 48},
        {"base_seed", 99},
        {"q", 2}};
    write_file(tmp.file("exp.json"), cfg.dump());
    REQUIRE(run("experiment " + tmp.file("exp.json") + " --workers 1 -o " +
                tmp.file("out1")) == 0);
    REQUIRE(run("experiment " + tmp.file("exp.json") + " --workers 4 -o " +
                tmp.file("out4")) == 0);
    std::string csv1 = read_file(tmp.file("out1/exp.csv"));
    std::string csv4 = read_file(tmp.file("out4/exp.csv"));
    CHECK(csv1 == csv4);
    CHECK(read_file(tmp.file("out1/exp.json")) == read_file(tmp.file("out4/exp.json")));
    CHECK(csv1.rfind("grid_value,component,", 0) == 0);
}

TEST_CASE("exit codes") {
    TempDir tmp;
    SUBCASE("missing input file -> 4") {
        CHECK(run("synth " + tmp.file("nope.json") + " -o " + tmp.file("x.csv")) == 4);
    }
    SUBCASE("malformed JSON -> 2") {
        write_file(tmp.file("bad.json"), "{not json");
        CHECK(run("synth " + tmp.file("bad.json") + " -o " + tmp.file("x.csv")) == 2);
    }
    SUBCASE("invalid scenario -> 2") {
        write_file(tmp.file("scn.json"), single_tone_scenario(0.25, 4, 0.0));
        CHECK(run("synth " + tmp.file("scn.json") + " -o " + tmp.file("x.csv")) == 2);
    }
    SUBCASE("unresolvable components -> 3") {
        // two tones a tenth of a bin apart cannot be separated
        std::ostringstream samples;
        samples.precision(17);
        for (int i = 0; i < 64; ++i) {
            std::complex<double> v =
                std::polar(1.0, 2.0 * 3.14159265358979323846 * 9.95 * i / 64) +
                std::polar(1.0, 2.0 * 3.14159265358979323846 * 10.05 * i / 64);
            samples << v.real() << "," << v.imag() << "\n";
        }
        write_file(tmp.file("close.csv"), samples.str());
        CHECK(run("estimate " + tmp.file("close.csv") + " -L 2") == 3);
    }
    SUBCASE("bad flag value -> parse failure") {
        write_file(tmp.file("scn.json"), single_tone_scenario(0.25, 32, 0.0));
        CHECK(run("estimate " + tmp.file("scn.json") + " --components") != 0);
    }
}
