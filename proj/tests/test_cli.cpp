#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"

#include "ddqpc/sweep.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code = -1;
    std::string text; // stdout and stderr combined
};

fs::path work_dir() {
    const fs::path dir = fs::temp_directory_path() / "ddqpc_cli_tests";
    fs::create_directories(dir);
    return dir;
}

CliRun run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path capture =
        work_dir() / ("capture_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    const std::string cmd =
        std::string(DDQPC_CLI_PATH) + " " + args + " > " + capture.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    CliRun r;
    if (raw != -1 && WIFEXITED(raw)) r.code = WEXITSTATUS(raw);
    std::ifstream in(capture, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    r.text = ss.str();
    fs::remove(capture);
    return r;
}

double value_after(const std::string& text, const std::string& key) {
    const std::size_t pos = text.find(key);
    REQUIRE_MESSAGE(pos != std::string::npos, "missing '" << key << "' in:\n" << text);
    return std::stod(text.substr(pos + key.size()));
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t line_count(const std::string& text) {
    std::size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

} // namespace

TEST_CASE("help text lists every subcommand and exits cleanly") {
    const CliRun r = run_cli("--help");
    CHECK(r.code == 0);
    for (const char* name : {"simulate", "sweep", "figures", "optimize", "cycling"})
        CHECK(r.text.find(name) != std::string::npos);
}

TEST_CASE("simulate reproduces the pinned trajectory endpoint") {
    const fs::path csv = work_dir() / "sim.csv";
    const CliRun r = run_cli("simulate --alpha 5 --tau-max 1 --samples 101 --output " +
                             csv.string());
    REQUIRE_MESSAGE(r.code == 0, r.text);
    CHECK(r.text.find("wrote 101 rows") != std::string::npos);
    CHECK(value_after(r.text, "final_entropy = ") ==
          doctest::Approx(0.859343095274).epsilon(1e-9));
    const std::string body = slurp(csv);
    CHECK(line_count(body) == 102); // header plus one line per sample
    CHECK(body.rfind(ddqpc::kCsvHeader, 0) == 0);
}

TEST_CASE("physical detector parameters reduce to the equivalent coupling") {
    // t1 * vd / (2 pi) = 5 up to the precision of the bias value given here
    const fs::path csv = work_dir() / "phys.csv";
    const CliRun r = run_cli("simulate --t1 0.5 --vd 62.8318530718 --omega0 1 "
                             "--tau-max 1 --samples 101 --output " +
                             csv.string());
    REQUIRE_MESSAGE(r.code == 0, r.text);
    CHECK(std::abs(value_after(r.text, "final_entropy = ") - 0.859343095274) < 1e-7);
}

TEST_CASE("simulate integrates asymmetric dots automatically") {
    const fs::path csv = work_dir() / "eps.csv";
    const CliRun r = run_cli("simulate --alpha 1 --epsilon 1.5 --tau-max 1 --samples 21 "
                             "--output " +
                             csv.string());
    REQUIRE_MESSAGE(r.code == 0, r.text);
    CHECK(r.text.find("wrote 21 rows") != std::string::npos);
}

TEST_CASE("configuration mistakes exit with the usage code") {
    const std::vector<std::string> bad = {
        "",                                                  // no subcommand
        "simulate --alpha 1 --t1 0.5 --vd 1 --omega0 1",     // two parameterizations
        "simulate --tau-max 1",                              // neither parameterization
        "simulate --t1 0.5 --vd 1",                          // incomplete physical set
        "simulate --epsilon 1 --t1 0.5 --vd 1 --omega0 1",   // epsilon is model-space only
        "simulate --alpha -1",                               // negative coupling
        "simulate --alpha 1 --samples 1",                    // degenerate grid
        "simulate --alpha 1 --method bogus",                 // unknown method
        "sweep --thetas 0",                                  // missing required --alphas
        "figures fig9",                                      // unknown preset
        "optimize --theta 0 --alpha-min 10 --alpha-max 5",   // inverted interval
        "cycling --alpha 0.01 --resolution 101",             // grid too coarse for the period
        "cycling --alpha 0.01 --resolution 2",               // below the minimum
    };
    for (const std::string& args : bad) {
        const CliRun r = run_cli(args);
        CAPTURE(args);
        CHECK(r.code == 2);
    }
}

TEST_CASE("numeric failures exit with code 1") {
    CHECK(run_cli("simulate --alpha 1 --epsilon 0.5 --method closed-form").code == 1);
    CHECK(run_cli("sweep --alphas 1 --epsilon 1.5 --method closed-form").code == 1);
    CHECK(run_cli("simulate --alpha 1 --output /nonexistent_ddqpc/x.csv").code == 1);
}

TEST_CASE("figures writes the preset CSV and its summary") {
    const fs::path dir = work_dir() / "figs";
    fs::remove_all(dir);
    const CliRun r = run_cli("figures fig3 --out-dir " + dir.string());
    REQUIRE_MESSAGE(r.code == 0, r.text);
    REQUIRE(fs::exists(dir / "fig3.csv"));
    REQUIRE(fs::exists(dir / "fig3_summary.json"));

    const nlohmann::json j = nlohmann::json::parse(slurp(dir / "fig3_summary.json"));
    CHECK(j.at("figure") == "fig3");
    CHECK(j.at("primary_output") == "coherence");
    CHECK(j.at("n_curves") == 2);
    CHECK(j.at("n_rows") == 2000);
    CHECK(j.at("curves")[0].at("alpha").get<double>() == 0.01);
    CHECK(slurp(dir / "fig3.csv").rfind(ddqpc::kCsvHeader, 0) == 0);
}

TEST_CASE("optimize reports the interior maximum and the fixed-coupling ratio") {
    const CliRun r = run_cli("optimize --theta 0 --tau 1 --alpha-min 0.5 --alpha-max 20");
    REQUIRE_MESSAGE(r.code == 0, r.text);
    const double alpha_star = value_after(r.text, "alpha_star = ");
    CHECK(alpha_star > 4.9);
    CHECK(alpha_star < 5.0);
    CHECK(value_after(r.text, "entropy_star = ") == doctest::Approx(0.859369222).epsilon(1e-6));
    CHECK(value_after(r.text, "entropy_at_5 = ") == doctest::Approx(0.859343095).epsilon(1e-6));
    CHECK(value_after(r.text, "ratio_5_to_star = ") >= 0.95);
    CHECK(r.text.find("boundary") == std::string::npos);
}

TEST_CASE("cycling emits a JSON report on stdout") {
    const CliRun r = run_cli("cycling --alpha 0.01");
    REQUIRE_MESSAGE(r.code == 0, r.text);
    const nlohmann::json j = nlohmann::json::parse(r.text);
    CHECK(j.at("branch") == "oscillatory");
    CHECK(j.at("zero_count") == 6);
    REQUIRE(j.at("zero_times").size() == 6);
    CHECK(j.at("zero_times")[0].get<double>() == doctest::Approx(1.5708).epsilon(1e-4));
    CHECK(j.at("period_estimate").get<double>() == doctest::Approx(1.570798).epsilon(1e-5));

    SUBCASE("overdamped couplings report no zeros and no period") {
        const CliRun o = run_cli("cycling --alpha 9");
        REQUIRE_MESSAGE(o.code == 0, o.text);
        const nlohmann::json jo = nlohmann::json::parse(o.text);
        CHECK(jo.at("branch") == "overdamped");
        CHECK(jo.at("zero_count") == 0);
        CHECK(jo.at("period_estimate").is_null());
    }
    SUBCASE("the report can be written to a file instead") {
        const fs::path out = work_dir() / "cycling.json";
        const CliRun f = run_cli("cycling --alpha 0.01 --output " + out.string());
        REQUIRE_MESSAGE(f.code == 0, f.text);
        CHECK(f.text.find("wrote report to") != std::string::npos);
        CHECK(nlohmann::json::parse(slurp(out)).at("zero_count") == 6);
    }
}

TEST_CASE("sweep output is byte-identical for any worker count") {
    const fs::path dir = work_dir();
    const std::string common = "sweep --alphas 0.5,2 --thetas 0,90 --samples 50 --tau-max 2 ";
    const CliRun r1 = run_cli(common + "--workers 1 --output " + (dir / "s1.csv").string() +
                              " --summary " + (dir / "s1.json").string());
    const CliRun r3 = run_cli(common + "--workers 3 --output " + (dir / "s3.csv").string() +
                              " --summary " + (dir / "s3.json").string());
    REQUIRE_MESSAGE(r1.code == 0, r1.text);
    REQUIRE_MESSAGE(r3.code == 0, r3.text);
    CHECK(r1.text.find("wrote 200 rows") != std::string::npos);
    CHECK(slurp(dir / "s1.csv") == slurp(dir / "s3.csv"));
    CHECK(slurp(dir / "s1.json") == slurp(dir / "s3.json"));
    CHECK(nlohmann::json::parse(slurp(dir / "s1.json")).at("n_curves") == 4);
}
