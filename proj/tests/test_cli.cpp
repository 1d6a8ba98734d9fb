#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "fgig/cli.hpp"
#include "fgig/errors.hpp"

using namespace fgig;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               fs::path("fgig_cli_test_" + std::to_string(::getpid()) + "_" +
                        std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string str() const { return path.string(); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("argument parsing") {
    const auto cfg = cli::parse_config(
        {"my", "--lambda", "2.5", "--alpha", "0.5", "--n", "64", "--reps", "3", "--seed", "17"});
    CHECK(cfg.experiment == "my");
    CHECK(cfg.lambda == 2.5);
    CHECK(cfg.alpha == 0.5);
    CHECK(cfg.beta == 1.0);
    CHECK(cfg.n == 64);
    CHECK(cfg.reps == 3);
    CHECK(cfg.seed == 17);
    CHECK(cfg.seed_set);
    CHECK(!cfg.exploratory);

    CHECK_THROWS_AS(cli::parse_config({}), ConfigError);
    CHECK_THROWS_AS(cli::parse_config({"frobnicate"}), ConfigError);
    CHECK_THROWS_AS(cli::parse_config({"density", "--bogus", "1"}), ConfigError);
    CHECK_THROWS_AS(cli::parse_config({"density", "--alpha", "-1"}), ConfigError);
    CHECK_THROWS_AS(cli::parse_config({"my", "--seed", "1", "--lambda", "0.5"}), ConfigError);
    CHECK_THROWS_AS(cli::parse_config({"my", "--lambda", "2"}), ConfigError); // no seed
    CHECK_THROWS_AS(cli::parse_config({"regression", "--order", "9"}), ConfigError);
    CHECK_THROWS_AS(cli::parse_config({"convolve", "--lambda", "1.0"}), ConfigError);

    // Repeated flags: the last one wins.
    const auto twice = cli::parse_config({"density", "--lambda", "2", "--lambda", "3"});
    CHECK(twice.lambda == 3.0);

    try {
        cli::parse_config({"my", "--seed", "1", "--lambda", "0.5"});
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("lambda > 1") != std::string::npos);
    }

    CHECK_THROWS_AS(cli::parse_config({"--help"}), cli::HelpRequested);
    try {
        cli::parse_config({"--help"});
    } catch (const cli::HelpRequested& h) {
        CHECK(h.text.find("support") != std::string::npos);
        CHECK(h.text.find("my") != std::string::npos);
    }
}

TEST_CASE("config files") {
    TempDir td;
    const fs::path file = td.path / "run.cfg";
    {
        std::ofstream out(file);
        out << "# smoke configuration\n"
            << "lambda = 2.5\n"
            << "n = 64\n"
            << "seed = 3\n";
    }
    const auto cfg = cli::parse_config({"my", "--config", file.string(), "--reps", "2"});
    CHECK(cfg.lambda == 2.5);
    CHECK(cfg.n == 64);
    CHECK(cfg.seed == 3);
    CHECK(cfg.seed_set);
    CHECK(cfg.reps == 2);

    // Explicit flags override file entries.
    const auto over =
        cli::parse_config({"my", "--config", file.string(), "--lambda", "4", "--reps", "2"});
    CHECK(over.lambda == 4.0);

    const fs::path dup = td.path / "dup.cfg";
    {
        std::ofstream out(dup);
        out << "lambda=2\nlambda=3\n";
    }
    try {
        cli::parse_config({"density", "--config", dup.string()});
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        CHECK(what.find("dup.cfg:2") != std::string::npos);
        CHECK(what.find("duplicate") != std::string::npos);
    }

    const fs::path bad = td.path / "bad.cfg";
    {
        std::ofstream out(bad);
        out << "unknownkey=1\n";
    }
    CHECK_THROWS_AS(cli::parse_config({"density", "--config", bad.string()}), ConfigError);
    CHECK_THROWS_AS(cli::parse_config({"density", "--config", (td.path / "nope.cfg").string()}),
                    ConfigError);
    CHECK_THROWS_AS(cli::parse_config({"--config", bad.string(), "density"}), ConfigError);
}

TEST_CASE("support run writes its artifacts") {
    TempDir td;
    cli::RunConfig cfg = cli::parse_config({"support", "--lambda", "0", "--out", td.str()});
    CHECK(cli::run(cfg) == 0);
    CHECK(fs::exists(td.path / "report.json"));
    CHECK(fs::exists(td.path / "residuals.csv"));
    CHECK(fs::exists(td.path / "support.csv"));

    const auto j = nlohmann::json::parse(slurp(td.path / "report.json"));
    CHECK(j.at("experiment") == "support");
    CHECK(j.at("passed") == true);
    bool found = false;
    for (const auto& row : j.at("checks"))
        if (row.at("name") == "edge_residual_1") found = true;
    CHECK(found);

    const std::string csv = slurp(td.path / "support.csv");
    CHECK(csv.rfind("quantity,value\n", 0) == 0);
    CHECK(csv.find("\na,0.26794919243112") != std::string::npos);
}

TEST_CASE("density, moments, cumulants, quadratic runs succeed") {
    TempDir td;
    CHECK(cli::run(cli::parse_config({"density", "--grid", "64", "--out", td.str()})) == 0);
    CHECK(fs::exists(td.path / "density.csv"));
    CHECK(cli::run(cli::parse_config({"moments", "--order", "6", "--out", td.str()})) == 0);
    CHECK(fs::exists(td.path / "moments.csv"));
    CHECK(cli::run(cli::parse_config({"cumulants", "--order", "8", "--out", td.str()})) == 0);
    CHECK(fs::exists(td.path / "cumulants.csv"));
    CHECK(cli::run(cli::parse_config({"quadratic", "--order", "6", "--out", td.str()})) == 0);
    CHECK(fs::exists(td.path / "quadratic.csv"));
    CHECK(cli::run(cli::parse_config({"inverse", "--grid", "50", "--out", td.str()})) == 0);
    CHECK(cli::run(cli::parse_config({"regression", "--order", "4", "--out", td.str()})) == 0);
    CHECK(cli::run(cli::parse_config({"convolve", "--grid", "40", "--out", td.str()})) == 0);

    // moments.csv carries the negative orders down to -2.
    const std::string csv = slurp(td.path / "moments.csv");
    CHECK(csv.find("\n-2,") != std::string::npos);
    CHECK(csv.find("\n-1,") != std::string::npos);
}

TEST_CASE("matrix run writes spectra, replicates and histograms") {
    TempDir td;
    const auto cfg = cli::parse_config(
        {"my", "--n", "32", "--reps", "3", "--seed", "11", "--out", td.str()});
    // The finite-size tolerances are calibrated for n = 256, so this smoke
    // size may legitimately report a failed check; artifacts are written
    // either way and the verdict must be deterministic.
    const int rc1 = cli::run(cfg);
    CHECK((rc1 == 0 || rc1 == 1));
    for (const char* name : {"report.json", "residuals.csv", "esd_u.csv", "esd_v.csv",
                             "replicates.csv", "hist_u.svg", "hist_v.svg"})
        CHECK_MESSAGE(fs::exists(td.path / name), name);
    const std::string reps = slurp(td.path / "replicates.csv");
    CHECK(reps.rfind("index,excluded,ks_u,ks_v,kappa2,alt4,hua\n", 0) == 0);
    const std::string svg = slurp(td.path / "hist_u.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);

    // Byte-identical artifacts on the same seed.
    TempDir td2;
    auto cfg2 = cfg;
    cfg2.out_dir = td2.str();
    CHECK(cli::run(cfg2) == rc1);
    for (const char* name : {"esd_u.csv", "esd_v.csv", "replicates.csv", "residuals.csv",
                             "hist_u.svg", "hist_v.svg"})
        CHECK_MESSAGE(slurp(td.path / name) == slurp(td2.path / name), name);

    // A different seed changes the spectra.
    TempDir td3;
    auto cfg3 = cfg;
    cfg3.seed = 12;
    cfg3.out_dir = td3.str();
    const int rc3 = cli::run(cfg3);
    CHECK((rc3 == 0 || rc3 == 1));
    CHECK(slurp(td.path / "esd_u.csv") != slurp(td3.path / "esd_u.csv"));
}

TEST_CASE("failed checks and io problems map to exit codes") {
    // Tolerances are calibrated for n = 256; tiny n with few replicates fails
    // the finite-size checks and must exit 1, still writing the report.
    TempDir td;
    const auto cfg = cli::parse_config(
        {"my", "--n", "8", "--reps", "2", "--seed", "1", "--out", td.str()});
    const int rc = cli::run(cfg);
    CHECK(rc == 1);
    CHECK(fs::exists(td.path / "report.json"));
    const auto j = nlohmann::json::parse(slurp(td.path / "report.json"));
    CHECK(j.at("passed") == false);

    cli::RunConfig bad = cli::parse_config({"support"});
    bad.out_dir = "/proc/definitely/not/writable";
    CHECK(cli::run(bad) == 2);
}

TEST_CASE("main entry exit codes") {
    CHECK(cli::main_entry({"--help"}) == 0);
    CHECK(cli::main_entry({"nonsense"}) == 2);
    CHECK(cli::main_entry({"my"}) == 2); // missing seed
    TempDir td;
    CHECK(cli::main_entry({"support", "--out", td.str()}) == 0);
}
