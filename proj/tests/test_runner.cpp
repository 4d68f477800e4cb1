#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "collarspec/errors.hpp"
#include "collarspec/experiment_config.hpp"
#include "collarspec/runner.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace collarspec;
namespace fs = std::filesystem;

namespace {

fs::path write_temp_config(const std::string& body, const std::string& name) {
    const fs::path p = fs::temp_directory_path() / name;
    std::ofstream out(p);
    out << body;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kSmallConfig = R"cfg(
[profile]
kind = hyperbolic

[run]
epsilons = 1e-1, 5e-2, 2e-2, 1e-2
lambda_max = 4
seed = 7

[spectrum]
eps = 0.1
)cfg";

} // namespace

TEST_CASE("config parsing and overrides") {
    auto p = write_temp_config(kSmallConfig, "collarspec_cfg_basic.cfg");
    auto cfg = ExperimentConfig::load(p);
    CHECK(cfg.profile_kind == "hyperbolic");
    CHECK(cfg.lambda_max == 4.0);
    CHECK(cfg.epsilons.size() == 4);
    CHECK(cfg.seed == 7);

    auto cfg2 = ExperimentConfig::load(
        p, {"run.lambda_max=6", "profile.kind=linear-pair", "profile.params=2,1"});
    CHECK(cfg2.lambda_max == 6.0);
    CHECK(cfg2.profile_kind == "linear-pair");
    REQUIRE(cfg2.profile_params.size() == 2);
    CHECK(cfg2.profile_params[1] == 1.0);

    SUBCASE("unknown keys are rejected") {
        CHECK_THROWS_WITH_AS(ExperimentConfig::load(p, {"run.typo=1"}),
                             doctest::Contains("unknown configuration key"),
                             validation_error);
        auto bad = write_temp_config("[run]\nbogus = 1\n", "collarspec_bad.cfg");
        CHECK_THROWS_AS(ExperimentConfig::load(bad), validation_error);
    }

    SUBCASE("missing config file") {
        CHECK_THROWS_WITH_AS(ExperimentConfig::load("/nonexistent/x.cfg"),
                             doctest::Contains("missing config"),
                             validation_error);
    }

    SUBCASE("canonical form round-trips") {
        auto canon = cfg2.canonical();
        auto q = write_temp_config("", "collarspec_roundtrip.cfg");
        {
            // canonical lines are `section.key = value`; rewrite as sections
            std::ofstream out(q);
            std::istringstream in(canon);
            std::string line;
            while (std::getline(in, line)) {
                const auto dot = line.find('.');
                const auto eq = line.find('=');
                out << '[' << line.substr(0, dot) << "]\n";
                out << line.substr(dot + 1, eq - dot - 1) << "="
                    << line.substr(eq + 1) << "\n";
            }
        }
        auto cfg3 = ExperimentConfig::load(q);
        CHECK(cfg3.canonical() == canon);
        CHECK(cfg3.hash() == cfg2.hash());
        CHECK(cfg3.hash() != cfg.hash());
    }
}

TEST_CASE("validate subcommand reports the violated precondition") {
    auto p = write_temp_config(kSmallConfig, "collarspec_cfg_val.cfg");
    auto cfg = ExperimentConfig::load(p, {"collar.a=-0.5"});
    auto res = run_subcommand("validate", cfg, fs::temp_directory_path() / "csv_val");
    CHECK(res.exit_code == kExitValidation);
    CHECK(res.message.find("a must satisfy a <= -1") != std::string::npos);

    auto ok = ExperimentConfig::load(p);
    auto res2 = run_subcommand("validate", ok, fs::temp_directory_path() / "csv_val");
    CHECK(res2.exit_code == kExitOk);

    auto res3 = run_subcommand("no-such-command", ok,
                               fs::temp_directory_path() / "csv_val");
    CHECK(res3.exit_code == kExitValidation);
}

TEST_CASE("transform-check emits a constant potential at eps = 0") {
    auto p = write_temp_config(kSmallConfig, "collarspec_cfg_tc.cfg");
    auto cfg = ExperimentConfig::load(p);
    const fs::path out = fs::temp_directory_path() / "csv_tc";
    auto res = run_subcommand("transform-check", cfg, out);
    REQUIRE(res.exit_code == kExitOk);

    std::ifstream in(out / "transform_check.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "side,s,V");
    int rows = 0;
    while (std::getline(in, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.rfind(',');
        const double v = std::strtod(line.c_str() + c2 + 1, nullptr);
        CHECK(std::abs(v - 0.25) < 1e-10);
        const std::string side = line.substr(0, c1);
        CHECK((side == "plus" || side == "minus"));
        ++rows;
    }
    CHECK(rows == 2 * cfg.transform_samples);
}

TEST_CASE("count subcommand writes a report and deterministic CSV bodies") {
    auto p = write_temp_config(kSmallConfig, "collarspec_cfg_count.cfg");
    auto cfg = ExperimentConfig::load(p);
    const fs::path out1 = fs::temp_directory_path() / "csv_cnt1";
    const fs::path out2 = fs::temp_directory_path() / "csv_cnt2";
    fs::remove_all(out1);
    fs::remove_all(out2);

    auto r1 = run_subcommand("count", cfg, out1);
    auto r2 = run_subcommand("count", cfg, out2);
    REQUIRE(r1.exit_code == kExitOk);
    REQUIRE(r2.exit_code == kExitOk);

    CHECK(slurp(out1 / "counts.csv") == slurp(out2 / "counts.csv"));
    CHECK(slurp(out1 / "count_report.json") == slurp(out2 / "count_report.json"));
    CHECK(!slurp(out1 / "counts.csv").empty());

    // manifest carries the config hash and artifact names
    const std::string manifest = slurp(out1 / "manifest.json");
    CHECK(manifest.find("config_hash") != std::string::npos);
    CHECK(manifest.find("counts.csv") != std::string::npos);

    // CSV uses LF endings and a header row
    const std::string body = slurp(out1 / "counts.csv");
    CHECK(body.find('\r') == std::string::npos);
    CHECK(body.rfind("eps,ln_inv_eps,N_D,N_N,predicted\n", 0) == 0);
}

TEST_CASE("oscillation subcommand") {
    auto p = write_temp_config(kSmallConfig, "collarspec_cfg_osc.cfg");
    auto cfg = ExperimentConfig::load(p, {"oscillation.a_grid=1,5,10"});
    const fs::path out = fs::temp_directory_path() / "csv_osc";
    auto res = run_subcommand("oscillation", cfg, out);
    REQUIRE(res.exit_code == kExitOk);
    const std::string body = slurp(out / "oscillation.csv");
    CHECK(body.rfind("a,N_D,N_N,predicted,dev_D,dev_N\n", 0) == 0);
    // header + 3 rows
    int lines = 0;
    for (char ch : body)
        if (ch == '\n') ++lines;
    CHECK(lines == 4);
}

TEST_CASE("spectrum subcommand merged CSV") {
    auto p = write_temp_config(kSmallConfig, "collarspec_cfg_spec.cfg");
    auto cfg = ExperimentConfig::load(p, {"run.lambda_max=60", "spectrum.eps=0.35"});
    const fs::path out = fs::temp_directory_path() / "csv_spec";
    auto res = run_subcommand("spectrum", cfg, out);
    REQUIRE(res.exit_code == kExitOk);
    const std::string body = slurp(out / "spectrum.csv");
    CHECK(body.rfind("lambda,mode_k,mu,channel_index,bc\n", 0) == 0);
    CHECK(body.find("dirichlet") != std::string::npos);
}
