#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lns1d/cli.hpp"
#include "lns1d/errors.hpp"

using namespace lns1d;
namespace fs = std::filesystem;

namespace {

int invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "lns1d");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return cli_main(static_cast<int>(argv.size()), argv.data());
}

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("lns1d_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string first_line(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    return line;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(cell);
        rows.push_back(row);
    }
    return rows;
}

struct EnvGuard {
    EnvGuard() { unsetenv("LNS1D_OUT_DIR"); }
    ~EnvGuard() { unsetenv("LNS1D_OUT_DIR"); }
};

} // namespace

TEST_CASE("config parsing") {
    RunConfig c;
    apply_config_text(c, "# comment\n"
                         "scenario.kind = random_smooth   # trailing comment\n"
                         "scenario.modes = 1, 3\n"
                         "scenario.seed = 7\n"
                         "params.beta = 0.5\n"
                         "params.conduction = false\n"
                         "scheme.picard_max = 12\n"
                         "output.snapshot_times = 0, 2.5\n"
                         "convergence.levels = 16:1e-3, 32:5e-4, 64:2.5e-4\n"
                         "\n");
    CHECK(c.scenario.kind == ScenarioKind::RandomSmooth);
    CHECK(c.scenario.modes == std::vector<int>{1, 3});
    CHECK(c.scenario.seed == 7);
    CHECK(c.params.beta == 0.5);
    CHECK_FALSE(c.params.conduction);
    CHECK(c.scheme.picard_max == 12);
    CHECK(c.snapshot_times == std::vector<double>{0.0, 2.5});
    REQUIRE(c.convergence_levels.size() == 3);
    CHECK(c.convergence_levels[1].n == 32);
    CHECK(c.convergence_levels[1].dt == 5e-4);

    CHECK_THROWS_AS(apply_config_text(c, "scenario.nope = 1\n"), ValidationError);
    CHECK_THROWS_AS(apply_config_text(c, "scenario.n = 12.5\n"), ValidationError);
    CHECK_THROWS_AS(apply_config_text(c, "scheme.safety = fast\n"), ValidationError);
    CHECK_THROWS_AS(apply_config_text(c, "params.conduction = maybe\n"), ValidationError);
    CHECK_THROWS_AS(apply_config_text(c, "just a line\n"), ValidationError);
    CHECK_THROWS_AS(apply_config_text(c, "scenario.kind = vortex\n"), ValidationError);

    // Every documented key is accepted by the schema.
    for (const auto& k : config_keys()) {
        CHECK(k.find('.') != std::string::npos);
    }
    CHECK(config_keys().size() >= 30);
}

TEST_CASE("load_config: overrides and the output-root variable") {
    EnvGuard env;
    const auto c = load_config(std::nullopt, {"params.beta=2", "output.dir = here"});
    CHECK(c.params.beta == 2.0);
    CHECK(c.scenario.beta == 2.0);
    CHECK(c.out_dir == "here");
    setenv("LNS1D_OUT_DIR", "/tmp/elsewhere", 1);
    CHECK(load_config(std::nullopt, {"output.dir=here"}).out_dir == "/tmp/elsewhere");
    CHECK_THROWS_AS(load_config(fs::path("/nonexistent/cfg"), {}), ValidationError);
    CHECK_THROWS_AS(load_config(std::nullopt, {"novalue"}), ValidationError);
}

TEST_CASE("simulate: trivial preset") {
    EnvGuard env;
    const auto dir = fresh_dir("trivial");
    const int code = invoke({"simulate", "--set", "scenario.kind=trivial", "--set", "scenario.n=32", "--set",
                             "scenario.t_hat_end=5", "--set", "scenario.sample_every=0.05", "--set",
                             "output.dir=" + dir.string()});
    CHECK(code == 0);
    CHECK(first_line(dir / "timeseries.csv") ==
          "t_hat,E,momentum,entropy,V,theta_bar,u_min,u_max,theta_min,theta_max,h1_dist,psi_energy");
    CHECK(first_line(dir / "snapshots.csv") == "t_hat,x,u,v,theta");

    const auto rows = read_csv(dir / "timeseries.csv");
    CHECK(rows.size() == 102);
    for (std::size_t k = 1; k < rows.size(); ++k) CHECK(std::stod(rows[k][10]) <= 1e-10);

    const auto j = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(std::abs(j["initial"]["A"].get<double>() - 1.0) <= 1e-12);
    CHECK(j["status"] == "completed");
    CHECK(j["decay_fit"].is_null());
}

TEST_CASE("simulate: perturbed preset conserves energy; summary.json round-trips") {
    EnvGuard env;
    const auto dir = fresh_dir("perturbed");
    CHECK(invoke({"simulate", "--original-time", "--set", "scenario.n=64", "--set", "scenario.t_hat_end=2",
                  "--set", "output.dir=" + dir.string()}) == 0);
    CHECK(first_line(dir / "timeseries.csv") ==
          "t_hat,E,momentum,entropy,V,theta_bar,u_min,u_max,theta_min,theta_max,h1_dist,psi_energy,t");
    CHECK(first_line(dir / "snapshots.csv") == "t_hat,x,u,v,theta,t");

    const auto rows = read_csv(dir / "timeseries.csv");
    const double E0 = std::stod(rows[1][1]);
    for (std::size_t k = 1; k < rows.size(); ++k) {
        CHECK(std::abs(std::stod(rows[k][1]) - E0) / E0 <= 1e-6);
        CHECK(std::stod(rows[k][12]) == doctest::Approx(std::expm1(std::stod(rows[k][0]))));
    }

    const std::string text = slurp(dir / "summary.json");
    CHECK(nlohmann::json::parse(text).dump(2) + "\n" == text);
}

TEST_CASE("simulate: output root from the environment") {
    EnvGuard env;
    const auto dir = fresh_dir("envroot");
    setenv("LNS1D_OUT_DIR", dir.string().c_str(), 1);
    CHECK(invoke({"simulate", "--set", "scenario.n=16", "--set", "scenario.t_hat_end=0.1", "--set",
                  "output.dir=ignored"}) == 0);
    CHECK(fs::exists(dir / "summary.json"));
    CHECK_FALSE(fs::exists("ignored"));
}

TEST_CASE("exit codes") {
    EnvGuard env;
    const auto dir = fresh_dir("errors");
    CHECK(invoke({"simulate", "--config", (dir / "missing.cfg").string(), "--set",
                  "output.dir=" + dir.string()}) == 2);
    CHECK_FALSE(fs::exists(dir));
    CHECK(invoke({"simulate", "--set", "bogus=1"}) == 2);
    CHECK(invoke({"simulate", "--set", "scenario.amp=0.9", "--set", "output.dir=" + dir.string()}) == 2);
    CHECK_FALSE(fs::exists(dir));
    CHECK(invoke({"teleport"}) == 2);
    CHECK(invoke({}) == 2);
    CHECK(invoke({"simulate", "--jobs", "0"}) == 2);
    CHECK(invoke({"verify", "--set", "verify.betas=", "--set", "output.dir=" + dir.string()}) == 2);
    CHECK(invoke({"convergence", "--set", "convergence.levels=32:1e-3,64:5e-4", "--set",
                  "output.dir=" + dir.string()}) == 2);
    CHECK(invoke({"simulate", "--help"}) == 0);

    // Step failure: partial outputs plus a failure record.
    const auto fail_dir = fresh_dir("stepfail");
    CHECK(invoke({"simulate", "--set", "scheme.positivity_floor=2", "--set", "scenario.n=16", "--set",
                  "output.dir=" + fail_dir.string()}) == 3);
    const auto j = nlohmann::json::parse(slurp(fail_dir / "summary.json"));
    CHECK(j["status"] == "step_failure");
    CHECK(j["failure"]["field"] == "u");
    CHECK(read_csv(fail_dir / "timeseries.csv").size() == 2);
}

TEST_CASE("config file drives a run") {
    EnvGuard env;
    const auto dir = fresh_dir("cfgfile");
    fs::create_directories(dir);
    {
        std::ofstream cfg(dir / "run.cfg");
        cfg << "scenario.kind = random_smooth\nscenario.n = 32\nscenario.t_hat_end = 0.2\n"
            << "output.dir = " << (dir / "out").string() << "\n";
    }
    CHECK(invoke({"simulate", "--config", (dir / "run.cfg").string()}) == 0);
    const auto j = nlohmann::json::parse(slurp(dir / "out" / "summary.json"));
    CHECK(j["scenario"]["kind"] == "random_smooth");
    CHECK(j["scenario"]["n"] == 32);
}

TEST_CASE("convergence: smooth ladder is second order, trivial ladder is indeterminate") {
    EnvGuard env;
    const auto dir = fresh_dir("conv");
    CHECK(invoke({"convergence", "--jobs", "2", "--set", "output.dir=" + dir.string()}) == 0);
    const auto rows = read_csv(dir / "convergence.csv");
    CHECK(first_line(dir / "convergence.csv") == "level,n,dt,err_vs_finest,observed_order");
    REQUIRE(rows.size() == 5);
    CHECK(std::stod(rows[1][4]) >= 1.8);
    CHECK(std::stod(rows[2][4]) >= 1.8);
    CHECK(rows[4][4] == "nan");

    const auto tdir = fresh_dir("conv_trivial");
    CHECK(invoke({"convergence", "--set", "scenario.kind=trivial", "--set", "output.dir=" + tdir.string()}) == 0);
    const auto trows = read_csv(tdir / "convergence.csv");
    for (std::size_t k = 1; k < trows.size(); ++k) {
        CHECK(std::stod(trows[k][3]) <= 1e-10);
        CHECK(trows[k][4] == "nan");
    }
}

TEST_CASE("verify: disabled conduction is detected") {
    EnvGuard env;
    const auto dir = fresh_dir("verify_fault");
    CHECK(invoke({"verify", "--set", "params.conduction=false", "--set", "output.dir=" + dir.string()}) == 1);
    const auto j = nlohmann::json::parse(slurp(dir / "verify_report.json"));
    CHECK(j["passed"] == false);
    CHECK(j["checks"].size() == 13);
    bool entropy_or_decay_failed = false;
    for (const auto& c : j["checks"]) {
        if ((c["id"] == 5 || c["id"] == 10) && c["pass"] == false) entropy_or_decay_failed = true;
    }
    CHECK(entropy_or_decay_failed);
}
