// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "densor/errors.hpp"
#include "densor/scenario.hpp"

namespace fs = std::filesystem;

namespace {

const char* kMinimalScenario = R"(# minimal unit sweep
process {
  kind = gauss-markov
  sigma2 = 1.0
  eta = 1.0
  T0 = 1.0
}
power {
  family = constant
  P_tot = 1.0
  epsilon = 0.5
}
gains {
  mode = constant
  h_lower = 1.0
  h_upper = 1.0
  seed = 1
}
sweep {
  N = 10
}
)";

densor::Scenario minimal() {
    std::istringstream in(kMinimalScenario);
    const auto load = densor::load_scenario(in, "minimal");
    REQUIRE(load.diagnostics.empty());
    return load.scenario;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

fs::path tmpdir(const std::string& leaf) {
    const fs::path dir = fs::path(DENSOR_TEST_TMPDIR) / leaf;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

// ---------------------------------------------------------------------------
// parsing and validation
// ---------------------------------------------------------------------------

TEST_CASE("well-formed scenario has no diagnostics") {
    std::istringstream in(kMinimalScenario);
    const auto load = densor::load_scenario(in, "minimal");
    CHECK(load.diagnostics.empty());
    CHECK(load.scenario.process.kind == "gauss-markov");
    CHECK(load.scenario.sweep_n == std::vector<long long>{10});
    // defaults fill the optional blocks
    CHECK(load.scenario.mc.enabled == false);
    CHECK(load.scenario.numerics.kappa == 0.99);
}

TEST_CASE("missing power block is named") {
    std::string text = kMinimalScenario;
    const auto pos = text.find("power {");
    text.erase(pos, text.find("}\n", pos) + 2 - pos);
    std::istringstream in(text);
    const auto load = densor::load_scenario(in, "nopower");
    REQUIRE_FALSE(load.diagnostics.empty());
    bool found = false;
    for (const auto& d : load.diagnostics) {
        if (d.find("power") != std::string::npos && d.find("missing") != std::string::npos) found = true;
    }
    CHECK(found);
}

TEST_CASE("unknown keys and blocks are rejected with locations") {
    std::istringstream in("process {\n  kind = gauss-markov\n  wavelength = 3\n}\nantenna {\n}\n");
    const auto load = densor::load_scenario(in, "cfg");
    bool unknown_key = false, unknown_block = false;
    for (const auto& d : load.diagnostics) {
        if (d.find("unknown key `wavelength`") != std::string::npos && d.find("cfg:3") != std::string::npos) {
            unknown_key = true;
        }
        if (d.find("unknown block `antenna`") != std::string::npos) unknown_block = true;
    }
    CHECK(unknown_key);
    CHECK(unknown_block);
}

TEST_CASE("out-of-range kappa names the allowed interval") {
    densor::Scenario sc = minimal();
    sc.numerics.kappa = 1.2;
    const auto diags = densor::validate_scenario(sc);
    REQUIRE_FALSE(diags.empty());
    bool found = false;
    for (const auto& d : diags) {
        if (d.find("kappa") != std::string::npos && d.find("(0,1)") != std::string::npos) found = true;
    }
    CHECK(found);
}

TEST_CASE("nonpositive epsilon is flagged by name") {
    densor::Scenario sc = minimal();
    sc.power.epsilon = -0.5;
    const auto diags = densor::validate_scenario(sc);
    bool found = false;
    for (const auto& d : diags) {
        if (d.find("epsilon") != std::string::npos) found = true;
    }
    CHECK(found);
}

TEST_CASE("overrides reach nested fields and reject unknown paths") {
    densor::Scenario sc = minimal();
    densor::apply_override(sc, "power.family=power-law");
    densor::apply_override(sc, "power.omega=0.75");
    densor::apply_override(sc, "sweep.N=20, 40");
    CHECK(sc.power.family == "power-law");
    CHECK(sc.power.omega == 0.75);
    CHECK(sc.sweep_n == std::vector<long long>{20, 40});
    CHECK_THROWS_AS(densor::apply_override(sc, "power.wattage=3"), densor::ConfigError);
    CHECK_THROWS_AS(densor::apply_override(sc, "nonsense"), densor::ConfigError);
}

// ---------------------------------------------------------------------------
// run_scenario
// ---------------------------------------------------------------------------

TEST_CASE("minimal run emits the three artifacts") {
    const fs::path dir = tmpdir("run_minimal");
    const auto artifacts = densor::run_scenario(minimal(), dir);
    CHECK(fs::exists(artifacts.csv));
    CHECK(fs::exists(artifacts.report));
    CHECK(fs::exists(artifacts.resolved));
    REQUIRE(artifacts.rows.size() == 1);
    CHECK(artifacts.rows[0].n == 10.0);

    const std::string csv = slurp(artifacts.csv);
    CHECK(csv.rfind("N,P,C_u,C_a,D_l,D_u,D_u_err,D_mc,D_mc_err,regime,theta_prime,mode\n", 0) == 0);
    CHECK(csv.find("\nmedium") == std::string::npos); // regime embedded in the row, not a line
    const std::string report = slurp(artifacts.report);
    CHECK(report.find("regime: medium") != std::string::npos);
    CHECK(report.find("pi(x,nu)") != std::string::npos);
}

TEST_CASE("identical scenarios give byte-identical CSVs") {
    const fs::path d1 = tmpdir("det_a");
    const fs::path d2 = tmpdir("det_b");
    densor::Scenario sc = minimal();
    sc.gains.mode = "random";
    sc.gains.h_lower = 0.5;
    sc.gains.seed = 42;
    sc.mc.enabled = true;
    sc.mc.trials = 400;
    const auto a1 = densor::run_scenario(sc, d1);
    const auto a2 = densor::run_scenario(sc, d2);
    CHECK(slurp(a1.csv) == slurp(a2.csv));
}

TEST_CASE("resolved scenario reproduces the run exactly") {
    const fs::path d1 = tmpdir("res_a");
    const fs::path d2 = tmpdir("res_b");
    const auto first = densor::run_scenario(minimal(), d1);
    const auto reload = densor::load_scenario_file(first.resolved.string());
    REQUIRE(reload.diagnostics.empty());
    const auto second = densor::run_scenario(reload.scenario, d2);
    CHECK(slurp(first.csv) == slurp(second.csv));
    CHECK(slurp(first.resolved) == slurp(second.resolved));
}

TEST_CASE("invalid scenarios refuse to run") {
    densor::Scenario sc = minimal();
    sc.power.epsilon = 0.0;
    const fs::path dir = tmpdir("run_invalid");
    CHECK_THROWS_AS(densor::run_scenario(sc, dir), densor::ConfigError);
    CHECK_FALSE(fs::exists(dir / "sweep.csv"));
}

// ---------------------------------------------------------------------------
// CLI binary
// ---------------------------------------------------------------------------

namespace {

int run_tool(const std::string& args) {
    const std::string cmd = std::string(DENSOR_TOOL_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("CLI exit codes: ok, config error, validate") {
    const fs::path dir = tmpdir("cli");
    const fs::path cfg = dir / "scenario.conf";
    {
        std::ofstream out(cfg);
        out << kMinimalScenario;
    }
    CHECK(run_tool("--config " + cfg.string() + " --validate") == 0);
    CHECK(run_tool("--config " + cfg.string() + " --out " + (dir / "out").string()) == 0);
    CHECK(fs::exists(dir / "out" / "sweep.csv"));

    // invalid epsilon: exit 2 and the message names the field
    CHECK(run_tool("--config " + cfg.string() + " --set power.epsilon=-1 --out " +
                   (dir / "out2").string()) == 2);
    const fs::path bad = dir / "bad.conf";
    {
        std::ofstream out(bad);
        out << "process {\n  kind = gauss-markov\n}\n"; // missing blocks
    }
    CHECK(run_tool("--config " + bad.string()) == 2);
    CHECK(run_tool("--config " + (dir / "absent.conf").string()) == 2);
}
