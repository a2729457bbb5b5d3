#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "util.hpp"

namespace fs = std::filesystem;
using namespace decoq;
using nlohmann::json;

namespace {

struct RunResult {
    int status = -1;
    std::string out, err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(bool(in));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& bytes) {
    std::ofstream(p, std::ios::binary) << bytes;
}

fs::path work_dir() {
    static fs::path base = [] {
        fs::path p = fs::temp_directory_path() / "decoq_cli_test";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    static int counter = 0;
    fs::path p = base / std::to_string(counter++);
    fs::create_directories(p);
    return p;
}

RunResult run(const std::string& args) {
    const char* bin = std::getenv("DECOQ_CLI");
    REQUIRE(bin != nullptr);
    fs::path dir = work_dir();
    const std::string cmd = std::string("'") + bin + "' " + args + " > '" +
                            (dir / "stdout").string() + "' 2> '" + (dir / "stderr").string() + "'";
    int rc = std::system(cmd.c_str());
    RunResult r;
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(dir / "stdout");
    r.err = slurp(dir / "stderr");
    return r;
}

std::string base_config(const std::string& extra = "", const std::string& walk_extra = "") {
    return R"({
  "system": {"dim": 2, "lindblad": {"form": "builtin", "name": "amplitude_damping", "gamma": 1.0}},
  "decoupling": {"type": "pauli", "n_qubits": 1},
  "walk": {"tau": 0.01, "t_grid": [0.05, 0.1], "scheme": "physical", "paths": 6)" +
           walk_extra + "}" + extra + "\n}\n";
}

}  // namespace

TEST_CASE("validate-config accepts a good config") {
    fs::path dir = work_dir();
    spit(dir / "cfg.json", base_config(", \"seed\": 1"));
    RunResult r = run("validate-config '" + (dir / "cfg.json").string() + "'");
    CHECK(r.status == 0);
    CHECK(r.out == "ok\n");
}

TEST_CASE("unknown keys are rejected with a JSON-path diagnostic and exit 2") {
    fs::path dir = work_dir();
    spit(dir / "cfg.json", base_config(", \"seed\": 1", ", \"bogus\": 3"));
    RunResult r = run("validate-config '" + (dir / "cfg.json").string() + "'");
    CHECK(r.status == 2);
    CHECK(r.err.find("$.walk.bogus") != std::string::npos);
    CHECK(r.err.find("unknown key") != std::string::npos);

    spit(dir / "bad.json", "{ not json");
    CHECK(run("validate-config '" + (dir / "bad.json").string() + "'").status == 2);
}

TEST_CASE("simulate is byte-identical across runs and thread counts") {
    fs::path dir = work_dir();
    spit(dir / "cfg.json", base_config());
    const std::string cfg = "'" + (dir / "cfg.json").string() + "'";
    CHECK(run("--seed 7 --threads 1 --out '" + (dir / "a").string() + "' simulate " + cfg).status ==
          0);
    CHECK(run("--seed 7 --threads 4 --out '" + (dir / "b").string() + "' simulate " + cfg).status ==
          0);
    for (const char* name : {"manifest.json", "paths.jsonl", "curve_mc.json"})
        CHECK(slurp(dir / "a" / name) == slurp(dir / "b" / name));
    json manifest = json::parse(slurp(dir / "a" / "manifest.json"));
    CHECK(manifest["seed"] == 7);
    CHECK(manifest["paths"] == 6);
    CHECK(manifest["config_hash"] == fnv1a_hash(slurp(dir / "cfg.json")));
}

TEST_CASE("a zero generator yields identity trajectories with mean fidelity 1") {
    fs::path dir = work_dir();
    std::string cfg = R"({
  "system": {"dim": 2, "lindblad": {"form": "hamiltonian", "hamiltonian": [[0, 0], [0, 0]]}},
  "decoupling": {"type": "pauli", "n_qubits": 1},
  "walk": {"tau": 0.01, "t_grid": [0.05, 0.1], "scheme": "physical", "paths": 4},
  "seed": 3
})";
    spit(dir / "cfg.json", cfg);
    CHECK(run("--out '" + (dir / "out").string() + "' simulate '" + (dir / "cfg.json").string() +
              "'")
              .status == 0);
    json curve = json::parse(slurp(dir / "out" / "curve_mc.json"));
    for (double m : curve["mc_mean"].get<std::vector<double>>())
        CHECK(m == doctest::Approx(1.0).epsilon(1e-12));
    std::istringstream lines(slurp(dir / "out" / "paths.jsonl"));
    std::string line;
    int n_lines = 0;
    while (std::getline(lines, line)) {
        ++n_lines;
        json rec = json::parse(line);
        for (double f : rec["fidelity"].get<std::vector<double>>())
            CHECK(f == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(n_lines == 4);
}

TEST_CASE("analytic output: exact CSV header, 17-digit cells, JSON round-trip") {
    fs::path dir = work_dir();
    std::string cfg = base_config(
        R"(, "analysis": ["analytic", "variance", "drift", "bounds"],
  "output": {"formats": ["csv", "json"]})");
    spit(dir / "cfg.json", cfg);
    CHECK(run("--out '" + (dir / "out").string() + "' analytic '" + (dir / "cfg.json").string() +
              "'")
              .status == 0);

    std::istringstream csv(slurp(dir / "out" / "curve.csv"));
    std::string header;
    std::getline(csv, header);
    CHECK(header ==
          "t,F_mean_analytic,F_var_analytic,F_mean_drift,bound_extrinsic,bound_intrinsic,"
          "bound_dephasing");

    // reference values computed in-process
    LimitGenerators gens = build_limit_generators(amplitude_damping(1.0), pauli_set(1), 0.01);
    std::vector<double> t_grid{0.05, 0.1};
    std::string line;
    for (double t : t_grid) {
        REQUIRE(std::getline(csv, line));
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        REQUIRE(cells.size() >= 6);
        CHECK(cells[0] == format_g17(t));
        CHECK(cells[1] == format_g17(analytic_mean_fidelity(gens, t)));
        CHECK(cells[3] == format_g17(drift_fidelity(gens, t).first));
        CHECK(cells[4] == "");  // no dilation -> no extrinsic bound
        // a 17-significant-digit cell survives a strtod round trip exactly
        CHECK(format_g17(std::strtod(cells[1].c_str(), nullptr)) == cells[1]);
    }

    FidelityCurve back = curve_from_json(json::parse(slurp(dir / "out" / "curve.json")));
    REQUIRE(back.t_grid == t_grid);
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        CHECK(std::abs(back.analytic_mean[i] - analytic_mean_fidelity(gens, t_grid[i])) <= 1e-15);
        CHECK(std::abs(back.drift_mean[i] - drift_fidelity(gens, t_grid[i]).first) <= 1e-15);
    }
    BoundReport rep = bound_report_from_json(json::parse(slurp(dir / "out" / "bounds.json")));
    BoundReport ref = bounds(amplitude_damping(1.0), gens, std::nullopt, 0.01, t_grid);
    CHECK(rep.gamma == ref.gamma);
    for (std::size_t i = 0; i < t_grid.size(); ++i)
        CHECK(std::abs(rep.bound_intrinsic[i] - ref.bound_intrinsic[i]) <= 1e-15);
}

TEST_CASE("classify needs at least 3 tau-labeled curves (exit 4)") {
    fs::path dir = work_dir();
    fs::create_directories(dir / "curves");
    SuperOp l = amplitude_damping(0.1);
    LimitGenerators gens = build_limit_generators(l, pauli_set(1), 1e-4);
    BoundReport rep = bounds(l, gens, std::nullopt, 1e-4, {0.02, 0.04, 0.06});
    spit(dir / "bounds.json", bound_report_to_json(rep).dump(2));
    for (int i = 0; i < 2; ++i) {
        FidelityCurve c;
        c.t_grid = rep.t_grid;
        c.tau = 1e-4 * std::pow(10.0, i);
        c.mc_mean = {0.999, 0.998, 0.997};
        c.mc_stderr = {1e-4, 1e-4, 1e-4};
        c.mc_paths = 100;
        spit(dir / "curves" / ("c" + std::to_string(i) + ".json"), curve_to_json(c).dump(2));
    }
    RunResult r = run("classify '" + (dir / "curves").string() + "' '" +
                      (dir / "bounds.json").string() + "'");
    CHECK(r.status == 4);
    CHECK(r.err.find("at least 3") != std::string::npos);
}

TEST_CASE("classify emits a verdict for three synthetic extrinsic curves") {
    fs::path dir = work_dir();
    fs::create_directories(dir / "curves");
    SuperOp l = amplitude_damping(0.1);
    LimitGenerators gens = build_limit_generators(l, pauli_set(1), 1e-4);
    BoundReport rep = bounds(l, gens, std::nullopt, 1e-4, {0.02, 0.04, 0.06});
    spit(dir / "bounds.json", bound_report_to_json(rep).dump(2));
    for (int i = 0; i < 3; ++i) {
        const double tau = 1e-4 * std::pow(10.0, i);
        FidelityCurve c;
        c.t_grid = rep.t_grid;
        c.tau = tau;
        for (double t : rep.t_grid) {
            c.mc_mean.push_back(1.0 - 5.0 * t * tau);  // infidelity linear in tau
            c.mc_stderr.push_back(1e-6);
        }
        c.mc_paths = 100;
        spit(dir / "curves" / ("c" + std::to_string(i) + ".json"), curve_to_json(c).dump(2));
    }
    RunResult r = run("--out '" + (dir / "out").string() + "' classify '" +
                      (dir / "curves").string() + "' '" + (dir / "bounds.json").string() + "'");
    CHECK(r.status == 0);
    json verdict = json::parse(slurp(dir / "out" / "verdict.json"));
    CHECK(verdict["classification"] == "extrinsic");
    CHECK(json::parse(r.out)["classification"] == "extrinsic");
}

TEST_CASE("seed precedence: flag over environment over config field") {
    fs::path dir = work_dir();
    spit(dir / "cfg.json", base_config(", \"seed\": 11"));
    const std::string cfg = "'" + (dir / "cfg.json").string() + "'";
    auto seed_of = [&](const std::string& out) {
        return json::parse(slurp(dir / out / "manifest.json"))["seed"].get<std::uint64_t>();
    };

    CHECK(run("--out '" + (dir / "s1").string() + "' simulate " + cfg).status == 0);
    CHECK(seed_of("s1") == 11);  // config field

    setenv("DECOQ_SEED", "22", 1);
    CHECK(run("--out '" + (dir / "s2").string() + "' simulate " + cfg).status == 0);
    CHECK(seed_of("s2") == 22);  // environment beats config

    CHECK(run("--seed 33 --out '" + (dir / "s3").string() + "' simulate " + cfg).status == 0);
    CHECK(seed_of("s3") == 33);  // flag beats environment
    unsetenv("DECOQ_SEED");

    spit(dir / "noseed.json", base_config());
    RunResult r = run("--out '" + (dir / "s4").string() + "' simulate '" +
                      (dir / "noseed.json").string() + "'");
    CHECK(r.status == 2);
    CHECK(r.err.find("seed") != std::string::npos);
}
