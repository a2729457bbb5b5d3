#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "decoq/config.hpp"

namespace fs = std::filesystem;
using decoq::ConfigError;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "decoq 0.1.0";

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot read file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw decoq::Error("cannot write file '" + path.string() + "'");
    out << bytes;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag,
                           const decoq::ExperimentConfig& cfg) {
    if (flag) return *flag;
    if (const char* env = std::getenv("DECOQ_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw ConfigError("config: DECOQ_SEED is not a nonnegative integer");
        }
    }
    if (cfg.seed) return *cfg.seed;
    throw ConfigError("config: no seed given (use --seed, DECOQ_SEED, or the seed field)");
}

json manifest_json(const std::string& config_bytes, std::uint64_t seed) {
    json m;
    m["config_hash"] = decoq::fnv1a_hash(config_bytes);
    m["seed"] = seed;
    m["versions"]["tool"] = kToolVersion;
    m["versions"]["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
                             std::to_string(EIGEN_MAJOR_VERSION) + "." +
                             std::to_string(EIGEN_MINOR_VERSION);
    m["versions"]["json"] = std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                            std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                            std::to_string(NLOHMANN_JSON_VERSION_PATCH);
    return m;
}

std::string scheme_name(decoq::Scheme s) {
    switch (s) {
        case decoq::Scheme::physical: return "physical";
        case decoq::Scheme::diffusion: return "diffusion";
        case decoq::Scheme::drift: return "drift";
    }
    return "physical";
}

int cmd_simulate(const std::string& config_path, const std::optional<std::uint64_t>& seed_flag,
                 const std::string& out_override) {
    const std::string bytes = slurp(config_path);
    decoq::ExperimentConfig cfg = decoq::parse_config(bytes);
    const std::uint64_t seed = resolve_seed(seed_flag, cfg);
    cfg.walk.master_seed = seed;
    const fs::path out_dir = out_override.empty() ? fs::path(cfg.out_dir) : fs::path(out_override);
    fs::create_directories(out_dir);

    std::vector<decoq::WalkPath> ensemble;
    if (cfg.dilation) {
        ensemble = decoq::simulate_extrinsic_ensemble(*cfg.dilation, cfg.set, cfg.walk);
    } else {
        ensemble = decoq::simulate_ensemble(decoq::compile(cfg.lindblad), cfg.set, cfg.walk);
    }

    json manifest = manifest_json(bytes, seed);
    manifest["paths"] = static_cast<long>(ensemble.size());
    manifest["scheme"] = scheme_name(cfg.walk.scheme);
    manifest["extrinsic"] = cfg.dilation.has_value();
    spit(out_dir / "manifest.json", manifest.dump(2) + "\n");

    std::string lines;
    for (const auto& path : ensemble) {
        json rec;
        rec["path_id"] = path.path_id;
        rec["pulse_indices"] = path.pulse_indices;
        std::vector<double> fid;
        for (const auto& m : path.maps) fid.push_back(decoq::path_fidelity(m));
        rec["fidelity"] = fid;
        lines += rec.dump() + "\n";
    }
    spit(out_dir / "paths.jsonl", lines);

    decoq::FidelityCurve curve = decoq::mc_fidelity(ensemble, cfg.walk.t_grid);
    curve.scheme = cfg.dilation ? "physical_extrinsic" : scheme_name(cfg.walk.scheme);
    curve.seed = seed;
    curve.tau = cfg.walk.tau;
    spit(out_dir / "curve_mc.json", decoq::curve_to_json(curve).dump(2) + "\n");
    return 0;
}

int cmd_analytic(const std::string& config_path, const std::string& out_override) {
    const std::string bytes = slurp(config_path);
    decoq::ExperimentConfig cfg = decoq::parse_config(bytes);
    const fs::path out_dir = out_override.empty() ? fs::path(cfg.out_dir) : fs::path(out_override);
    fs::create_directories(out_dir);
    auto wants = [&](const char* name) {
        for (const auto& a : cfg.analysis)
            if (a == name) return true;
        return false;
    };

    decoq::SuperOp l = decoq::compile(cfg.lindblad);
    decoq::LimitGenerators gens = decoq::build_limit_generators(l, cfg.set, cfg.walk.tau);
    decoq::FidelityCurve curve;
    curve.t_grid = cfg.walk.t_grid;
    curve.scheme = "analytic";
    curve.tau = cfg.walk.tau;
    for (double t : cfg.walk.t_grid) {
        if (wants("analytic"))
            curve.analytic_mean.push_back(decoq::analytic_mean_fidelity(gens, t));
        if (wants("variance")) {
            double raw = 0.0;
            curve.analytic_var.push_back(decoq::analytic_var_fidelity(gens, t, &raw));
            curve.analytic_var_raw.push_back(raw);
        }
        if (wants("drift")) curve.drift_mean.push_back(decoq::drift_fidelity(gens, t).first);
    }

    std::optional<decoq::BoundReport> rep;
    if (wants("bounds")) {
        std::optional<decoq::ExtrinsicInfo> ext;
        if (cfg.dilation) ext = decoq::extrinsic_info(*cfg.dilation, cfg.set);
        rep = decoq::bounds(l, gens, ext, cfg.walk.tau, cfg.walk.t_grid);
    }

    for (const auto& fmt : cfg.formats) {
        if (fmt == "csv") {
            spit(out_dir / "curve.csv", decoq::curve_csv(curve, rep ? &*rep : nullptr));
        } else {
            spit(out_dir / "curve.json", decoq::curve_to_json(curve).dump(2) + "\n");
            if (rep)
                spit(out_dir / "bounds.json", decoq::bound_report_to_json(*rep).dump(2) + "\n");
        }
    }
    return 0;
}

int cmd_classify(const std::string& curve_dir, const std::string& bounds_path,
                 const std::string& out_override) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(curve_dir))
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::vector<decoq::FidelityCurve> curves;
    for (const auto& f : files) {
        decoq::FidelityCurve c = decoq::curve_from_json(json::parse(slurp(f.string())));
        if (!c.mc_mean.empty() && c.tau > 0.0) curves.push_back(std::move(c));
    }
    if (curves.size() < 3) {
        std::cerr << "classify: need at least 3 tau-labeled curve files, found " << curves.size()
                  << "\n";
        return 4;
    }
    decoq::BoundReport rep = decoq::bound_report_from_json(json::parse(slurp(bounds_path)));
    decoq::Verdict verdict = decoq::classify(curves, rep);
    json out = decoq::verdict_to_json(verdict);
    if (!out_override.empty()) {
        fs::create_directories(out_override);
        spit(fs::path(out_override) / "verdict.json", out.dump(2) + "\n");
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_validate(const std::string& config_path) {
    decoq::parse_config(slurp(config_path));
    std::cout << "ok\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random-decoupling simulation and analysis"};
    app.require_subcommand(1);
    std::optional<std::uint64_t> seed_flag;
    long threads = 0;
    std::string out_override;
    app.add_option("--seed", seed_flag, "Master seed (overrides DECOQ_SEED and the config)");
    app.add_option("--threads", threads, "Worker thread cap (0 = hardware concurrency)");
    app.add_option("--out", out_override, "Output directory (overrides the config)");

    std::string config_path, curve_dir, bounds_path;
    auto* sim = app.add_subcommand("simulate", "Run a walk ensemble and write path artifacts");
    sim->add_option("config", config_path, "Experiment config (JSON)")->required();
    auto* ana = app.add_subcommand("analytic", "Write analytic fidelity curves and bounds");
    ana->add_option("config", config_path, "Experiment config (JSON)")->required();
    auto* cls = app.add_subcommand("classify", "Classify curves as intrinsic or extrinsic");
    cls->add_option("curves", curve_dir, "Directory of curve JSON files")->required();
    cls->add_option("bounds", bounds_path, "Bound report JSON file")->required();
    auto* val = app.add_subcommand("validate-config", "Parse and validate a config");
    val->add_option("config", config_path, "Experiment config (JSON)")->required();

    CLI11_PARSE(app, argc, argv);
    decoq::set_max_threads(threads);
    try {
        if (sim->parsed()) return cmd_simulate(config_path, seed_flag, out_override);
        if (ana->parsed()) return cmd_analytic(config_path, out_override);
        if (cls->parsed()) return cmd_classify(curve_dir, bounds_path, out_override);
        if (val->parsed()) return cmd_validate(config_path);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const decoq::BudgetError& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
