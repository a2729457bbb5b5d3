#include "decoq/config.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

namespace decoq {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config: " + path + ": " + what);
}

void require_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed,
                  const std::set<std::string>& required) {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) fail(path + "." + key, "unknown key");
    for (const auto& key : required)
        if (!obj.count(key)) fail(path, "missing required key '" + key + "'");
}

double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

long get_integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<long>();
}

std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

// A complex entry is a real number or a pair [re, im].
Complex get_complex(const json& j, const std::string& path) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Complex(j[0].get<double>(), j[1].get<double>());
    fail(path, "expected a real number or a pair [re, im]");
}

// Row-major nested arrays; rows/cols < 0 means "any (square) size".
Matrix get_matrix(const json& j, const std::string& path, int rows = -1, int cols = -1) {
    if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of rows");
    const int r = static_cast<int>(j.size());
    if (!j[0].is_array() || j[0].empty()) fail(path + "[0]", "expected a non-empty row array");
    const int c = static_cast<int>(j[0].size());
    if (rows >= 0 && r != rows) fail(path, "expected " + std::to_string(rows) + " rows");
    if (cols >= 0 && c != cols) fail(path, "expected " + std::to_string(cols) + " columns");
    if (rows < 0 && cols < 0 && r != c) fail(path, "expected a square matrix");
    Matrix m(r, c);
    for (int i = 0; i < r; ++i) {
        const std::string rp = path + "[" + std::to_string(i) + "]";
        if (!j[i].is_array() || static_cast<int>(j[i].size()) != c) fail(rp, "ragged row");
        for (int k = 0; k < c; ++k)
            m(i, k) = get_complex(j[i][k], rp + "[" + std::to_string(k) + "]");
    }
    return m;
}

std::vector<double> get_grid(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of times");
    std::vector<double> grid;
    for (std::size_t i = 0; i < j.size(); ++i)
        grid.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
    return grid;
}

LindbladSpec parse_lindblad(const json& j, const std::string& path, int dim) {
    require_keys(j, path,
                 {"form", "hamiltonian", "jumps", "kraus", "drift", "name", "gamma"}, {"form"});
    LindbladSpec spec;
    spec.dim = dim;
    const std::string form = get_string(j["form"], path + ".form");
    if (form == "hamiltonian") {
        spec.form = LindbladSpec::Form::hamiltonian;
        if (!j.count("hamiltonian")) fail(path, "missing required key 'hamiltonian'");
        spec.hamiltonian = get_matrix(j["hamiltonian"], path + ".hamiltonian", dim, dim);
    } else if (form == "gkls") {
        spec.form = LindbladSpec::Form::gkls;
        spec.hamiltonian = j.count("hamiltonian")
                               ? get_matrix(j["hamiltonian"], path + ".hamiltonian", dim, dim)
                               : Matrix(Matrix::Zero(dim, dim));
        if (!j.count("jumps")) fail(path, "missing required key 'jumps'");
        const json& jumps = j["jumps"];
        if (!jumps.is_array()) fail(path + ".jumps", "expected an array");
        for (std::size_t i = 0; i < jumps.size(); ++i) {
            const std::string jp = path + ".jumps[" + std::to_string(i) + "]";
            require_keys(jumps[i], jp, {"op", "rate"}, {"op", "rate"});
            GklsJump jump;
            jump.op = get_matrix(jumps[i]["op"], jp + ".op", dim, dim);
            jump.rate = get_number(jumps[i]["rate"], jp + ".rate");
            if (!(jump.rate >= 0.0)) fail(jp + ".rate", "rate must be >= 0");
            spec.jumps.push_back(std::move(jump));
        }
    } else if (form == "kraus_ce") {
        spec.form = LindbladSpec::Form::kraus_ce;
        if (!j.count("kraus")) fail(path, "missing required key 'kraus'");
        if (!j.count("drift")) fail(path, "missing required key 'drift'");
        const json& kraus = j["kraus"];
        if (!kraus.is_array()) fail(path + ".kraus", "expected an array");
        for (std::size_t i = 0; i < kraus.size(); ++i)
            spec.kraus.push_back(
                get_matrix(kraus[i], path + ".kraus[" + std::to_string(i) + "]", dim, dim));
        spec.drift = get_matrix(j["drift"], path + ".drift", dim, dim);
    } else if (form == "builtin") {
        spec.form = LindbladSpec::Form::builtin;
        if (!j.count("name")) fail(path, "missing required key 'name'");
        spec.builtin_name = get_string(j["name"], path + ".name");
        if (spec.builtin_name != "amplitude_damping")
            fail(path + ".name", "unknown builtin '" + spec.builtin_name + "'");
        if (!j.count("gamma")) fail(path, "missing required key 'gamma'");
        spec.gamma = get_number(j["gamma"], path + ".gamma");
        if (!(spec.gamma > 0.0)) fail(path + ".gamma", "gamma must be > 0");
        if (dim != 2) fail(path, "builtin amplitude_damping requires dim = 2");
    } else {
        fail(path + ".form", "unknown form '" + form + "'");
    }
    return spec;
}

DecouplingSet parse_decoupling(const json& j, const std::string& path, int dim) {
    require_keys(j, path, {"type", "n_qubits", "unitaries"}, {"type"});
    const std::string type = get_string(j["type"], path + ".type");
    DecouplingSet set;
    if (type == "pauli") {
        if (!j.count("n_qubits")) fail(path, "missing required key 'n_qubits'");
        const long n = get_integer(j["n_qubits"], path + ".n_qubits");
        if (n < 1 || n > 6) fail(path + ".n_qubits", "expected an integer in [1, 6]");
        set = pauli_set(static_cast<int>(n));
    } else if (type == "explicit") {
        if (!j.count("unitaries")) fail(path, "missing required key 'unitaries'");
        const json& us = j["unitaries"];
        if (!us.is_array() || us.empty()) fail(path + ".unitaries", "expected a non-empty array");
        set.dim_h = dim;
        for (std::size_t i = 0; i < us.size(); ++i)
            set.unitaries.push_back(
                get_matrix(us[i], path + ".unitaries[" + std::to_string(i) + "]", dim, dim));
    } else {
        fail(path + ".type", "unknown type '" + type + "'");
    }
    if (set.dim_h != dim) fail(path, "decoupling set dimension does not match system.dim");
    ValidationReport rep = validate(set);
    if (!rep.ok) fail(path, "not a decoupling set (failed check: " + rep.failing_check + ")");
    return set;
}

WalkConfig parse_walk(const json& j, const std::string& path) {
    require_keys(j, path, {"tau", "t_grid", "scheme", "n", "paths"},
                 {"tau", "t_grid", "scheme", "paths"});
    WalkConfig cfg;
    cfg.tau = get_number(j["tau"], path + ".tau");
    cfg.t_grid = get_grid(j["t_grid"], path + ".t_grid");
    const std::string scheme = get_string(j["scheme"], path + ".scheme");
    if (scheme == "physical") {
        cfg.scheme = Scheme::physical;
    } else if (scheme == "diffusion") {
        cfg.scheme = Scheme::diffusion;
    } else if (scheme == "drift") {
        cfg.scheme = Scheme::drift;
    } else {
        fail(path + ".scheme", "unknown scheme '" + scheme + "'");
    }
    if (cfg.scheme != Scheme::physical) {
        if (!j.count("n")) fail(path, "missing required key 'n'");
        cfg.n = get_integer(j["n"], path + ".n");
    } else if (j.count("n")) {
        cfg.n = get_integer(j["n"], path + ".n");
    }
    cfg.paths = get_integer(j["paths"], path + ".paths");
    try {
        validate(cfg);
    } catch (const Error& e) {
        fail(path, e.what());
    }
    return cfg;
}

DilationSpec parse_dilation(const json& j, const std::string& path, int dim) {
    require_keys(j, path, {"dim_bath", "bath_hamiltonian", "couplings", "beta"},
                 {"dim_bath", "bath_hamiltonian", "couplings", "beta"});
    DilationSpec spec;
    spec.dim_h = dim;
    spec.dim_bath = static_cast<int>(get_integer(j["dim_bath"], path + ".dim_bath"));
    spec.bath_hamiltonian =
        get_matrix(j["bath_hamiltonian"], path + ".bath_hamiltonian", spec.dim_bath, spec.dim_bath);
    const json& cs = j["couplings"];
    if (!cs.is_array()) fail(path + ".couplings", "expected an array");
    for (std::size_t i = 0; i < cs.size(); ++i) {
        const std::string cp = path + ".couplings[" + std::to_string(i) + "]";
        require_keys(cs[i], cp, {"system", "bath"}, {"system", "bath"});
        spec.couplings.emplace_back(get_matrix(cs[i]["system"], cp + ".system", dim, dim),
                                    get_matrix(cs[i]["bath"], cp + ".bath", spec.dim_bath,
                                               spec.dim_bath));
    }
    const json& beta = j["beta"];
    if (beta.is_number()) {
        spec.beta = beta.get<double>();
    } else if (beta.is_string() && beta.get<std::string>() == "inf") {
        spec.beta = std::numeric_limits<double>::infinity();
    } else {
        fail(path + ".beta", "expected a number or the string \"inf\"");
    }
    try {
        validate(spec);
    } catch (const Error& e) {
        fail(path, e.what());
    }
    return spec;
}

std::vector<double> to_doubles(const json& j, const std::string& key) {
    if (!j.count(key)) return {};
    return j.at(key).get<std::vector<double>>();
}

json from_doubles(const std::vector<double>& v) {
    return json(v);
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: not valid JSON: ") + e.what());
    }
    require_keys(root, "$", {"system", "decoupling", "walk", "dilation", "analysis", "output",
                             "seed"},
                 {"system", "decoupling", "walk"});

    ExperimentConfig cfg;
    require_keys(root["system"], "$.system", {"dim", "lindblad"}, {"dim", "lindblad"});
    const long dim = get_integer(root["system"]["dim"], "$.system.dim");
    if (dim < 2 || dim > 64) fail("$.system.dim", "expected an integer in [2, 64]");
    cfg.dim = static_cast<int>(dim);
    cfg.lindblad = parse_lindblad(root["system"]["lindblad"], "$.system.lindblad", cfg.dim);
    cfg.set = parse_decoupling(root["decoupling"], "$.decoupling", cfg.dim);
    cfg.walk = parse_walk(root["walk"], "$.walk");
    if (root.count("dilation"))
        cfg.dilation = parse_dilation(root["dilation"], "$.dilation", cfg.dim);

    static const std::set<std::string> kAnalyses = {"mc_physical", "mc_diffusion", "analytic",
                                                    "drift", "variance", "bounds"};
    if (root.count("analysis")) {
        const json& a = root["analysis"];
        if (!a.is_array()) fail("$.analysis", "expected an array of analysis names");
        for (std::size_t i = 0; i < a.size(); ++i) {
            const std::string name = get_string(a[i], "$.analysis[" + std::to_string(i) + "]");
            if (!kAnalyses.count(name))
                fail("$.analysis[" + std::to_string(i) + "]", "unknown analysis '" + name + "'");
            cfg.analysis.push_back(name);
        }
    } else {
        cfg.analysis = {"analytic", "drift", "bounds"};
    }
    if (root.count("output")) {
        require_keys(root["output"], "$.output", {"directory", "formats"}, {});
        if (root["output"].count("directory"))
            cfg.out_dir = get_string(root["output"]["directory"], "$.output.directory");
        if (root["output"].count("formats")) {
            const json& f = root["output"]["formats"];
            if (!f.is_array()) fail("$.output.formats", "expected an array");
            cfg.formats.clear();
            for (std::size_t i = 0; i < f.size(); ++i) {
                const std::string fmt =
                    get_string(f[i], "$.output.formats[" + std::to_string(i) + "]");
                if (fmt != "csv" && fmt != "json")
                    fail("$.output.formats[" + std::to_string(i) + "]",
                         "unknown format '" + fmt + "'");
                cfg.formats.push_back(fmt);
            }
        }
    }
    if (root.count("seed")) {
        if (!root["seed"].is_number_unsigned() && !root["seed"].is_number_integer())
            fail("$.seed", "expected a nonnegative integer");
        const long long s = root["seed"].get<long long>();
        if (s < 0) fail("$.seed", "expected a nonnegative integer");
        cfg.seed = static_cast<std::uint64_t>(s);
    }
    return cfg;
}

std::uint64_t fnv1a_hash(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json curve_to_json(const FidelityCurve& curve) {
    json j;
    j["t_grid"] = from_doubles(curve.t_grid);
    if (!curve.mc_mean.empty()) {
        j["mc_mean"] = from_doubles(curve.mc_mean);
        j["mc_stderr"] = from_doubles(curve.mc_stderr);
        j["mc_paths"] = curve.mc_paths;
    }
    if (!curve.analytic_mean.empty()) j["analytic_mean"] = from_doubles(curve.analytic_mean);
    if (!curve.analytic_var.empty()) {
        j["analytic_var"] = from_doubles(curve.analytic_var);
        j["analytic_var_raw"] = from_doubles(curve.analytic_var_raw);
    }
    if (!curve.drift_mean.empty()) j["drift_mean"] = from_doubles(curve.drift_mean);
    j["scheme"] = curve.scheme;
    j["seed"] = curve.seed;
    j["tau"] = curve.tau;
    return j;
}

FidelityCurve curve_from_json(const json& j) {
    FidelityCurve c;
    c.t_grid = to_doubles(j, "t_grid");
    c.mc_mean = to_doubles(j, "mc_mean");
    c.mc_stderr = to_doubles(j, "mc_stderr");
    if (j.count("mc_paths")) c.mc_paths = j.at("mc_paths").get<long>();
    c.analytic_mean = to_doubles(j, "analytic_mean");
    c.analytic_var = to_doubles(j, "analytic_var");
    c.analytic_var_raw = to_doubles(j, "analytic_var_raw");
    c.drift_mean = to_doubles(j, "drift_mean");
    if (j.count("scheme")) c.scheme = j.at("scheme").get<std::string>();
    if (j.count("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.count("tau")) c.tau = j.at("tau").get<double>();
    return c;
}

json bound_report_to_json(const BoundReport& rep) {
    json j;
    j["gamma"] = rep.gamma;
    j["tau"] = rep.tau;
    j["t_grid"] = from_doubles(rep.t_grid);
    j["norm_kind"] = rep.norm_kind == NormKind::spectral ? "spectral" : "frobenius";
    j["dim_a"] = rep.dim_a;
    j["has_extrinsic"] = rep.has_extrinsic;
    if (rep.has_extrinsic) {
        j["bound_extrinsic"] = from_doubles(rep.bound_extrinsic);
        j["bound_extrinsic_2d"] = from_doubles(rep.bound_extrinsic_2d);
    }
    j["bound_intrinsic"] = from_doubles(rep.bound_intrinsic);
    if (!rep.bound_dephasing.empty()) j["bound_dephasing"] = from_doubles(rep.bound_dephasing);
    j["bound_drift_intrinsic"] = from_doubles(rep.bound_drift_intrinsic);
    j["regime_flags"] = json(std::vector<bool>(rep.regime_flags.begin(), rep.regime_flags.end()));
    j["norm_l"] = rep.norm_l;
    j["norm_lbar"] = rep.norm_lbar;
    j["norm_l_minus_lbar"] = rep.norm_l_minus_lbar;
    return j;
}

BoundReport bound_report_from_json(const json& j) {
    BoundReport rep;
    rep.gamma = j.at("gamma").get<double>();
    rep.tau = j.at("tau").get<double>();
    rep.t_grid = to_doubles(j, "t_grid");
    rep.norm_kind = j.at("norm_kind").get<std::string>() == "frobenius" ? NormKind::frobenius
                                                                        : NormKind::spectral;
    rep.dim_a = j.at("dim_a").get<int>();
    rep.has_extrinsic = j.at("has_extrinsic").get<bool>();
    rep.bound_extrinsic = to_doubles(j, "bound_extrinsic");
    rep.bound_extrinsic_2d = to_doubles(j, "bound_extrinsic_2d");
    rep.bound_intrinsic = to_doubles(j, "bound_intrinsic");
    rep.bound_dephasing = to_doubles(j, "bound_dephasing");
    rep.bound_drift_intrinsic = to_doubles(j, "bound_drift_intrinsic");
    for (bool b : j.at("regime_flags").get<std::vector<bool>>()) rep.regime_flags.push_back(b);
    rep.norm_l = j.at("norm_l").get<double>();
    rep.norm_lbar = j.at("norm_lbar").get<double>();
    rep.norm_l_minus_lbar = j.at("norm_l_minus_lbar").get<double>();
    return rep;
}

json verdict_to_json(const Verdict& v) {
    json j;
    switch (v.classification) {
        case Verdict::Class::extrinsic: j["classification"] = "extrinsic"; break;
        case Verdict::Class::intrinsic_or_mixed: j["classification"] = "intrinsic_or_mixed"; break;
        case Verdict::Class::inconclusive: j["classification"] = "inconclusive"; break;
    }
    j["notes"] = v.notes;
    json ev = json::array();
    for (const auto& f : v.evidence) {
        json e;
        e["t"] = f.t;
        e["intercept"] = f.intercept;
        e["intercept_se"] = f.intercept_se;
        e["slope"] = f.slope;
        e["residual"] = f.residual;
        e["vote"] = f.vote;
        ev.push_back(e);
    }
    j["evidence"] = ev;
    return j;
}

std::string curve_csv(const FidelityCurve& curve, const BoundReport* rep) {
    std::string out = "t,F_mean_analytic,F_var_analytic,F_mean_drift,bound_extrinsic,"
                      "bound_intrinsic,bound_dephasing\n";
    const std::size_t n = curve.t_grid.size();
    auto cell = [](const std::vector<double>& col, std::size_t i) {
        return i < col.size() ? format_g17(col[i]) : std::string();
    };
    for (std::size_t i = 0; i < n; ++i) {
        out += format_g17(curve.t_grid[i]);
        out += ',' + cell(curve.analytic_mean, i);
        out += ',' + cell(curve.analytic_var, i);
        out += ',' + cell(curve.drift_mean, i);
        out += ',' + (rep && rep->has_extrinsic ? cell(rep->bound_extrinsic, i) : std::string());
        out += ',' + (rep ? cell(rep->bound_intrinsic, i) : std::string());
        out += ',' + (rep ? cell(rep->bound_dephasing, i) : std::string());
        out += '\n';
    }
    return out;
}

}  // namespace decoq
