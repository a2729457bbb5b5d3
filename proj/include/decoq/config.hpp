#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "decoq/diagnose.hpp"

namespace decoq {

/// Invalid or inconsistent experiment config; mapped to CLI exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

struct ExperimentConfig {
    int dim = 0;
    LindbladSpec lindblad;
    DecouplingSet set;
    WalkConfig walk;  // master_seed filled by the seed-precedence rule
    std::optional<DilationSpec> dilation;
    std::vector<std::string> analysis;
    std::string out_dir = "out";
    std::vector<std::string> formats = {"csv", "json"};
    std::optional<std::uint64_t> seed;
};

/// Strict parse: unknown keys and malformed values are rejected with their
/// JSON path in the message.
ExperimentConfig parse_config(const std::string& json_text);

/// FNV-1a of the raw config bytes, for the run manifest.
std::uint64_t fnv1a_hash(const std::string& bytes);

/// Floating-point formatting with 17 significant digits.
std::string format_g17(double v);

nlohmann::json curve_to_json(const FidelityCurve& curve);
FidelityCurve curve_from_json(const nlohmann::json& j);

nlohmann::json bound_report_to_json(const BoundReport& rep);
BoundReport bound_report_from_json(const nlohmann::json& j);

nlohmann::json verdict_to_json(const Verdict& v);

/// Columns exactly: t, F_mean_analytic, F_var_analytic, F_mean_drift,
/// bound_extrinsic, bound_intrinsic, bound_dephasing; inapplicable cells
/// are left empty.
std::string curve_csv(const FidelityCurve& curve, const BoundReport* rep);

}  // namespace decoq
