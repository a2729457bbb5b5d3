#pragma once

#include <optional>
#include <string>
#include <vector>

#include "decoq/dilation.hpp"
#include "decoq/fidelity.hpp"

namespace decoq {

/// Norm data of the dilated (extrinsic) generator needed by the bounds:
/// ||L'|| and ||L'_0(t)|| = ||L' - Lbar'|| sampled over a time grid
/// (a single sample means the constant case).
struct ExtrinsicInfo {
    double lprime_norm = 0.0;
    std::vector<double> times;
    std::vector<double> lprime0_norms;
};

ExtrinsicInfo extrinsic_info(const DilationSpec& spec, const DecouplingSet& set,
                             NormKind kind = NormKind::spectral);

struct BoundReport {
    double gamma = 0.0;  // max{||L||, ||L'||, ||Lbar||}
    double tau = 0.0;
    std::vector<double> t_grid;
    NormKind norm_kind = NormKind::spectral;
    int dim_a = 0;

    bool has_extrinsic = false;
    std::vector<double> bound_extrinsic;      // prefactor 2d/|J| (default form)
    std::vector<double> bound_extrinsic_2d;   // alternative prefactor 2d
    std::vector<double> bound_intrinsic;
    std::vector<double> bound_dephasing;      // empty unless purely dephasing
    std::vector<double> bound_drift_intrinsic;
    std::vector<bool> regime_flags;           // 10 tau <= t and 10 t <= 1/gamma

    double norm_l = 0.0;
    double norm_lbar = 0.0;
    double norm_l_minus_lbar = 0.0;
};

BoundReport bounds(const SuperOp& l, const LimitGenerators& gens,
                   const std::optional<ExtrinsicInfo>& dilated, double tau,
                   std::vector<double> t_grid, NormKind kind = NormKind::spectral);

struct TauFit {
    double t = 0.0;
    double intercept = 0.0;
    double intercept_se = 0.0;
    double slope = 0.0;
    double residual = 0.0;  // weighted sum of squared fit residuals
    std::string vote;       // extrinsic | intrinsic_or_mixed | inconclusive
};

struct Verdict {
    enum class Class { extrinsic, intrinsic_or_mixed, inconclusive };
    Class classification = Class::inconclusive;
    std::vector<TauFit> evidence;
    std::string notes;
};

/// Fit 1 - mc_mean against tau at every regime-flagged t and vote: intercept
/// within 3 standard errors of 0 -> extrinsic; intercept within a factor-3
/// band of (1/d) t^2 ||Lbar||^2 -> intrinsic_or_mixed; majority wins.
/// Fewer than 3 tau values, less than a decade of tau span, or no flagged t
/// -> inconclusive.
Verdict classify(std::vector<FidelityCurve> curves, const BoundReport& report);

}  // namespace decoq
