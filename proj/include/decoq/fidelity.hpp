#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "decoq/walk.hpp"

namespace decoq {

struct FidelityCurve {
    std::vector<double> t_grid;
    std::vector<double> mc_mean;
    std::vector<double> mc_stderr;
    long mc_paths = 0;
    std::vector<double> analytic_mean;
    std::vector<double> analytic_var;      // clamped at 0 from below
    std::vector<double> analytic_var_raw;  // pre-clamp values
    std::vector<double> drift_mean;
    std::string scheme;
    std::uint64_t seed = 0;
    double tau = 0.0;
};

/// Gate fidelity of one realized map: 1 - (1/d) ||id - m||_F^2.
double path_fidelity(const SuperOp& m);

/// Literal double-sum evaluation 1 - (1/d) sum_{k,l} |<e_l, (id - m) e_k>|^2
/// over an explicit orthonormal basis of A (test oracle; basis-independent).
double path_fidelity(const SuperOp& m, const std::vector<Matrix>& basis);

/// E[F_t] = 1 - (1/d)(d - 2 Re tr e^{t L_hat} + <phi, e^{t Lcheck2} phi>) with
/// phi = sum_a e_a (x) e_a; the second slot of Lcheck2 tracks conj(M), so the
/// phi pairing contracts E[M (x) conj(M)] to E[||M||_F^2] (flip-trace identity).
double analytic_mean_fidelity(const LimitGenerators& gens, double t);

/// Var[F_t] via the mixed lifts: the entry-index delta patterns of the second
/// moment reduce to trace/pair contractions of e^{t L} on each lifted space.
/// Clamped to >= 0; pass raw_out to retrieve the unclamped value.
double analytic_var_fidelity(const LimitGenerators& gens, double t, double* raw_out = nullptr,
                             bool allow_matrix_free = true);

/// (mean, var) in the drift limit: 1 - (1/d)||id - e^{t Lbar}||_F^2, var = 0.
std::pair<double, double> drift_fidelity(const LimitGenerators& gens, double t);

/// Per-time sample mean and stderr of path_fidelity over the ensemble.
FidelityCurve mc_fidelity(const std::vector<WalkPath>& ensemble, const std::vector<double>& t_grid);

/// Chebyshev interval: mean -+ sqrt(var / (1 - confidence)), clipped to [0,1].
std::pair<double, double> chebyshev_envelope(double mean, double var, double confidence);

}  // namespace decoq
