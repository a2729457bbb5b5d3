#pragma once

#include <utility>
#include <vector>

#include "decoq/walk.hpp"

namespace decoq {

/// Total system H (x) H1 with H' = sum_k H0k (x) H1k + 1 (x) H1 and thermal
/// bath state rho_theta = e^{-beta H1}/Z (beta = inf -> normalized ground-space
/// projector). Bath dimension is capped (finite truncation of the model).
struct DilationSpec {
    int dim_h = 0;
    int dim_bath = 0;
    std::vector<std::pair<Matrix, Matrix>> couplings;  // (H0k on H, H1k on H1)
    Matrix bath_hamiltonian;
    double beta = 0.0;  // may be +infinity
};

inline constexpr int kMaxBathDim = 32;
inline constexpr int kMaxDilatedDim = 64;

/// Throws Error when a DilationSpec invariant is violated.
void validate(const DilationSpec& spec);

Matrix thermal_state(const DilationSpec& spec);
Matrix dilated_hamiltonian(const DilationSpec& spec);

/// L' = i ad(H'), a purely unitary generator on B(H (x) H1).
SuperOp build_dilated_generator(const DilationSpec& spec);

/// The decoupling pulses acting on the total system: v_j (x) 1.
DecouplingSet lift_set(const DecouplingSet& set, int dim_bath);

/// L_hat' = Lbar' + (tau/|J|) sum_j Ad(v_j x 1) o (L' - Lbar')^2 o Ad(v_j* x 1).
SuperOp dilated_limit_generator(const DilationSpec& spec, const DecouplingSet& set, double tau);

/// Analytic reduced expectation partial_trace(e^{t L_hat'}(rho0 (x) rho_theta)).
Matrix reduced_expected_state(const DilationSpec& spec, const DecouplingSet& set, double tau,
                              const Matrix& rho0, double t);

/// Physical walk on the dilated space with pulses v_j (x) 1; the stored maps
/// are the reduced CPT maps x -> partial_trace(dilated_map(x (x) rho_theta)).
std::vector<WalkPath> simulate_extrinsic_ensemble(const DilationSpec& spec,
                                                  const DecouplingSet& set, const WalkConfig& cfg,
                                                  std::size_t budget_entries = kDefaultEnsembleBudget);

}  // namespace decoq
