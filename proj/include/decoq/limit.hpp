#pragma once

#include <vector>

#include "decoq/decoupling.hpp"
#include "decoq/lifted.hpp"
#include "decoq/lindblad.hpp"

namespace decoq {

enum class Scheme { physical, diffusion, drift };

/// The continuum-limit generators of a decoupled system:
///   L_hat       = Lbar + (tau/|J|) sum_j L_j^2     (diffusion limit)
///   L_hat_drift = Lbar                              (drift limit)
struct LimitGenerators {
    SuperOp lbar;
    std::vector<SuperOp> l_list;
    SuperOp l_hat;
    SuperOp l_hat_drift;
    double tau = 0.0;
    int set_size = 0;

    int dim_h() const { return lbar.dim_h(); }
};

LimitGenerators build_limit_generators(const SuperOp& l, const DecouplingSet& set, double tau);

/// E[rho_t] = e^{t L_hat}(rho0) (diffusion) or e^{t Lbar}(rho0) (drift).
Matrix expected_state(const LimitGenerators& gens, const Matrix& rho0, double t, Scheme scheme);

struct TimeDependentExpectation {
    Matrix rho;
    double max_validity_ratio = 0.0;  // tau * ||dL/dt|| / ||L||, worst case seen
    bool flagged = false;             // ratio exceeded 0.1 somewhere on [0, t]
    // L(t) is sampled at the left endpoint of each product-integral sub-step.
};

/// Time-ordered product integral of L_hat(t') over [0, t], applied to rho0.
TimeDependentExpectation expected_state_time_dependent(const TimeDependentSpec& spec,
                                                       const DecouplingSet& set, double tau,
                                                       const Matrix& rho0, double t);

/// L_hat^{(n)} on A^{(x) n}: single-site Lbar and (tau/|J|) L_j^2 terms plus
/// cross terms 2 (tau/|J|) L_j (x) L_j on ordered slot pairs.
LiftedOp lift_moment_generator(const LimitGenerators& gens, int n);

/// Mixed lifts used by the fidelity moments. A marked slot (c) tracks the
/// entrywise-conjugated process conj(M); conjugation preserves product order,
/// so every slot pattern is a true ordered product and its expectation is a
/// genuine exponential. Patterns: check2 = (.,c), c11 = (.,.), c12 = (c,.),
/// c31 = (.,.,c), c32 = (c,.,c), check4 = (.,c,.,c).
enum class MixedKind { check2, check4, c11, c12, c31, c32 };
LiftedOp lift_mixed_generators(const LimitGenerators& gens, MixedKind kind);

/// General slot-pattern lift: anti[s] marks slots that carry the conjugated
/// generators. All mixed kinds above are instances of this builder.
LiftedOp lift_with_slots(const LimitGenerators& gens, const std::vector<bool>& anti);

}  // namespace decoq
