#pragma once

#include <cstdint>
#include <vector>

#include "decoq/limit.hpp"

namespace decoq {

struct WalkConfig {
    double tau = 0.0;
    std::vector<double> t_grid;  // increasing, nonnegative
    Scheme scheme = Scheme::physical;
    long n = 0;  // steps-per-unit-scale for diffusion/drift (>= 100)
    long paths = 1;
    std::uint64_t master_seed = 0;
};

/// Throws Error when a WalkConfig invariant is violated.
void validate(const WalkConfig& cfg);

struct WalkPath {
    std::uint64_t path_id = 0;
    std::vector<std::uint16_t> pulse_indices;  // one entry per step taken
    std::vector<SuperOp> maps;                 // aligned with t_grid
    std::vector<double> fidelity;              // optional per-time cache
};

/// Thrown when an ensemble would exceed the storage budget; mapped to a
/// dedicated CLI exit code.
class BudgetError : public Error {
public:
    using Error::Error;
};

/// Physical pulse-walk increment exp(tau * Ad(v_j) o L o Ad(v_j*)).
SuperOp physical_step(const SuperOp& l, const DecouplingSet& set, int j, double tau);

/// Time-dependent variant: first-order product integral of the conjugated
/// L(t) over [t_start, t_start + tau], sub-stepped so ||L|| * dt <= 1e-3.
SuperOp physical_step(const TimeDependentSpec& spec, const DecouplingSet& set, int j, double tau,
                      double t_start);

/// One increment of the limit-scheme walks, n steps per unit time:
///   diffusion -> exp( sqrt(2 tau / n) * L_j + (1/n) * Lbar )
///   drift     -> exp( (1/n) * (Lbar + L_j) )       [Lbar + L_j = Ad(v_j) o L o Ad(v_j*)]
/// The diffusion one-step form is the unique scaling of the (L_j, Lbar) pair
/// whose m = round(t*n)-step product has first moment -> e^{t L_hat} and
/// lifted moments -> e^{t L_hat^(n)} as n grows (rate O(n^{-1/2})).
SuperOp scheme_step(const SuperOp& lbar, const SuperOp& lj, double tau, long n, Scheme scheme);

inline constexpr std::size_t kDefaultEnsembleBudget = std::size_t(1) << 27;  // map entries

/// Worker-thread cap for ensemble simulation; 0 restores hardware concurrency.
/// Results are bit-identical for any setting.
void set_max_threads(long n);
long effective_threads(long paths);

/// Seeded ensemble of walk paths; path p uses the counter-based stream
/// (master_seed, p), so results are bit-identical for any thread count.
/// Grid times between physical pulses use the bare evolution remainder
/// e^{(t - k tau) L} after k whole steps; scheme walks use m = round(t*n)
/// increments per grid time, advanced incrementally.
std::vector<WalkPath> simulate_ensemble(const SuperOp& l, const DecouplingSet& set,
                                        const WalkConfig& cfg,
                                        std::size_t budget_entries = kDefaultEnsembleBudget);

/// Time-dependent generator (physical scheme only).
std::vector<WalkPath> simulate_ensemble(const TimeDependentSpec& spec, const DecouplingSet& set,
                                        const WalkConfig& cfg,
                                        std::size_t budget_entries = kDefaultEnsembleBudget);

/// rho_t = map_t(rho0) for each grid time. Rejects non-density rho0.
std::vector<Matrix> apply_to_state(const WalkPath& path, const Matrix& rho0);

}  // namespace decoq
