#include "decoq/limit.hpp"

#include <cmath>

namespace decoq {

namespace {

// L_hat(t) = Lbar(t) + (tau/|J|) sum_j Ad(v_j) o (L(t) - Lbar(t))^2 o Ad(v_j*)
SuperOp instantaneous_l_hat(const SuperOp& l, const DecouplingSet& set, double tau) {
    SuperOp lbar = averaged_generator(l, set);
    Matrix diff = l.matrix() - lbar.matrix();
    Matrix acc = Matrix::Zero(l.dim(), l.dim());
    for (const auto& v : set.unitaries) {
        Matrix ad = Ad_of(v).matrix();
        acc += ad * diff * diff * ad.adjoint();
    }
    return SuperOp(l.dim_h(), lbar.matrix() + (tau / set.size()) * acc);
}

}  // namespace

LimitGenerators build_limit_generators(const SuperOp& l, const DecouplingSet& set, double tau) {
    if (l.dim_h() != set.dim_h) throw Error("build_limit_generators: dimension mismatch");
    if (!(tau > 0.0)) throw Error("build_limit_generators: tau must be > 0");
    LimitGenerators gens;
    gens.lbar = averaged_generator(l, set);
    gens.l_list = fluctuation_generators(l, set);
    Matrix sq = Matrix::Zero(l.dim(), l.dim());
    for (const auto& lj : gens.l_list) sq += lj.matrix() * lj.matrix();
    gens.l_hat = SuperOp(l.dim_h(), gens.lbar.matrix() + (tau / set.size()) * sq);
    gens.l_hat_drift = gens.lbar;
    gens.tau = tau;
    gens.set_size = set.size();
    return gens;
}

Matrix expected_state(const LimitGenerators& gens, const Matrix& rho0, double t, Scheme scheme) {
    if (!is_density(rho0)) throw Error("expected_state: rho0 is not a density matrix");
    switch (scheme) {
        case Scheme::diffusion:
            return expm(gens.l_hat, t).apply(rho0);
        case Scheme::drift:
            return expm(gens.l_hat_drift, t).apply(rho0);
        case Scheme::physical:
            break;
    }
    throw Error("expected_state: scheme must be diffusion or drift");
}

TimeDependentExpectation expected_state_time_dependent(const TimeDependentSpec& spec,
                                                       const DecouplingSet& set, double tau,
                                                       const Matrix& rho0, double t) {
    if (!is_density(rho0)) throw Error("expected_state_time_dependent: rho0 is not a density matrix");
    if (t < 0.0) throw Error("expected_state_time_dependent: t must be nonnegative");
    SuperOp l0 = sample_time_dependent(spec, spec.times.front());
    if (l0.dim_h() != set.dim_h) throw Error("expected_state_time_dependent: dimension mismatch");

    TimeDependentExpectation out;
    if (t == 0.0) {
        out.rho = rho0;
        return out;
    }
    double norm_max = 1.0;
    for (const auto& s : spec.specs) norm_max = std::max(norm_max, sup_norm(compile(s)));
    const long sub = std::max(1l, static_cast<long>(std::ceil(norm_max * t / 1e-3)));
    const double dt = t / static_cast<double>(sub);
    SuperOp p = SuperOp::identity(l0.dim_h());
    for (long i = 0; i < sub; ++i) {
        const double ti = i * dt;  // left endpoint
        p = expm(instantaneous_l_hat(sample_time_dependent(spec, ti), set, tau), dt) * p;
        out.max_validity_ratio =
            std::max(out.max_validity_ratio, time_dependence_ratio(spec, ti, tau));
    }
    out.flagged = out.max_validity_ratio > 0.1;
    out.rho = p.apply(rho0);
    return out;
}

LiftedOp lift_with_slots(const LimitGenerators& gens, const std::vector<bool>& anti) {
    const int arity = static_cast<int>(anti.size());
    if (arity < 1) throw Error("lift_with_slots: arity must be >= 1");
    LiftedOp op(arity, gens.dim_h());
    const Matrix lbar = gens.lbar.matrix();
    for (int s = 0; s < arity; ++s)
        op.add_term(1.0, {{s, anti[s] ? Matrix(lbar.conjugate()) : lbar}});
    const double w = gens.tau / static_cast<double>(gens.set_size);
    for (const auto& lj : gens.l_list) {
        std::vector<Matrix> slot_mat(arity);
        for (int s = 0; s < arity; ++s)
            slot_mat[s] = anti[s] ? Matrix(lj.matrix().conjugate()) : lj.matrix();
        // (sum_s M_s)^2 with commuting slots: squares plus doubled ordered pairs.
        for (int s = 0; s < arity; ++s) op.add_term(w, {{s, Matrix(slot_mat[s] * slot_mat[s])}});
        for (int s = 0; s < arity; ++s)
            for (int s2 = s + 1; s2 < arity; ++s2)
                op.add_term(2.0 * w, {{s, slot_mat[s]}, {s2, slot_mat[s2]}});
    }
    return op;
}

LiftedOp lift_moment_generator(const LimitGenerators& gens, int n) {
    return lift_with_slots(gens, std::vector<bool>(n, false));
}

LiftedOp lift_mixed_generators(const LimitGenerators& gens, MixedKind kind) {
    switch (kind) {
        case MixedKind::check2:
            return lift_with_slots(gens, {false, true});
        case MixedKind::c11:
            return lift_with_slots(gens, {false, false});
        case MixedKind::c12:
            return lift_with_slots(gens, {true, false});
        case MixedKind::c31:
            return lift_with_slots(gens, {false, false, true});
        case MixedKind::c32:
            return lift_with_slots(gens, {true, false, true});
        case MixedKind::check4:
            return lift_with_slots(gens, {false, true, false, true});
    }
    throw Error("lift_mixed_generators: unknown kind");
}

}  // namespace decoq
