#include "decoq/fidelity.hpp"

#include <cmath>

namespace decoq {

namespace {

long composite_index(const std::vector<int>& comp, long d) {
    long idx = 0;
    for (int c : comp) idx = idx * d + c;
    return idx;
}

// Index-pattern contraction of e^{tM} on the lifted space. Trace slots carry a
// shared bra = ket letter; each pair (s, s') carries one bra letter on both of
// its slots and an independent ket letter on both. All letters are summed:
//   e.g. trace {0}, pairs {(1,2)}  ->  sum_{c,a,b} <e_{caa}, e^{tM} e_{cbb}>.
// Every moment contraction of |tr M|-type and ||M||_F^2-type factors is of
// this shape once the Kronecker deltas of the entry sums are resolved.
Complex pattern_exp_sum(const LiftedOp& m, double t, const std::vector<int>& trace_slots,
                        const std::vector<std::pair<int, int>>& pairs, bool allow_matrix_free) {
    const int arity = m.arity();
    const long d = static_cast<long>(m.dim_h()) * m.dim_h();
    auto advance = [d](std::vector<int>& letters) {
        int s = static_cast<int>(letters.size()) - 1;
        while (s >= 0 && ++letters[s] == d) letters[s--] = 0;
        return s >= 0;
    };
    Complex acc = 0.0;
    if (m.dense_available()) {
        Matrix x = expm_dense(t * m.dense());
        std::vector<int> bra(arity), ket(arity);
        // letters: one per trace slot, then (bra, ket) per pair
        std::vector<int> letters(trace_slots.size() + 2 * pairs.size(), 0);
        do {
            std::size_t li = 0;
            for (int s : trace_slots) bra[s] = ket[s] = letters[li++];
            for (const auto& [s, s2] : pairs) {
                bra[s] = bra[s2] = letters[li++];
                ket[s] = ket[s2] = letters[li++];
            }
            acc += x(composite_index(bra, d), composite_index(ket, d));
        } while (advance(letters));
        return acc;
    }
    if (!allow_matrix_free)
        throw Error("analytic fidelity: lifted dimension " + std::to_string(m.dim()) +
                    " exceeds the dense budget and matrix-free evaluation is disabled");
    // The bra and ket share the trace letters and both sum the pair letters,
    // so the contraction is sum over trace letters of <u, e^{tM} u> with u a
    // 0/1 vector supported on the pair-letter combinations.
    std::vector<int> comp(arity);
    std::vector<int> trace_letters(trace_slots.size(), 0);
    do {
        Vector u = Vector::Zero(m.dim());
        std::size_t li = 0;
        for (int s : trace_slots) comp[s] = trace_letters[li++];
        std::vector<int> pair_letters(pairs.size(), 0);
        do {
            for (std::size_t p = 0; p < pairs.size(); ++p)
                comp[pairs[p].first] = comp[pairs[p].second] = pair_letters[p];
            u(composite_index(comp, d)) = 1.0;
        } while (advance(pair_letters));
        acc += u.dot(expm_action(m, t, u));
    } while (advance(trace_letters));
    return acc;
}

}  // namespace

double path_fidelity(const SuperOp& m) {
    const double d = static_cast<double>(m.dim());
    return 1.0 - (Matrix::Identity(m.dim(), m.dim()) - m.matrix()).squaredNorm() / d;
}

double path_fidelity(const SuperOp& m, const std::vector<Matrix>& basis) {
    const double d = static_cast<double>(m.dim());
    double acc = 0.0;
    for (const auto& ek : basis) {
        Matrix image = ek - m.apply(ek);
        for (const auto& el : basis) acc += std::norm(hs_inner(el, image));
    }
    return 1.0 - acc / d;
}

double analytic_mean_fidelity(const LimitGenerators& gens, double t) {
    if (t < 0.0) throw Error("analytic_mean_fidelity: t must be nonnegative");
    const double d = static_cast<double>(gens.lbar.dim());
    const double re_a = expm(gens.l_hat, t).matrix().trace().real();
    const Complex b =
        pattern_exp_sum(lift_mixed_generators(gens, MixedKind::check2), t, {}, {{0, 1}}, true);
    return 1.0 - (d - 2.0 * re_a + b.real()) / d;
}

double analytic_var_fidelity(const LimitGenerators& gens, double t, double* raw_out,
                             bool allow_matrix_free) {
    if (t < 0.0) throw Error("analytic_var_fidelity: t must be nonnegative");
    const double d = static_cast<double>(gens.lbar.dim());
    const bool mf = allow_matrix_free;

    const double re_a = expm(gens.l_hat, t).matrix().trace().real();
    const double b =
        pattern_exp_sum(lift_mixed_generators(gens, MixedKind::check2), t, {}, {{0, 1}}, mf)
            .real();
    // 4 E[(Re tr M)^2] = 2 Re E[(tr M)^2] + 2 E[|tr M|^2]
    const double c =
        2.0 *
        (pattern_exp_sum(lift_mixed_generators(gens, MixedKind::c11), t, {0, 1}, {}, mf) +
         pattern_exp_sum(lift_mixed_generators(gens, MixedKind::c12), t, {0, 1}, {}, mf))
            .real();
    // 2 E[tr M ||M||^2] + 2 E[conj(tr M) ||M||^2] = 4 E[(Re tr M) ||M||^2]
    const double dd =
        (pattern_exp_sum(lift_mixed_generators(gens, MixedKind::c31), t, {0}, {{1, 2}}, mf) +
         pattern_exp_sum(lift_mixed_generators(gens, MixedKind::c32), t, {0}, {{1, 2}}, mf))
            .real();
    const double e4 = pattern_exp_sum(lift_mixed_generators(gens, MixedKind::check4), t, {},
                                      {{0, 1}, {2, 3}}, mf)
                          .real();

    const double m1 = (d - 2.0 * re_a + b) / d;
    const double m2 = (d * d - 4.0 * d * re_a + 2.0 * d * b + c - 2.0 * dd + e4) / (d * d);
    const double raw = m2 - m1 * m1;
    if (raw_out) *raw_out = raw;
    return std::max(raw, 0.0);
}

std::pair<double, double> drift_fidelity(const LimitGenerators& gens, double t) {
    if (t < 0.0) throw Error("drift_fidelity: t must be nonnegative");
    const double d = static_cast<double>(gens.lbar.dim());
    Matrix diff = Matrix::Identity(gens.lbar.dim(), gens.lbar.dim()) -
                  expm(gens.l_hat_drift, t).matrix();
    return {1.0 - diff.squaredNorm() / d, 0.0};
}

FidelityCurve mc_fidelity(const std::vector<WalkPath>& ensemble, const std::vector<double>& t_grid) {
    if (ensemble.empty()) throw Error("mc_fidelity: empty ensemble");
    for (const auto& p : ensemble)
        if (p.maps.size() != t_grid.size()) throw Error("mc_fidelity: t_grid length mismatch");
    FidelityCurve curve;
    curve.t_grid = t_grid;
    curve.mc_paths = static_cast<long>(ensemble.size());
    const double n = static_cast<double>(ensemble.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        double mean = 0.0;
        for (const auto& p : ensemble) mean += path_fidelity(p.maps[i]);
        mean /= n;
        double ss = 0.0;
        for (const auto& p : ensemble) {
            const double dev = path_fidelity(p.maps[i]) - mean;
            ss += dev * dev;
        }
        curve.mc_mean.push_back(mean);
        curve.mc_stderr.push_back(n > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0);
    }
    return curve;
}

std::pair<double, double> chebyshev_envelope(double mean, double var, double confidence) {
    if (var < 0.0) throw Error("chebyshev_envelope: var must be nonnegative");
    if (!(confidence > 0.0 && confidence < 1.0))
        throw Error("chebyshev_envelope: confidence must lie in (0, 1)");
    const double half = std::sqrt(var / (1.0 - confidence));
    auto clip = [](double v) { return std::min(1.0, std::max(0.0, v)); };
    return {clip(mean - half), clip(mean + half)};
}

}  // namespace decoq
