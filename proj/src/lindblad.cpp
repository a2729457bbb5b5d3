#include "decoq/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace decoq {

namespace {

const Complex kI(0.0, 1.0);

void check_trace_annihilation(const SuperOp& l, const char* who) {
    // tr(L(x)) = 0 for all x  <=>  L^dagger kills vec(identity).
    Vector vid = vec(Matrix::Identity(l.dim_h(), l.dim_h()));
    double residual = (l.matrix().adjoint() * vid).norm();
    if (residual > 1e-10 * std::max(1.0, l.matrix().norm()))
        throw Error(std::string(who) + ": generator does not annihilate the trace (residual " +
                    std::to_string(residual) + ")");
}

SuperOp compile_gkls(const LindbladSpec& spec) {
    const int d = spec.dim;
    SuperOp l = kI * ad_of(spec.hamiltonian);
    for (const auto& jump : spec.jumps) {
        if (jump.rate < 0.0) throw Error("compile: jumps[].rate must be nonnegative");
        if (jump.op.rows() != d || jump.op.cols() != d)
            throw Error("compile: jumps[].op dimension mismatch");
        Matrix cc = jump.op.adjoint() * jump.op;
        l += jump.rate * (sandwich(jump.op, jump.op.adjoint()) -
                          0.5 * (left_mult(cc) + right_mult(cc)));
    }
    return l;
}

SuperOp compile_kraus_ce(const LindbladSpec& spec) {
    const int d = spec.dim;
    if (spec.drift.rows() != d || spec.drift.cols() != d)
        throw Error("compile: drift dimension mismatch");
    SuperOp l = left_mult(spec.drift) + right_mult(spec.drift.adjoint());
    for (const auto& b : spec.kraus) {
        if (b.rows() != d || b.cols() != d) throw Error("compile: kraus[] dimension mismatch");
        l += sandwich(b, b.adjoint());
    }
    return l;
}

}  // namespace

SuperOp amplitude_damping(double gamma) {
    if (gamma < 0.0) throw Error("amplitude_damping: gamma must be nonnegative");
    Matrix sminus(2, 2);
    sminus << 0, 0, 1, 0;
    LindbladSpec spec;
    spec.form = LindbladSpec::Form::gkls;
    spec.dim = 2;
    spec.hamiltonian = Matrix::Zero(2, 2);
    spec.jumps.push_back({sminus, 4.0 * gamma});
    return compile(spec);
}

SuperOp compile(const LindbladSpec& spec) {
    SuperOp l;
    switch (spec.form) {
        case LindbladSpec::Form::hamiltonian:
            if (!is_hermitian(spec.hamiltonian))
                throw Error("compile: hamiltonian is not hermitian");
            l = kI * ad_of(spec.hamiltonian);
            break;
        case LindbladSpec::Form::gkls:
            if (!is_hermitian(spec.hamiltonian))
                throw Error("compile: hamiltonian is not hermitian");
            l = compile_gkls(spec);
            break;
        case LindbladSpec::Form::kraus_ce:
            l = compile_kraus_ce(spec);
            break;
        case LindbladSpec::Form::builtin:
            if (spec.builtin_name == "amplitude_damping") return amplitude_damping(spec.gamma);
            throw Error("compile: unknown builtin '" + spec.builtin_name + "'");
    }
    check_trace_annihilation(l, "compile");
    return l;
}

Matrix choi_matrix(const SuperOp& m) {
    const int d = m.dim_h();
    Matrix choi = Matrix::Zero(d * d, d * d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k)
            choi += kron(matrix_unit(d, i, k), m.apply(matrix_unit(d, i, k)));
    return choi;
}

CptWitness is_cpt_generator(const SuperOp& l) {
    Vector vid = vec(Matrix::Identity(l.dim_h(), l.dim_h()));
    const double trace_residual = (l.matrix().adjoint() * vid).norm();
    if (trace_residual > 1e-10 * std::max(1.0, l.matrix().norm()))
        return {false, "trace_annihilation", trace_residual};

    const double t = 1.0 / std::max(sup_norm(l), 1.0);
    Matrix choi = choi_matrix(expm(l, t));
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (choi + choi.adjoint()));
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -1e-9) return {false, "choi_positivity", min_eig};
    return {true, "", 0.0};
}

UnitarityClass classify_unitarity(const SuperOp& l) {
    const double scale = 1e-9 * std::max(sup_norm(l), 1.0);
    if (sup_norm(l + l.dagger()) <= scale) return UnitarityClass::purely_unitary;
    if (sup_norm(l - l.dagger()) <= scale) return UnitarityClass::purely_dephasing;
    return UnitarityClass::general;
}

SuperOp sample_time_dependent(const TimeDependentSpec& spec, double t) {
    if (spec.times.empty() || spec.times.size() != spec.specs.size())
        throw Error("sample_time_dependent: malformed table");
    if (t < spec.times.front() - 1e-12 || t > spec.times.back() + 1e-12)
        throw Error("sample_time_dependent: t outside the table domain");
    t = std::clamp(t, spec.times.front(), spec.times.back());
    if (spec.times.size() == 1) return compile(spec.specs.front());

    auto it = std::upper_bound(spec.times.begin(), spec.times.end(), t);
    size_t hi = std::min<size_t>(it - spec.times.begin(), spec.times.size() - 1);
    size_t lo = hi - 1;
    const double t0 = spec.times[lo], t1 = spec.times[hi];
    const double w = (t - t0) / (t1 - t0);
    SuperOp a = compile(spec.specs[lo]);
    SuperOp b = compile(spec.specs[hi]);
    return SuperOp(a.dim_h(), (1.0 - w) * a.matrix() + w * b.matrix());
}

double time_dependence_ratio(const TimeDependentSpec& spec, double t, double tau) {
    const double span = spec.times.back() - spec.times.front();
    if (span <= 0.0) return 0.0;
    const double h = std::max(span * 1e-6, 1e-12);
    const double lo = std::max(spec.times.front(), t - h);
    const double hi = std::min(spec.times.back(), t + h);
    Matrix dl = (sample_time_dependent(spec, hi).matrix() -
                 sample_time_dependent(spec, lo).matrix()) / (hi - lo);
    const double norm_l = sup_norm(sample_time_dependent(spec, t));
    if (norm_l == 0.0) return dl.norm() == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return tau * spectral_norm(dl) / norm_l;
}

}  // namespace decoq
