#include "decoq/decoupling.hpp"

#include <cmath>
#include <limits>

namespace decoq {

DecouplingSet pauli_set(int n_qubits) {
    if (n_qubits < 1) throw Error("pauli_set: n_qubits must be >= 1");
    DecouplingSet set;
    set.dim_h = 1 << n_qubits;
    const int count = 1 << (2 * n_qubits);
    set.unitaries.reserve(count);
    for (int idx = 0; idx < count; ++idx) {
        Matrix v = Matrix::Identity(1, 1);
        int rest = idx;
        for (int q = 0; q < n_qubits; ++q) {
            v = kron(v, pauli(rest % 4));
            rest /= 4;
        }
        set.unitaries.push_back(std::move(v));
    }
    return set;
}

ValidationReport validate(const DecouplingSet& set) {
    const int d = set.dim_h;
    if (set.unitaries.empty()) return {false, "empty_set", 0.0};
    {
        double r = (set.unitaries[0] - Matrix::Identity(d, d)).norm();
        if (r > 1e-14 * std::max(1, d)) return {false, "v0_identity", r};
    }
    for (const auto& v : set.unitaries) {
        if (v.rows() != d || v.cols() != d) return {false, "member_dimension", 0.0};
        double r = (v * v.adjoint() - Matrix::Identity(d, d)).norm();
        if (r > 1e-10 * d) return {false, "member_unitarity", r};
    }

    // Closure of {Ad(v_j)} under products; global phases are irrelevant.
    std::vector<Matrix> ad;
    ad.reserve(set.unitaries.size());
    for (const auto& v : set.unitaries) ad.push_back(Ad_of(v).matrix());
    for (size_t j = 0; j < ad.size(); ++j) {
        for (size_t k = 0; k < ad.size(); ++k) {
            Matrix prod = ad[j] * ad[k];
            double best = std::numeric_limits<double>::infinity();
            for (const auto& m : ad) best = std::min(best, (prod - m).norm());
            if (best > 1e-10 * d) return {false, "ad_closure", best};
        }
    }

    // Averaging property on every matrix unit.
    const double inv = 1.0 / static_cast<double>(set.size());
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
            Matrix x = matrix_unit(d, r, c);
            Matrix avg = Matrix::Zero(d, d);
            for (const auto& v : set.unitaries) avg += inv * (v * x * v.adjoint());
            Matrix target = (x.trace() / static_cast<double>(d)) * Matrix::Identity(d, d);
            double res = (avg - target).norm();
            if (res > 1e-10) return {false, "averaging", res};
        }
    }
    return {true, "", 0.0};
}

SuperOp averaged_generator(const SuperOp& l, const DecouplingSet& set) {
    if (l.dim_h() != set.dim_h) throw Error("averaged_generator: dimension mismatch");
    Matrix acc = Matrix::Zero(l.dim(), l.dim());
    for (const auto& v : set.unitaries) {
        Matrix ad = Ad_of(v).matrix();
        acc += ad * l.matrix() * ad.adjoint();
    }
    return SuperOp(l.dim_h(), acc / static_cast<double>(set.size()));
}

std::vector<SuperOp> fluctuation_generators(const SuperOp& l, const DecouplingSet& set) {
    if (l.dim_h() != set.dim_h) throw Error("fluctuation_generators: dimension mismatch");
    SuperOp lbar = averaged_generator(l, set);
    Matrix diff = l.matrix() - lbar.matrix();
    std::vector<SuperOp> out;
    out.reserve(set.size());
    for (const auto& v : set.unitaries) {
        Matrix ad = Ad_of(v).matrix();
        out.emplace_back(l.dim_h(), ad * diff * ad.adjoint());
    }
    return out;
}

bool decoupling_condition_holds(const SuperOp& l, const DecouplingSet& set) {
    return sup_norm(averaged_generator(l, set)) <= 1e-9 * std::max(sup_norm(l), 1.0);
}

}  // namespace decoq
