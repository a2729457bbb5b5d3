#include "decoq/lifted.hpp"

#include <cmath>

namespace decoq {

LiftedOp::LiftedOp(int arity, int dim_h) : arity_(arity), dim_h_(dim_h) {
    if (arity < 1) throw Error("LiftedOp: arity must be >= 1");
    dim_ = 1;
    const long d = static_cast<long>(dim_h) * dim_h;
    for (int i = 0; i < arity; ++i) dim_ *= d;
}

void LiftedOp::add_term(Complex coeff, std::vector<std::pair<int, Matrix>> factors) {
    const long d = static_cast<long>(dim_h_) * dim_h_;
    for (auto& [slot, f] : factors) {
        if (slot < 0 || slot >= arity_) throw Error("LiftedOp: slot out of range");
        if (f.rows() != d || f.cols() != d) throw Error("LiftedOp: factor dimension mismatch");
    }
    dense_.reset();
    terms_.push_back({coeff, std::move(factors)});
}

namespace {

// Applies m at the given slot of a tensor vector; slot 0 is the most
// significant index block.
Vector mode_apply(const Matrix& m, int slot, int arity, long block, const Vector& w) {
    long outer = 1;
    for (int i = 0; i < slot; ++i) outer *= block;
    long inner = 1;
    for (int i = slot + 1; i < arity; ++i) inner *= block;

    Vector out = Vector::Zero(w.size());
    Matrix buf(block, inner);
    for (long o = 0; o < outer; ++o) {
        const long base = o * block * inner;
        for (long b = 0; b < block; ++b)
            for (long i = 0; i < inner; ++i) buf(b, i) = w(base + b * inner + i);
        Matrix res = m * buf;
        for (long b = 0; b < block; ++b)
            for (long i = 0; i < inner; ++i) out(base + b * inner + i) = res(b, i);
    }
    return out;
}

}  // namespace

Vector LiftedOp::apply(const Vector& w) const {
    if (w.size() != dim_) throw Error("LiftedOp::apply: vector length mismatch");
    if (dense_.has_value()) return *dense_ * w;
    const long d = static_cast<long>(dim_h_) * dim_h_;
    Vector out = Vector::Zero(dim_);
    for (const auto& term : terms_) {
        Vector v = w;
        for (const auto& [slot, f] : term.factors) v = mode_apply(f, slot, arity_, d, v);
        out += term.coeff * v;
    }
    return out;
}

const Matrix& LiftedOp::dense() const {
    if (!dense_available()) throw Error("LiftedOp::dense: dimension exceeds dense threshold");
    if (!dense_.has_value()) {
        const long d = static_cast<long>(dim_h_) * dim_h_;
        Matrix full = Matrix::Zero(dim_, dim_);
        for (const auto& term : terms_) {
            Matrix acc = Matrix::Identity(1, 1);
            int next = 0;
            for (const auto& [slot, f] : term.factors) {
                for (; next < slot; ++next) acc = kron(acc, Matrix::Identity(d, d));
                acc = kron(acc, f);
                ++next;
            }
            for (; next < arity_; ++next) acc = kron(acc, Matrix::Identity(d, d));
            full += term.coeff * acc;
        }
        dense_ = std::move(full);
    }
    return *dense_;
}

LiftedOp LiftedOp::dagger() const {
    LiftedOp out(arity_, dim_h_);
    for (const auto& term : terms_) {
        std::vector<std::pair<int, Matrix>> factors;
        factors.reserve(term.factors.size());
        for (const auto& [slot, f] : term.factors) factors.emplace_back(slot, f.adjoint());
        out.add_term(std::conj(term.coeff), std::move(factors));
    }
    return out;
}

double LiftedOp::norm_bound() const {
    double total = 0.0;
    for (const auto& term : terms_) {
        double p = std::abs(term.coeff);
        for (const auto& [slot, f] : term.factors) p *= f.norm();
        total += p;
    }
    return total;
}

Vector expm_action(const LiftedOp& m, double t, const Vector& w) {
    if (w.size() != m.dim()) throw Error("expm_action: vector length mismatch");
    if (t == 0.0) return w;
    const double bound = m.norm_bound() * std::abs(t);
    const long steps = std::max(1L, static_cast<long>(std::ceil(bound)));
    const double h = t / static_cast<double>(steps);

    Vector v = w;
    for (long s = 0; s < steps; ++s) {
        Vector acc = v;
        Vector term = v;
        for (int k = 1; k <= 120; ++k) {
            term = (h / static_cast<double>(k)) * m.apply(term);
            acc += term;
            if (term.norm() <= 1e-13 * std::max(1.0, acc.norm())) break;
        }
        v = std::move(acc);
    }
    return v;
}

}  // namespace decoq
