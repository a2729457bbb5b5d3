#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "decoq/superop.hpp"

namespace decoq {

/// Maximum tensor dimension for which a dense realization is materialized.
inline constexpr long kDenseLiftedLimit = 4096;

/// An operator on A^{(x) n} stored as a sum of elementary tensor products of
/// SuperOps. Factors equal to the identity are left implicit, so the action
/// stays matrix-free above the dense threshold.
class LiftedOp {
public:
    struct Term {
        Complex coeff;
        // (slot, factor matrix) pairs, slots strictly increasing, slot 0 leftmost.
        std::vector<std::pair<int, Matrix>> factors;
    };

    LiftedOp(int arity, int dim_h);

    int arity() const { return arity_; }
    int dim_h() const { return dim_h_; }
    long dim() const { return dim_; }

    void add_term(Complex coeff, std::vector<std::pair<int, Matrix>> factors);

    Vector apply(const Vector& w) const;
    bool dense_available() const { return dim_ <= kDenseLiftedLimit; }
    const Matrix& dense() const;  // cached; throws above the threshold

    LiftedOp dagger() const;  // term-wise conjugate transpose

    /// Upper bound on the operator norm: sum of |coeff| * prod ||factor||_2.
    double norm_bound() const;

    const std::vector<Term>& terms() const { return terms_; }

private:
    int arity_;
    int dim_h_;
    long dim_;  // (dim_h^2)^arity
    std::vector<Term> terms_;
    mutable std::optional<Matrix> dense_;
};

/// e^{tM} w via norm-scaled truncated Taylor series, error <= 1e-10 in 2-norm.
Vector expm_action(const LiftedOp& m, double t, const Vector& w);

}  // namespace decoq
