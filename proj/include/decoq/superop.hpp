#pragma once

#include <vector>

#include "decoq/operator_space.hpp"

namespace decoq {

enum class NormKind { spectral, frobenius };

/// A linear map on A = B(H), stored as a d x d matrix (d = dim_h^2) in the
/// matrix-unit basis with column-stacking vectorization. In this basis the
/// Hilbert-Schmidt adjoint is the conjugate transpose.
class SuperOp {
public:
    SuperOp() = default;
    SuperOp(int dim_h, Matrix m);

    static SuperOp identity(int dim_h);
    static SuperOp zero(int dim_h);

    int dim_h() const { return dim_h_; }
    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& matrix() const { return m_; }
    Matrix& matrix() { return m_; }

    Matrix apply(const Matrix& x) const;
    SuperOp dagger() const;

    SuperOp& operator+=(const SuperOp& o);
    SuperOp& operator-=(const SuperOp& o);
    friend SuperOp operator+(SuperOp a, const SuperOp& b) { return a += b; }
    friend SuperOp operator-(SuperOp a, const SuperOp& b) { return a -= b; }
    friend SuperOp operator*(const SuperOp& a, const SuperOp& b) {
        return SuperOp(a.dim_h_, a.m_ * b.m_);
    }
    friend SuperOp operator*(Complex s, const SuperOp& a) {
        return SuperOp(a.dim_h_, s * a.m_);
    }
    friend SuperOp operator*(double s, const SuperOp& a) {
        return SuperOp(a.dim_h_, s * a.m_);
    }

private:
    int dim_h_ = 0;
    Matrix m_;
};

/// ad(H): x -> Hx - xH. Rejects non-hermitian H.
SuperOp ad_of(const Matrix& h, double tol = 1e-9);

/// Ad(v): x -> v x v*. Rejects non-unitary v.
SuperOp Ad_of(const Matrix& v, double tol = 1e-9);

/// x -> a x
SuperOp left_mult(const Matrix& a);
/// x -> x a
SuperOp right_mult(const Matrix& a);
/// x -> b x c
SuperOp sandwich(const Matrix& b, const Matrix& c);

/// e^{t M} via scaling-and-squaring.
SuperOp expm(const SuperOp& m, double t);
Matrix expm_dense(const Matrix& m);

double sup_norm(const SuperOp& m, NormKind kind = NormKind::spectral);
double spectral_norm(const Matrix& m);

}  // namespace decoq
