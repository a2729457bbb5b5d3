#include "decoq/superop.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace decoq {

SuperOp::SuperOp(int dim_h, Matrix m) : dim_h_(dim_h), m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() != static_cast<long>(dim_h) * dim_h)
        throw Error("SuperOp: matrix must be d x d with d = dim_h^2");
}

SuperOp SuperOp::identity(int dim_h) {
    return SuperOp(dim_h, Matrix::Identity(dim_h * dim_h, dim_h * dim_h));
}

SuperOp SuperOp::zero(int dim_h) {
    return SuperOp(dim_h, Matrix::Zero(dim_h * dim_h, dim_h * dim_h));
}

Matrix SuperOp::apply(const Matrix& x) const {
    if (x.rows() != dim_h_ || x.cols() != dim_h_)
        throw Error("SuperOp::apply: dimension mismatch");
    return unvec(m_ * vec(x), dim_h_);
}

SuperOp SuperOp::dagger() const { return SuperOp(dim_h_, m_.adjoint()); }

SuperOp& SuperOp::operator+=(const SuperOp& o) {
    if (o.dim_h_ != dim_h_) throw Error("SuperOp: dimension mismatch");
    m_ += o.m_;
    return *this;
}

SuperOp& SuperOp::operator-=(const SuperOp& o) {
    if (o.dim_h_ != dim_h_) throw Error("SuperOp: dimension mismatch");
    m_ -= o.m_;
    return *this;
}

SuperOp ad_of(const Matrix& h, double tol) {
    if (!is_hermitian(h, tol)) throw Error("ad_of: not hermitian");
    const int d = static_cast<int>(h.rows());
    Matrix id = Matrix::Identity(d, d);
    return SuperOp(d, kron(id, h) - kron(h.transpose(), id));
}

SuperOp Ad_of(const Matrix& v, double tol) {
    if (!is_unitary(v, tol)) throw Error("Ad_of: not unitary");
    const int d = static_cast<int>(v.rows());
    return SuperOp(d, kron(v.conjugate(), v));
}

SuperOp left_mult(const Matrix& a) {
    const int d = static_cast<int>(a.rows());
    return SuperOp(d, kron(Matrix::Identity(d, d), a));
}

SuperOp right_mult(const Matrix& a) {
    const int d = static_cast<int>(a.rows());
    return SuperOp(d, kron(a.transpose(), Matrix::Identity(d, d)));
}

SuperOp sandwich(const Matrix& b, const Matrix& c) {
    const int d = static_cast<int>(b.rows());
    return SuperOp(d, kron(c.transpose(), b));
}

Matrix expm_dense(const Matrix& m) { return m.exp(); }

SuperOp expm(const SuperOp& m, double t) {
    if (!m.matrix().allFinite()) throw Error("expm: non-finite entries");
    return SuperOp(m.dim_h(), (t * m.matrix()).exp().eval());
}

double spectral_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

double sup_norm(const SuperOp& m, NormKind kind) {
    return kind == NormKind::spectral ? spectral_norm(m.matrix()) : m.matrix().norm();
}

}  // namespace decoq
