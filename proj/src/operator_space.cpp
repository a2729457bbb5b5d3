#include "decoq/operator_space.hpp"

namespace decoq {

Matrix pauli(int i) {
    Matrix m(2, 2);
    const Complex I(0.0, 1.0);
    switch (i) {
        case 0: m << 1, 0, 0, 1; break;
        case 1: m << 0, 1, 1, 0; break;
        case 2: m << 0, -I, I, 0; break;
        case 3: m << 1, 0, 0, -1; break;
        default: throw Error("pauli index must be 0..3");
    }
    return m;
}

Matrix matrix_unit(int dim, int row, int col) {
    Matrix m = Matrix::Zero(dim, dim);
    m(row, col) = 1.0;
    return m;
}

Vector vec(const Matrix& x) {
    const int d = static_cast<int>(x.rows());
    Vector v(d * x.cols());
    for (int l = 0; l < x.cols(); ++l)
        for (int k = 0; k < d; ++k) v(l * d + k) = x(k, l);
    return v;
}

Matrix unvec(const Vector& v, int dim) {
    if (v.size() != static_cast<long>(dim) * dim)
        throw Error("unvec: length does not match dimension");
    Matrix x(dim, dim);
    for (int l = 0; l < dim; ++l)
        for (int k = 0; k < dim; ++k) x(k, l) = v(l * dim + k);
    return x;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

bool is_finite(const Matrix& x) { return x.allFinite(); }

bool is_hermitian(const Matrix& x, double tol) {
    return is_finite(x) && (x - x.adjoint()).norm() <= tol * std::max(1.0, x.norm());
}

bool is_unitary(const Matrix& x, double tol) {
    if (!is_finite(x) || x.rows() != x.cols()) return false;
    Matrix id = Matrix::Identity(x.rows(), x.cols());
    return (x * x.adjoint() - id).norm() <= tol * x.rows();
}

bool is_density(const Matrix& x, double tol) {
    if (!is_hermitian(x, tol)) return false;
    if (std::abs(x.trace() - Complex(1.0)) > tol * 10) return false;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (x + x.adjoint()));
    return es.eigenvalues().minCoeff() >= -tol;
}

Complex hs_inner(const Matrix& x, const Matrix& y) { return (x.adjoint() * y).trace(); }

Matrix partial_trace(const Matrix& x, int dim_a, int dim_b, int keep) {
    if (x.rows() != static_cast<long>(dim_a) * dim_b || x.rows() != x.cols())
        throw Error("partial_trace: dimension does not factor as requested");
    if (keep == 0) {
        Matrix out = Matrix::Zero(dim_a, dim_a);
        for (int i = 0; i < dim_a; ++i)
            for (int j = 0; j < dim_a; ++j)
                for (int k = 0; k < dim_b; ++k)
                    out(i, j) += x(i * dim_b + k, j * dim_b + k);
        return out;
    }
    Matrix out = Matrix::Zero(dim_b, dim_b);
    for (int i = 0; i < dim_b; ++i)
        for (int j = 0; j < dim_b; ++j)
            for (int k = 0; k < dim_a; ++k)
                out(i, j) += x(k * dim_b + i, k * dim_b + j);
    return out;
}

}  // namespace decoq
