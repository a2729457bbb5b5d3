#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace decoq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Thrown when an operation's preconditions are violated.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Pauli matrices and common single-qubit constants.
Matrix pauli(int i);  // 0 -> identity, 1..3 -> sigma_x, sigma_y, sigma_z
Matrix matrix_unit(int dim, int row, int col);

/// Column-stacking vectorization: component l*d + k holds x(k, l).
Vector vec(const Matrix& x);
Matrix unvec(const Vector& v, int dim);

Matrix kron(const Matrix& a, const Matrix& b);

bool is_finite(const Matrix& x);
bool is_hermitian(const Matrix& x, double tol = 1e-9);
bool is_unitary(const Matrix& x, double tol = 1e-9);
bool is_density(const Matrix& x, double tol = 1e-9);

/// Hilbert-Schmidt inner product tr(x* y).
Complex hs_inner(const Matrix& x, const Matrix& y);

/// Partial trace over the second factor (keep == 0) or the first (keep == 1)
/// of an operator on H_a (x) H_b with dim_a * dim_b = X.rows().
Matrix partial_trace(const Matrix& x, int dim_a, int dim_b, int keep = 0);

}  // namespace decoq
