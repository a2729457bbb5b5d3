#pragma once

#include <random>

#include "decoq/config.hpp"

namespace testutil {

using decoq::Complex;
using decoq::Matrix;
using decoq::Vector;

inline Matrix random_matrix(std::mt19937_64& rng, int d) {
    std::normal_distribution<double> g;
    Matrix m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = Complex(g(rng), g(rng));
    return m;
}

inline Matrix random_hermitian(std::mt19937_64& rng, int d) {
    Matrix m = random_matrix(rng, d);
    return (m + m.adjoint()) / 2.0;
}

inline Matrix random_unitary(std::mt19937_64& rng, int d) {
    Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, d));
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < d; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
    return q;
}

inline Matrix random_density(std::mt19937_64& rng, int d) {
    Matrix m = random_matrix(rng, d);
    Matrix rho = m * m.adjoint();
    return rho / rho.trace();
}

inline decoq::LindbladSpec random_gkls(std::mt19937_64& rng, int d, int n_jumps) {
    decoq::LindbladSpec spec;
    spec.form = decoq::LindbladSpec::Form::gkls;
    spec.dim = d;
    spec.hamiltonian = random_hermitian(rng, d);
    std::uniform_real_distribution<double> u(0.2, 2.0);
    for (int i = 0; i < n_jumps; ++i)
        spec.jumps.push_back({random_matrix(rng, d), u(rng)});
    return spec;
}

}  // namespace testutil
