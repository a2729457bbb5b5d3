#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "util.hpp"

using namespace decoq;
using testutil::random_gkls;
using testutil::random_hermitian;
using testutil::random_unitary;

TEST_CASE("pauli sets validate and average to the trace") {
    for (int n = 1; n <= 2; ++n) {
        DecouplingSet set = pauli_set(n);
        CHECK(set.size() == (n == 1 ? 4 : 16));
        CHECK(validate(set).ok);
        std::mt19937_64 rng(20 + n);
        Matrix x = testutil::random_matrix(rng, set.dim_h);
        Matrix avg = Matrix::Zero(set.dim_h, set.dim_h);
        for (const auto& v : set.unitaries) avg += v * x * v.adjoint();
        avg /= set.size();
        Matrix expected =
            x.trace() / static_cast<double>(set.dim_h) * Matrix::Identity(set.dim_h, set.dim_h);
        CHECK((avg - expected).norm() < 1e-10);
    }
}

TEST_CASE("validate rejects broken sets") {
    DecouplingSet set = pauli_set(1);
    std::swap(set.unitaries[0], set.unitaries[1]);  // v_0 != identity
    CHECK_FALSE(validate(set).ok);
    CHECK(validate(set).failing_check == "v0_identity");

    set = pauli_set(1);
    set.unitaries[2] *= 2.0;  // not unitary
    CHECK_FALSE(validate(set).ok);

    set = pauli_set(1);
    set.unitaries.pop_back();  // averaging property broken
    CHECK_FALSE(validate(set).ok);
}

TEST_CASE("averaged generator and fluctuations") {
    std::mt19937_64 rng(22);
    DecouplingSet set = pauli_set(1);
    SuperOp l = compile(random_gkls(rng, 2, 2));
    SuperOp lbar = averaged_generator(l, set);
    // Lbar is Ad-invariant under the whole set
    for (const auto& v : set.unitaries) {
        SuperOp ad = Ad_of(v);
        CHECK((ad.matrix() * lbar.matrix() * ad.matrix().adjoint() - lbar.matrix()).norm() < 1e-9);
    }
    // sum_j L_j = 0
    auto fluct = fluctuation_generators(l, set);
    REQUIRE(fluct.size() == 4);
    Matrix sum = Matrix::Zero(4, 4);
    for (const auto& lj : fluct) sum += lj.matrix();
    CHECK(sum.norm() < 1e-9);
    // L_0 = L - Lbar
    CHECK((fluct[0].matrix() - (l.matrix() - lbar.matrix())).norm() < 1e-10);
}

TEST_CASE("amplitude damping averaged closed form") {
    for (double gamma : {0.5, 1.0, 2.0}) {
        SuperOp lbar = averaged_generator(amplitude_damping(gamma), pauli_set(1));
        SuperOp ref = -2.0 * gamma * SuperOp::identity(2) +
                      gamma * (sandwich(pauli(1), pauli(1)) + sandwich(pauli(2), pauli(2)));
        CHECK((lbar.matrix() - ref.matrix()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("decoupling condition holds iff purely unitary") {
    std::mt19937_64 rng(23);
    DecouplingSet set = pauli_set(1);
    for (int trial = 0; trial < 10; ++trial) {
        SuperOp unitary = Complex(0, 1) * ad_of(random_hermitian(rng, 2));
        CHECK(decoupling_condition_holds(unitary, set));
        SuperOp gkls = compile(random_gkls(rng, 2, 1 + trial % 2));
        CHECK_FALSE(decoupling_condition_holds(gkls, set));
    }
}
