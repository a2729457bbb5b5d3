#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "util.hpp"

using namespace decoq;
using testutil::random_density;
using testutil::random_hermitian;

namespace {

DilationSpec qubit_bath(double g, double beta) {
    DilationSpec spec;
    spec.dim_h = 2;
    spec.dim_bath = 2;
    spec.bath_hamiltonian = pauli(3);
    spec.couplings.push_back({pauli(1), g * pauli(1)});
    spec.couplings.push_back({pauli(2), g * pauli(2)});
    spec.beta = beta;
    return spec;
}

}  // namespace

TEST_CASE("thermal state limits") {
    DilationSpec spec = qubit_bath(0.1, 0.0);
    CHECK((thermal_state(spec) - 0.5 * Matrix::Identity(2, 2)).norm() < 1e-12);  // beta = 0
    spec.beta = std::numeric_limits<double>::infinity();
    // ground space of sigma_3 is |1>
    CHECK((thermal_state(spec) - matrix_unit(2, 1, 1)).norm() < 1e-12);
    spec.beta = 1.0;
    Matrix rho = thermal_state(spec);
    CHECK(is_density(rho));
    const double z = std::exp(-1.0) + std::exp(1.0);
    CHECK(rho(0, 0).real() == doctest::Approx(std::exp(-1.0) / z));
    CHECK(rho(1, 1).real() == doctest::Approx(std::exp(1.0) / z));
}

TEST_CASE("validation rejects bad dilations") {
    DilationSpec spec = qubit_bath(0.1, 1.0);
    validate(spec);
    spec.beta = -1.0;
    CHECK_THROWS_AS(validate(spec), Error);
    spec = qubit_bath(0.1, 1.0);
    spec.couplings[0].first = Matrix(Complex(0, 1) * pauli(1));  // not hermitian
    CHECK_THROWS_AS(validate(spec), Error);
    spec = qubit_bath(0.1, 1.0);
    spec.dim_bath = 3;  // dimension mismatch with the bath hamiltonian
    CHECK_THROWS_AS(validate(spec), Error);
}

TEST_CASE("dilated generator is the commutator with the dilated hamiltonian") {
    DilationSpec spec = qubit_bath(0.3, 1.0);
    Matrix h = dilated_hamiltonian(spec);
    Matrix manual = kron(Matrix::Identity(2, 2), pauli(3)) +
                    kron(pauli(1), Matrix(0.3 * pauli(1))) + kron(pauli(2), Matrix(0.3 * pauli(2)));
    CHECK((h - manual).norm() < 1e-13);
    SuperOp lp = build_dilated_generator(spec);
    std::mt19937_64 rng(60);
    Matrix x = testutil::random_matrix(rng, 4);
    CHECK((lp.apply(x) - Complex(0, 1) * (h * x - x * h)).norm() < 1e-12);
    CHECK(classify_unitarity(lp) == UnitarityClass::purely_unitary);
}

TEST_CASE("lifted pulses act on the system factor only") {
    DecouplingSet set = pauli_set(1);
    DecouplingSet lifted = lift_set(set, 2);
    CHECK(lifted.dim_h == 4);
    for (int j = 0; j < 4; ++j)
        CHECK((lifted.unitaries[j] - kron(set.unitaries[j], Matrix::Identity(2, 2))).norm() == 0.0);
    // the lifted set averages the system factor but not the bath factor,
    // so it is not a decoupling set of the dilated space
    CHECK_FALSE(validate(lifted).ok);
}

TEST_CASE("reduced expectation at t = 0 is the identity channel") {
    DilationSpec spec = qubit_bath(0.2, 2.0);
    std::mt19937_64 rng(61);
    Matrix rho0 = random_density(rng, 2);
    CHECK((reduced_expected_state(spec, pauli_set(1), 1e-3, rho0, 0.0) - rho0).norm() < 1e-12);
    Matrix rho_t = reduced_expected_state(spec, pauli_set(1), 1e-3, rho0, 0.5);
    CHECK(std::abs(rho_t.trace() - 1.0) < 1e-10);
}

TEST_CASE("extrinsic ensemble: reduced maps, determinism, tiny infidelity") {
    DilationSpec spec = qubit_bath(0.05, std::numeric_limits<double>::infinity());
    DecouplingSet set = pauli_set(1);
    WalkConfig cfg;
    cfg.tau = 1e-2;
    cfg.t_grid = {0.1, 0.3};
    cfg.paths = 8;
    cfg.master_seed = 9;
    set_max_threads(1);
    auto a = simulate_extrinsic_ensemble(spec, set, cfg);
    set_max_threads(3);
    auto b = simulate_extrinsic_ensemble(spec, set, cfg);
    set_max_threads(0);
    for (std::size_t p = 0; p < a.size(); ++p) {
        CHECK(a[p].pulse_indices == b[p].pulse_indices);
        for (std::size_t i = 0; i < a[p].maps.size(); ++i) {
            CHECK((a[p].maps[i].matrix() - b[p].maps[i].matrix()).norm() == 0.0);
            CHECK(a[p].maps[i].dim_h() == 2);
        }
    }
    // weak coupling: every reduced path stays near the identity channel
    for (const auto& p : a)
        for (const auto& m : p.maps) CHECK(path_fidelity(m) > 0.99);
    // reduced maps preserve densities
    std::mt19937_64 rng(62);
    Matrix rho0 = random_density(rng, 2);
    for (const auto& rho : apply_to_state(a[0], rho0)) CHECK(is_density(rho, 1e-8));
    CHECK_THROWS_AS(simulate_extrinsic_ensemble(spec, set, cfg, 4), BudgetError);
}

TEST_CASE("dilated limit generator matches the generic builder") {
    DilationSpec spec = qubit_bath(0.2, 1.0);
    DecouplingSet set = pauli_set(1);
    SuperOp l_hat = dilated_limit_generator(spec, set, 1e-3);
    SuperOp lp = build_dilated_generator(spec);
    DecouplingSet lifted = lift_set(set, 2);
    SuperOp lbar_p = averaged_generator(lp, lifted);
    Matrix manual = lbar_p.matrix();
    for (const auto& v : lifted.unitaries) {
        Matrix ad = Ad_of(v).matrix();
        Matrix diff = lp.matrix() - lbar_p.matrix();
        manual += (1e-3 / 4.0) * ad * diff * diff * ad.adjoint();
    }
    CHECK((l_hat.matrix() - manual).norm() < 1e-10);
}
