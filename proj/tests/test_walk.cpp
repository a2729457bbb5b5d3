#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "decoq/rng.hpp"
#include "util.hpp"

using namespace decoq;
using testutil::random_density;
using testutil::random_gkls;

namespace {

WalkConfig small_cfg() {
    WalkConfig cfg;
    cfg.tau = 1e-2;
    cfg.t_grid = {0.05, 0.1};
    cfg.scheme = Scheme::physical;
    cfg.paths = 8;
    cfg.master_seed = 42;
    return cfg;
}

}  // namespace

TEST_CASE("config validation") {
    WalkConfig cfg = small_cfg();
    validate(cfg);
    cfg.tau = 0.0;
    CHECK_THROWS_AS(validate(cfg), Error);
    cfg = small_cfg();
    cfg.t_grid = {0.1, 0.05};
    CHECK_THROWS_AS(validate(cfg), Error);
    cfg = small_cfg();
    cfg.scheme = Scheme::diffusion;
    cfg.n = 10;
    CHECK_THROWS_AS(validate(cfg), Error);
}

TEST_CASE("counter rng: deterministic, uniform, stream-independent") {
    CounterRng a(1, 0), b(1, 0), c(1, 1);
    std::vector<std::uint64_t> sa, sb;
    for (int i = 0; i < 100; ++i) {
        sa.push_back(a.next_u64());
        sb.push_back(b.next_u64());
    }
    CHECK(sa == sb);
    bool differs = false;
    for (int i = 0; i < 100; ++i) differs |= (c.next_u64() != sa[i]);
    CHECK(differs);
    std::vector<long> counts(4, 0);
    CounterRng d(7, 3);
    for (int i = 0; i < 40000; ++i) ++counts[d.uniform_index(4)];
    for (long k : counts) CHECK(std::abs(k - 10000) < 500);
}

TEST_CASE("physical step is the conjugated exponential") {
    std::mt19937_64 rng(40);
    SuperOp l = compile(random_gkls(rng, 2, 1));
    DecouplingSet set = pauli_set(1);
    for (int j = 0; j < 4; ++j) {
        Matrix ad = Ad_of(set.unitaries[j]).matrix();
        Matrix ref = ad * expm(l, 1e-2).matrix() * ad.adjoint();
        CHECK((physical_step(l, set, j, 1e-2).matrix() - ref).norm() < 1e-12);
        // equivalently exp(tau Ad_j L Ad_j*)
        SuperOp lj(2, ad * l.matrix() * ad.adjoint());
        CHECK((physical_step(l, set, j, 1e-2).matrix() - expm(lj, 1e-2).matrix()).norm() < 1e-10);
    }
    CHECK_THROWS_AS(physical_step(l, set, 4, 1e-2), Error);
}

TEST_CASE("pulse-sequence factorizations agree (correction pulses vs conjugated steps)") {
    // product with explicit correction pulses v_{j_{i}}^* v_{j_{i-1}} between
    // bare evolutions, closed by v_{j_0}^* v_{j_n}, against the product of
    // conjugated exponentials; j_0 = 0.
    std::mt19937_64 rng(41);
    for (int n_qubits = 1; n_qubits <= 2; ++n_qubits) {
        DecouplingSet set = pauli_set(n_qubits);
        SuperOp l = compile(random_gkls(rng, set.dim_h, 2));
        const double tau = 5e-3;
        SuperOp alpha_tau = expm(l, tau);
        std::uniform_int_distribution<int> pick(0, set.size() - 1);
        for (int trial = 0; trial < 3; ++trial) {
            std::vector<int> seq{0};
            for (int i = 1; i < 50; ++i) seq.push_back(pick(rng));
            // bare evolution first, correction pulse v_{j_i}^* v_{j_{i-1}} at
            // each step boundary, frame closed by v_{j_0}^* v_{j_n} at the end
            SuperOp eq2 = alpha_tau;
            for (std::size_t i = 1; i < seq.size(); ++i) {
                Matrix corr = set.unitaries[seq[i]].adjoint() * set.unitaries[seq[i - 1]];
                eq2 = alpha_tau * Ad_of(corr) * eq2;
            }
            eq2 = Ad_of(Matrix(set.unitaries[seq[0]].adjoint() * set.unitaries[seq.back()])) * eq2;
            SuperOp eq3 = SuperOp::identity(set.dim_h);
            for (int j : seq) eq3 = physical_step(l, set, j, tau) * eq3;
            CHECK((eq2.matrix() - eq3.matrix()).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}

TEST_CASE("ensemble is deterministic for any thread count") {
    std::mt19937_64 rng(42);
    SuperOp l = compile(random_gkls(rng, 2, 1));
    DecouplingSet set = pauli_set(1);
    WalkConfig cfg = small_cfg();
    set_max_threads(1);
    auto serial = simulate_ensemble(l, set, cfg);
    set_max_threads(4);
    auto parallel = simulate_ensemble(l, set, cfg);
    set_max_threads(0);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t p = 0; p < serial.size(); ++p) {
        CHECK(serial[p].pulse_indices == parallel[p].pulse_indices);
        for (std::size_t i = 0; i < serial[p].maps.size(); ++i)
            CHECK((serial[p].maps[i].matrix() - parallel[p].maps[i].matrix()).norm() == 0.0);
    }
}

TEST_CASE("physical walk with L = 0 yields identity trajectories") {
    DecouplingSet set = pauli_set(1);
    auto ens = simulate_ensemble(SuperOp::zero(2), set, small_cfg());
    for (const auto& p : ens)
        for (const auto& m : p.maps)
            CHECK((m.matrix() - Matrix::Identity(4, 4)).norm() < 1e-12);
}

TEST_CASE("grid times between pulses use the bare remainder") {
    std::mt19937_64 rng(43);
    SuperOp l = compile(random_gkls(rng, 2, 1));
    DecouplingSet set = pauli_set(1);
    WalkConfig cfg = small_cfg();
    cfg.t_grid = {0.015};  // one whole step of tau = 0.01 plus remainder 0.005
    cfg.paths = 3;
    auto ens = simulate_ensemble(l, set, cfg);
    for (const auto& p : ens) {
        REQUIRE(p.pulse_indices.size() == 1);
        Matrix expect = expm(l, 0.005).matrix() *
                        physical_step(l, set, p.pulse_indices[0], cfg.tau).matrix();
        CHECK((p.maps[0].matrix() - expect).norm() < 1e-12);
    }
}

TEST_CASE("drift steps with a fixed pulse compose to the conjugated semigroup") {
    std::mt19937_64 rng(44);
    SuperOp l = compile(random_gkls(rng, 2, 1));
    DecouplingSet set = pauli_set(1);
    LimitGenerators gens = build_limit_generators(l, set, 1e-3);
    const long n = 1000;
    for (int j = 0; j < 4; ++j) {
        SuperOp step = scheme_step(gens.lbar, gens.l_list[j], 1e-3, n, Scheme::drift);
        SuperOp acc = SuperOp::identity(2);
        const long m = 250;
        for (long k = 0; k < m; ++k) acc = step * acc;
        // Lbar + L_j = Ad(v_j) L Ad(v_j*), so m steps give exp((m/n) Ad_j L Ad_j*)
        Matrix ad = Ad_of(set.unitaries[j]).matrix();
        SuperOp conj(2, ad * l.matrix() * ad.adjoint());
        CHECK((acc.matrix() - expm(conj, double(m) / double(n)).matrix()).norm() < 1e-10);
    }
}

TEST_CASE("budget errors") {
    SuperOp l = SuperOp::zero(2);
    DecouplingSet set = pauli_set(1);
    WalkConfig cfg = small_cfg();
    CHECK_THROWS_AS(simulate_ensemble(l, set, cfg, 10), BudgetError);
}

TEST_CASE("apply_to_state preserves densities along CPT paths") {
    std::mt19937_64 rng(45);
    SuperOp l = compile(random_gkls(rng, 2, 1));
    DecouplingSet set = pauli_set(1);
    auto ens = simulate_ensemble(l, set, small_cfg());
    Matrix rho0 = random_density(rng, 2);
    auto states = apply_to_state(ens[0], rho0);
    for (const auto& rho : states) {
        CHECK(std::abs(rho.trace() - 1.0) < 1e-10);
        CHECK(is_density(rho, 1e-8));
    }
    CHECK_THROWS_AS(apply_to_state(ens[0], Matrix(2.0 * rho0)), Error);
}

TEST_CASE("time-dependent physical ensemble matches the constant-generator one") {
    std::mt19937_64 rng(46);
    LindbladSpec g = random_gkls(rng, 2, 1);
    TimeDependentSpec spec;
    spec.times = {0.0, 1.0};
    spec.specs = {g, g};
    DecouplingSet set = pauli_set(1);
    WalkConfig cfg = small_cfg();
    auto td = simulate_ensemble(spec, set, cfg);
    auto cs = simulate_ensemble(compile(g), set, cfg);
    for (std::size_t p = 0; p < td.size(); ++p) {
        CHECK(td[p].pulse_indices == cs[p].pulse_indices);
        for (std::size_t i = 0; i < td[p].maps.size(); ++i)
            CHECK((td[p].maps[i].matrix() - cs[p].maps[i].matrix()).norm() < 1e-6);
    }
}
