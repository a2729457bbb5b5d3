#include "decoq/dilation.hpp"

#include <cmath>
#include <thread>

#include "decoq/rng.hpp"

namespace decoq {

namespace {

const Complex kI(0.0, 1.0);

// vec-basis matrix of x -> x (x) rho_theta, columns indexed by matrix units.
Matrix embed_matrix(int d, const Matrix& rho_theta) {
    const int dim_total = d * static_cast<int>(rho_theta.rows());
    Matrix emb(dim_total * dim_total, d * d);
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
            emb.col(l * d + k) = vec(kron(matrix_unit(d, k, l), rho_theta));
    return emb;
}

// vec-basis matrix of the partial trace over the bath factor.
Matrix partial_trace_matrix(int d, int d_bath) {
    const int dim_total = d * d_bath;
    Matrix pt(d * d, dim_total * dim_total);
    for (int a = 0; a < dim_total; ++a)
        for (int b = 0; b < dim_total; ++b)
            pt.col(b * dim_total + a) = vec(partial_trace(matrix_unit(dim_total, a, b), d, d_bath));
    return pt;
}

}  // namespace

void validate(const DilationSpec& spec) {
    if (spec.dim_h < 2) throw Error("DilationSpec: dim_h must be >= 2");
    if (spec.dim_bath < 1 || spec.dim_bath > kMaxBathDim)
        throw Error("DilationSpec: dim_bath must lie in [1, " + std::to_string(kMaxBathDim) + "]");
    if (spec.dim_h * spec.dim_bath > kMaxDilatedDim)
        throw Error("DilationSpec: dilated dimension exceeds " + std::to_string(kMaxDilatedDim));
    if (spec.bath_hamiltonian.rows() != spec.dim_bath ||
        spec.bath_hamiltonian.cols() != spec.dim_bath)
        throw Error("DilationSpec: bath_hamiltonian dimension mismatch");
    if (!is_hermitian(spec.bath_hamiltonian, 1e-12))
        throw Error("DilationSpec: bath_hamiltonian is not hermitian");
    for (const auto& [h0, h1] : spec.couplings) {
        if (h0.rows() != spec.dim_h || h0.cols() != spec.dim_h)
            throw Error("DilationSpec: coupling system factor dimension mismatch");
        if (h1.rows() != spec.dim_bath || h1.cols() != spec.dim_bath)
            throw Error("DilationSpec: coupling bath factor dimension mismatch");
        if (!is_hermitian(h0, 1e-12) || !is_hermitian(h1, 1e-12))
            throw Error("DilationSpec: coupling factors must be hermitian");
    }
    if (!(spec.beta >= 0.0)) throw Error("DilationSpec: beta must be >= 0");
    Matrix rho = thermal_state(spec);
    if (!is_density(rho, 1e-10)) throw Error("DilationSpec: rho_theta is not a density matrix");
    Matrix comm = spec.bath_hamiltonian * rho - rho * spec.bath_hamiltonian;
    if (comm.norm() > 1e-12 * std::max(1.0, spec.bath_hamiltonian.norm()))
        throw Error("DilationSpec: rho_theta does not commute with the bath hamiltonian");
}

Matrix thermal_state(const DilationSpec& spec) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(spec.bath_hamiltonian);
    const auto& ev = es.eigenvalues();
    const double e_min = ev.minCoeff();
    Eigen::VectorXd weights(ev.size());
    if (std::isinf(spec.beta)) {
        for (int i = 0; i < ev.size(); ++i) weights(i) = (ev(i) - e_min <= 1e-12) ? 1.0 : 0.0;
    } else {
        for (int i = 0; i < ev.size(); ++i) weights(i) = std::exp(-spec.beta * (ev(i) - e_min));
    }
    weights /= weights.sum();
    return es.eigenvectors() * weights.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix dilated_hamiltonian(const DilationSpec& spec) {
    Matrix h = kron(Matrix::Identity(spec.dim_h, spec.dim_h), spec.bath_hamiltonian);
    for (const auto& [h0, h1] : spec.couplings) h += kron(h0, h1);
    return h;
}

SuperOp build_dilated_generator(const DilationSpec& spec) {
    validate(spec);
    return kI * ad_of(dilated_hamiltonian(spec), 1e-10);
}

DecouplingSet lift_set(const DecouplingSet& set, int dim_bath) {
    DecouplingSet lifted;
    lifted.dim_h = set.dim_h * dim_bath;
    Matrix eye = Matrix::Identity(dim_bath, dim_bath);
    for (const auto& v : set.unitaries) lifted.unitaries.push_back(kron(v, eye));
    return lifted;
}

SuperOp dilated_limit_generator(const DilationSpec& spec, const DecouplingSet& set, double tau) {
    if (set.dim_h != spec.dim_h) throw Error("dilated_limit_generator: dimension mismatch");
    SuperOp lp = build_dilated_generator(spec);
    return build_limit_generators(lp, lift_set(set, spec.dim_bath), tau).l_hat;
}

Matrix reduced_expected_state(const DilationSpec& spec, const DecouplingSet& set, double tau,
                              const Matrix& rho0, double t) {
    if (!is_density(rho0)) throw Error("reduced_expected_state: rho0 is not a density matrix");
    SuperOp l_hat = dilated_limit_generator(spec, set, tau);
    Matrix big = expm(l_hat, t).apply(kron(rho0, thermal_state(spec)));
    return partial_trace(big, spec.dim_h, spec.dim_bath);
}

std::vector<WalkPath> simulate_extrinsic_ensemble(const DilationSpec& spec,
                                                  const DecouplingSet& set, const WalkConfig& cfg,
                                                  std::size_t budget_entries) {
    validate(cfg);
    if (cfg.scheme != Scheme::physical)
        throw Error("simulate_extrinsic_ensemble: the dilated walk uses the physical scheme");
    if (set.dim_h != spec.dim_h) throw Error("simulate_extrinsic_ensemble: dimension mismatch");
    const int d = spec.dim_h;
    const std::size_t entries = static_cast<std::size_t>(cfg.paths) * cfg.t_grid.size() *
                                static_cast<std::size_t>(d * d) * static_cast<std::size_t>(d * d);
    if (entries > budget_entries)
        throw BudgetError("simulate_extrinsic_ensemble: ensemble storage (" +
                          std::to_string(entries) + " map entries) exceeds the budget of " +
                          std::to_string(budget_entries));

    SuperOp lp = build_dilated_generator(spec);
    DecouplingSet lifted = lift_set(set, spec.dim_bath);
    SuperOp alpha_tau = expm(lp, cfg.tau);
    std::vector<Matrix> steps;
    for (const auto& v : lifted.unitaries) {
        Matrix adj = Ad_of(v).matrix();
        steps.push_back(adj * alpha_tau.matrix() * adj.adjoint());
    }
    std::vector<long> steps_at;
    std::vector<Matrix> remainders;
    long total_steps = 0;
    for (double t : cfg.t_grid) {
        const long k = static_cast<long>(std::floor(t / cfg.tau + 1e-9));
        steps_at.push_back(k);
        total_steps = std::max(total_steps, k);
        const double r = t - k * cfg.tau;
        remainders.push_back(r > 1e-12 ? expm(lp, r).matrix()
                                       : Matrix(Matrix::Identity(lp.dim(), lp.dim())));
    }
    Matrix emb = embed_matrix(d, thermal_state(spec));
    Matrix pt = partial_trace_matrix(d, spec.dim_bath);

    std::vector<WalkPath> out(cfg.paths);
    auto worker = [&](long begin, long end) {
        for (long p = begin; p < end; ++p) {
            WalkPath& path = out[p];
            path.path_id = static_cast<std::uint64_t>(p);
            path.pulse_indices.reserve(total_steps);
            CounterRng rng(cfg.master_seed, path.path_id);
            Matrix w = Matrix::Identity(lp.dim(), lp.dim());
            long k = 0;
            for (std::size_t i = 0; i < cfg.t_grid.size(); ++i) {
                while (k < steps_at[i]) {
                    const std::uint16_t j = static_cast<std::uint16_t>(
                        rng.uniform_index(static_cast<std::uint32_t>(set.size())));
                    path.pulse_indices.push_back(j);
                    w = steps[j] * w;
                    ++k;
                }
                path.maps.emplace_back(d, pt * (remainders[i] * w) * emb);
            }
        }
    };
    const long nthreads = effective_threads(cfg.paths);
    if (nthreads == 1) {
        worker(0, cfg.paths);
    } else {
        std::vector<std::thread> pool;
        for (long tix = 0; tix < nthreads; ++tix)
            pool.emplace_back(worker, cfg.paths * tix / nthreads, cfg.paths * (tix + 1) / nthreads);
        for (auto& th : pool) th.join();
    }
    return out;
}

}  // namespace decoq
