#include "decoq/walk.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "decoq/rng.hpp"

namespace decoq {

namespace {

std::atomic<long> g_max_threads{0};

// Whole pulse intervals completed at grid time t (tolerant of t = k*tau).
long whole_steps(double t, double tau) { return static_cast<long>(std::floor(t / tau + 1e-9)); }

// Bare first-order product integral of L(t) over [a, b], left-endpoint
// sampling, sub-stepped so that ||L|| * dt <= 1e-3.
SuperOp product_integral(const TimeDependentSpec& spec, double a, double b) {
    if (b <= a) return SuperOp::identity(compile(spec.specs.front()).dim_h());
    double norm_max = 1.0;
    for (const auto& s : spec.specs) norm_max = std::max(norm_max, sup_norm(compile(s)));
    const long sub = std::max(1l, static_cast<long>(std::ceil(norm_max * (b - a) / 1e-3)));
    const double dt = (b - a) / static_cast<double>(sub);
    SuperOp p = SuperOp::identity(compile(spec.specs.front()).dim_h());
    for (long i = 0; i < sub; ++i) p = expm(sample_time_dependent(spec, a + i * dt), dt) * p;
    return p;
}

struct EnsemblePlan {
    std::vector<long> steps_at;       // whole increments completed at each grid time
    std::vector<SuperOp> increments;  // one per pulse index j (constant-generator case)
    std::vector<SuperOp> remainders;  // per grid time; physical scheme only
};

void check_budget(const WalkConfig& cfg, int dim, std::size_t budget) {
    const std::size_t entries = static_cast<std::size_t>(cfg.paths) * cfg.t_grid.size() *
                                static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim);
    if (entries > budget)
        throw BudgetError("simulate_ensemble: ensemble storage (" + std::to_string(entries) +
                          " map entries) exceeds the budget of " + std::to_string(budget));
}

template <typename StepFn, typename RemainderFn>
std::vector<WalkPath> run_ensemble(const WalkConfig& cfg, int dim_h, const EnsemblePlan& plan,
                                   StepFn step_of, RemainderFn finish) {
    std::vector<WalkPath> out(cfg.paths);
    const long total_steps = plan.steps_at.empty() ? 0 : plan.steps_at.back();
    auto worker = [&](long begin, long end) {
        for (long p = begin; p < end; ++p) {
            WalkPath& path = out[p];
            path.path_id = static_cast<std::uint64_t>(p);
            path.pulse_indices.reserve(total_steps);
            path.maps.reserve(cfg.t_grid.size());
            CounterRng rng(cfg.master_seed, path.path_id);
            SuperOp w = SuperOp::identity(dim_h);
            long k = 0;
            for (std::size_t i = 0; i < cfg.t_grid.size(); ++i) {
                while (k < plan.steps_at[i]) {
                    const std::uint16_t j = static_cast<std::uint16_t>(
                        rng.uniform_index(static_cast<std::uint32_t>(step_of.count)));
                    path.pulse_indices.push_back(j);
                    w = step_of(j, k) * w;
                    ++k;
                }
                path.maps.push_back(finish(w, i));
            }
        }
    };
    const long nthreads = effective_threads(cfg.paths);
    if (nthreads == 1) {
        worker(0, cfg.paths);
    } else {
        std::vector<std::thread> pool;
        for (long tix = 0; tix < nthreads; ++tix) {
            const long lo = cfg.paths * tix / nthreads;
            const long hi = cfg.paths * (tix + 1) / nthreads;
            pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

}  // namespace

void set_max_threads(long n) { g_max_threads.store(n < 0 ? 0 : n); }

long effective_threads(long paths) {
    long cap = g_max_threads.load();
    if (cap == 0) cap = static_cast<long>(std::thread::hardware_concurrency());
    return std::max(1l, std::min(paths, cap));
}

void validate(const WalkConfig& cfg) {
    if (!(cfg.tau > 0.0)) throw Error("WalkConfig: tau must be > 0");
    if (cfg.t_grid.empty()) throw Error("WalkConfig: t_grid must be nonempty");
    for (std::size_t i = 0; i < cfg.t_grid.size(); ++i) {
        if (cfg.t_grid[i] < 0.0) throw Error("WalkConfig: t_grid entries must be nonnegative");
        if (i > 0 && cfg.t_grid[i] <= cfg.t_grid[i - 1])
            throw Error("WalkConfig: t_grid must be strictly increasing");
    }
    if (cfg.paths < 1) throw Error("WalkConfig: paths must be >= 1");
    if (cfg.scheme != Scheme::physical && cfg.n < 100)
        throw Error("WalkConfig: diffusion/drift require n >= 100");
}

SuperOp physical_step(const SuperOp& l, const DecouplingSet& set, int j, double tau) {
    if (j < 0 || j >= set.size()) throw Error("physical_step: pulse index out of range");
    Matrix adj = Ad_of(set.unitaries[j]).matrix();
    return SuperOp(l.dim_h(), adj * expm(l, tau).matrix() * adj.adjoint());
}

SuperOp physical_step(const TimeDependentSpec& spec, const DecouplingSet& set, int j, double tau,
                      double t_start) {
    if (j < 0 || j >= set.size()) throw Error("physical_step: pulse index out of range");
    SuperOp p = product_integral(spec, t_start, t_start + tau);
    Matrix adj = Ad_of(set.unitaries[j]).matrix();
    return SuperOp(p.dim_h(), adj * p.matrix() * adj.adjoint());
}

SuperOp scheme_step(const SuperOp& lbar, const SuperOp& lj, double tau, long n, Scheme scheme) {
    if (n < 1) throw Error("scheme_step: n must be >= 1");
    const double inv_n = 1.0 / static_cast<double>(n);
    switch (scheme) {
        case Scheme::diffusion:
            return expm(SuperOp(lbar.dim_h(), std::sqrt(2.0 * tau * inv_n) * lj.matrix() +
                                                  inv_n * lbar.matrix()),
                        1.0);
        case Scheme::drift:
            return expm(lbar + lj, inv_n);
        case Scheme::physical:
            break;
    }
    throw Error("scheme_step: scheme must be diffusion or drift");
}

std::vector<WalkPath> simulate_ensemble(const SuperOp& l, const DecouplingSet& set,
                                        const WalkConfig& cfg, std::size_t budget_entries) {
    validate(cfg);
    if (l.dim_h() != set.dim_h) throw Error("simulate_ensemble: dimension mismatch");
    check_budget(cfg, l.dim(), budget_entries);

    EnsemblePlan plan;
    plan.steps_at.reserve(cfg.t_grid.size());
    if (cfg.scheme == Scheme::physical) {
        SuperOp alpha_tau = expm(l, cfg.tau);
        for (int j = 0; j < set.size(); ++j) {
            Matrix adj = Ad_of(set.unitaries[j]).matrix();
            plan.increments.emplace_back(l.dim_h(), adj * alpha_tau.matrix() * adj.adjoint());
        }
        for (double t : cfg.t_grid) {
            const long k = whole_steps(t, cfg.tau);
            plan.steps_at.push_back(k);
            const double r = t - k * cfg.tau;
            plan.remainders.push_back(r > 1e-12 ? expm(l, r) : SuperOp::identity(l.dim_h()));
        }
    } else {
        LimitGenerators gens = build_limit_generators(l, set, cfg.tau);
        for (int j = 0; j < set.size(); ++j)
            plan.increments.push_back(
                scheme_step(gens.lbar, gens.l_list[j], cfg.tau, cfg.n, cfg.scheme));
        for (double t : cfg.t_grid)
            plan.steps_at.push_back(std::lround(t * static_cast<double>(cfg.n)));
    }

    struct ConstStep {
        const EnsemblePlan& plan;
        int count;
        const SuperOp& operator()(int j, long) const { return plan.increments[j]; }
    } step_of{plan, set.size()};
    const bool physical = cfg.scheme == Scheme::physical;
    auto finish = [&](const SuperOp& w, std::size_t i) {
        return physical ? plan.remainders[i] * w : w;
    };
    return run_ensemble(cfg, l.dim_h(), plan, step_of, finish);
}

std::vector<WalkPath> simulate_ensemble(const TimeDependentSpec& spec, const DecouplingSet& set,
                                        const WalkConfig& cfg, std::size_t budget_entries) {
    validate(cfg);
    if (cfg.scheme != Scheme::physical)
        throw Error("simulate_ensemble: time-dependent generators support the physical scheme only");
    SuperOp l0 = sample_time_dependent(spec, spec.times.front());
    if (l0.dim_h() != set.dim_h) throw Error("simulate_ensemble: dimension mismatch");
    check_budget(cfg, l0.dim(), budget_entries);

    EnsemblePlan plan;
    long k_max = 0;
    for (double t : cfg.t_grid) {
        const long k = whole_steps(t, cfg.tau);
        plan.steps_at.push_back(k);
        k_max = std::max(k_max, k);
        const double r = t - k * cfg.tau;
        plan.remainders.push_back(r > 1e-12 ? product_integral(spec, k * cfg.tau, t)
                                            : SuperOp::identity(l0.dim_h()));
    }
    // The bare interval integrals are pulse-independent; conjugation by Ad(v_j)
    // is applied per drawn index.
    std::vector<SuperOp> bare;
    bare.reserve(k_max);
    for (long k = 0; k < k_max; ++k)
        bare.push_back(product_integral(spec, k * cfg.tau, (k + 1) * cfg.tau));
    std::vector<Matrix> ad;
    for (const auto& v : set.unitaries) ad.push_back(Ad_of(v).matrix());

    struct TdStep {
        const std::vector<SuperOp>& bare;
        const std::vector<Matrix>& ad;
        int count;
        int dim_h;
        SuperOp operator()(int j, long k) const {
            return SuperOp(dim_h, ad[j] * bare[k].matrix() * ad[j].adjoint());
        }
    } step_of{bare, ad, set.size(), l0.dim_h()};
    auto finish = [&](const SuperOp& w, std::size_t i) { return plan.remainders[i] * w; };
    return run_ensemble(cfg, l0.dim_h(), plan, step_of, finish);
}

std::vector<Matrix> apply_to_state(const WalkPath& path, const Matrix& rho0) {
    if (!is_density(rho0)) throw Error("apply_to_state: rho0 is not a density matrix");
    std::vector<Matrix> out;
    out.reserve(path.maps.size());
    for (const auto& m : path.maps) out.push_back(m.apply(rho0));
    return out;
}

}  // namespace decoq
