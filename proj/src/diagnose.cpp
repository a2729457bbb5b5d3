#include "decoq/diagnose.hpp"

#include <algorithm>
#include <cmath>

namespace decoq {

namespace {

// integral_0^t of the squared norm samples, trapezoidal; a single sample
// means the constant case with closed form t * norm^2.
double integral_sq(const ExtrinsicInfo& info, double t) {
    if (info.times.size() < 2) return t * info.lprime0_norms.front() * info.lprime0_norms.front();
    double acc = 0.0;
    for (std::size_t i = 1; i < info.times.size(); ++i) {
        const double a = info.times[i - 1], b = info.times[i];
        if (a >= t) break;
        const double fa = info.lprime0_norms[i - 1] * info.lprime0_norms[i - 1];
        const double fb = info.lprime0_norms[i] * info.lprime0_norms[i];
        if (b <= t) {
            acc += 0.5 * (fa + fb) * (b - a);
        } else {
            const double w = (t - a) / (b - a);
            const double ft = fa + w * (fb - fa);
            acc += 0.5 * (fa + ft) * (t - a);
        }
    }
    if (t > info.times.back()) {
        const double f = info.lprime0_norms.back() * info.lprime0_norms.back();
        acc += f * (t - info.times.back());
    }
    return acc;
}

struct WlsFit {
    double intercept, intercept_se, slope, residual;
};

WlsFit weighted_fit(const std::vector<double>& x, const std::vector<double>& y,
                    const std::vector<double>& sigma) {
    double s = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
    std::vector<double> w(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double si = std::max(sigma[i], 1e-12);
        w[i] = 1.0 / (si * si);
        s += w[i];
        sx += w[i] * x[i];
        sxx += w[i] * x[i] * x[i];
        sy += w[i] * y[i];
        sxy += w[i] * x[i] * y[i];
    }
    const double delta = s * sxx - sx * sx;
    WlsFit fit{};
    fit.intercept = (sxx * sy - sx * sxy) / delta;
    fit.slope = (s * sxy - sx * sy) / delta;
    fit.intercept_se = std::sqrt(sxx / delta);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - fit.intercept - fit.slope * x[i];
        fit.residual += w[i] * r * r;
    }
    return fit;
}

}  // namespace

ExtrinsicInfo extrinsic_info(const DilationSpec& spec, const DecouplingSet& set, NormKind kind) {
    SuperOp lp = build_dilated_generator(spec);
    SuperOp lbar_p = averaged_generator(lp, lift_set(set, spec.dim_bath));
    ExtrinsicInfo info;
    info.lprime_norm = sup_norm(lp, kind);
    info.times = {0.0};
    info.lprime0_norms = {sup_norm(lp - lbar_p, kind)};
    return info;
}

BoundReport bounds(const SuperOp& l, const LimitGenerators& gens,
                   const std::optional<ExtrinsicInfo>& dilated, double tau,
                   std::vector<double> t_grid, NormKind kind) {
    if (!(tau > 0.0)) throw Error("bounds: tau must be > 0");
    BoundReport rep;
    rep.tau = tau;
    rep.t_grid = std::move(t_grid);
    rep.norm_kind = kind;
    rep.dim_a = l.dim();
    rep.norm_l = sup_norm(l, kind);
    rep.norm_lbar = sup_norm(gens.lbar, kind);
    rep.norm_l_minus_lbar = sup_norm(gens.l_list.empty() ? l - gens.lbar : gens.l_list[0], kind);
    rep.gamma = std::max(rep.norm_l, rep.norm_lbar);
    if (dilated) rep.gamma = std::max(rep.gamma, dilated->lprime_norm);
    rep.has_extrinsic = dilated.has_value();

    const double d = static_cast<double>(rep.dim_a);
    const double jj = static_cast<double>(gens.set_size);
    const bool dephasing = classify_unitarity(l) == UnitarityClass::purely_dephasing;
    for (double t : rep.t_grid) {
        if (dilated) {
            const double q = tau * integral_sq(*dilated, t);
            rep.bound_extrinsic.push_back(1.0 - (2.0 * d / jj) * q);
            rep.bound_extrinsic_2d.push_back(1.0 - 2.0 * d * q);
        }
        rep.bound_intrinsic.push_back(1.0 -
                                      (2.0 / (d * jj)) * tau * t * rep.norm_l_minus_lbar *
                                          rep.norm_l_minus_lbar -
                                      (1.0 / d) * t * t * rep.norm_lbar * rep.norm_lbar);
        if (dephasing) {
            const double g = 1.0 - std::exp(-t * rep.norm_l / jj);
            rep.bound_dephasing.push_back(1.0 - g * g / d);
        }
        rep.bound_drift_intrinsic.push_back(1.0 - (1.0 / d) * t * t * rep.norm_lbar *
                                                      rep.norm_lbar);
        rep.regime_flags.push_back(10.0 * tau <= t && 10.0 * t * rep.gamma <= 1.0);
    }
    return rep;
}

Verdict classify(std::vector<FidelityCurve> curves, const BoundReport& report) {
    Verdict v;
    std::sort(curves.begin(), curves.end(),
              [](const FidelityCurve& a, const FidelityCurve& b) { return a.tau < b.tau; });
    for (const auto& c : curves)
        if (c.t_grid != report.t_grid) throw Error("classify: curve t_grid does not match report");
    if (curves.size() < 3) {
        v.notes = "fewer than 3 tau values";
        return v;
    }
    if (curves.back().tau < 10.0 * curves.front().tau * (1.0 - 1e-9)) {
        v.notes = "tau values span less than one decade";
        return v;
    }

    const double d = static_cast<double>(report.dim_a);
    long n_ext = 0, n_int = 0, n_inc = 0;
    for (std::size_t i = 0; i < report.t_grid.size(); ++i) {
        if (!report.regime_flags[i]) continue;
        std::vector<double> x, y, sigma;
        for (const auto& c : curves) {
            x.push_back(c.tau);
            y.push_back(1.0 - c.mc_mean[i]);
            sigma.push_back(c.mc_stderr[i]);
        }
        WlsFit fit = weighted_fit(x, y, sigma);
        TauFit ev{report.t_grid[i], fit.intercept, fit.intercept_se, fit.slope, fit.residual, ""};
        const double t = report.t_grid[i];
        const double ref = (1.0 / d) * t * t * report.norm_lbar * report.norm_lbar;
        if (fit.intercept <= 3.0 * fit.intercept_se + 1e-12) {
            ev.vote = "extrinsic";
            ++n_ext;
        } else if (fit.intercept >= ref / 3.0 && fit.intercept <= 3.0 * ref) {
            ev.vote = "intrinsic_or_mixed";
            ++n_int;
        } else {
            ev.vote = "inconclusive";
            ++n_inc;
        }
        v.evidence.push_back(ev);
    }
    if (v.evidence.empty()) {
        v.notes = "no t in the tau << t << 1/gamma window";
        return v;
    }
    if (n_ext > n_int && n_ext > n_inc) {
        v.classification = Verdict::Class::extrinsic;
    } else if (n_int > n_ext && n_int > n_inc) {
        v.classification = Verdict::Class::intrinsic_or_mixed;
    } else {
        v.classification = Verdict::Class::inconclusive;
        v.notes = "no majority among regime-window fits";
    }
    return v;
}

}  // namespace decoq
