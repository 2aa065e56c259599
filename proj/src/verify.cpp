#include "ccbond/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ccbond/errors.hpp"

namespace ccb {

namespace {

std::vector<double> geometric_levels(double x_ref, double lo_factor, double hi_factor, int count) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    const double step = std::log(hi_factor / lo_factor) / (count - 1);
    for (int i = 0; i < count; ++i) {
        out.push_back(x_ref * lo_factor * std::exp(step * i));
    }
    return out;
}

BatteryRow make_row(bool firm_side, const StoppingStrategy& alt, std::span<const double> row,
                    std::span<const double> center, std::uint64_t seed) {
    // deficit > 0 means the center beats this deviation on paired paths.
    std::vector<double> diff(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) {
        diff[i] = firm_side ? row[i] - center[i] : center[i] - row[i];
    }
    const EstimatorResult d = summarize(diff, seed, 0);
    const EstimatorResult m = summarize(row, seed, 0);
    BatteryRow out;
    out.firm_side = firm_side;
    out.strategy = alt;
    out.mean = m.mean;
    out.deficit = d.mean;
    out.deficit_se = d.stderr_;
    out.pass = d.mean >= -3.0 * d.stderr_ - 1e-300;
    return out;
}

}  // namespace

DeviationGrids default_deviation_grids(const PricingSolution& sol) {
    const double k_over_gamma = sol.p.K / sol.p.gamma;
    const double firm_ref = sol.firm_strategy.kind == StrategyDescriptor::Kind::Threshold
                                ? sol.firm_strategy.level
                                : k_over_gamma;
    const double holder_ref = sol.holder_strategy.kind == StrategyDescriptor::Kind::Threshold
                                  ? sol.holder_strategy.level
                                  : k_over_gamma;
    DeviationGrids grids;
    for (double level : geometric_levels(firm_ref, 0.2, 5.0, 13)) {
        grids.firm.push_back(StoppingStrategy::threshold(level));
    }
    for (double level : geometric_levels(holder_ref, 0.2, 5.0, 13)) {
        grids.holder.push_back(StoppingStrategy::threshold(level));
    }
    for (int k = 1; k <= 4; ++k) {
        grids.firm.push_back(StoppingStrategy::fixed_arrival(k));
        grids.holder.push_back(StoppingStrategy::fixed_arrival(k));
    }
    return grids;
}

SaddleReport saddle_battery(const ModelParams& p, double x0, const StoppingStrategy& firm_center,
                            const StoppingStrategy& holder_center, const DeviationGrids& grids,
                            std::int64_t n_paths, std::uint64_t seed) {
    validate_params(p);
    if (x0 <= 0.0 || !std::isfinite(x0)) throw NonPositiveXError(x0);
    if (n_paths <= 1) throw InvalidParamError("n_paths", "non_positive");

    const std::size_t n = static_cast<std::size_t>(n_paths);
    std::vector<double> center_mod(n), center_unmod(n), row(n);
    const std::int64_t tr_mod =
        collect_payoffs(p, x0, firm_center, holder_center, true, seed, center_mod);
    const std::int64_t tr_unmod =
        collect_payoffs(p, x0, firm_center, holder_center, false, seed, center_unmod);

    SaddleReport report;
    report.regime = classify_regime(p).tag;
    report.firm_center = firm_center;
    report.holder_center = holder_center;
    report.center_modified = summarize(center_mod, seed, tr_mod);
    report.center_unmodified = summarize(center_unmod, seed, tr_unmod);

    std::vector<double> gap(n);
    for (std::size_t i = 0; i < n; ++i) gap[i] = center_mod[i] - center_unmod[i];
    const EstimatorResult g = summarize(gap, seed, 0);
    report.pair_gap_mean = g.mean;
    report.pair_gap_se = g.stderr_;

    for (const StoppingStrategy& alt : grids.holder) {
        collect_payoffs(p, x0, firm_center, alt, true, seed, row);
        report.rows.push_back(make_row(false, alt, row, center_mod, seed));
    }
    for (const StoppingStrategy& alt : grids.firm) {
        collect_payoffs(p, x0, alt, holder_center, false, seed, row);
        report.rows.push_back(make_row(true, alt, row, center_unmod, seed));
    }

    const double scale = std::max(1.0, std::abs(report.center_unmodified.mean));
    bool ok = std::abs(report.pair_gap_mean) <= 3.0 * report.pair_gap_se + 1e-14 * scale;
    for (const BatteryRow& r : report.rows) ok = ok && r.pass;
    report.pass = ok;
    return report;
}

SaddleReport saddle_battery(const ModelParams& p, double x0, std::int64_t n_paths,
                            std::uint64_t seed) {
    const PricingSolution sol = solve(p);
    return saddle_battery(p, x0, StoppingStrategy::from_descriptor(sol.firm_strategy),
                          StoppingStrategy::from_descriptor(sol.holder_strategy),
                          default_deviation_grids(sol), n_paths, seed);
}

DppReport dpp_check(const ModelParams& p, double x0, DppSide side, int eta_cap,
                    std::int64_t n_paths, std::uint64_t seed) {
    validate_params(p);
    if (x0 <= 0.0 || !std::isfinite(x0)) throw NonPositiveXError(x0);
    if (eta_cap < 1) throw InvalidParamError("eta_cap", "non_positive");
    if (n_paths <= 1) throw InvalidParamError("n_paths", "non_positive");

    DppReport report;
    report.side = side;
    report.eta_cap = eta_cap;

    double threshold = 0.0;
    FirmSolution fs;
    if (side == DppSide::Bondholder) {
        threshold = threshold_co(p);
        report.lhs = value_co(p, x0);
    } else {
        const Regime regime = classify_regime(p);
        if (regime.tag != RegimeTag::MidK) {
            throw RegimeMismatchError("issuer-side dynamic programming check needs c/r < K < gamma*x_co(lambda)");
        }
        fs = firm_coefficients(p);
        threshold = fs.x_ca;
        report.lhs = value_f(p, fs, x0);
    }

    const double cr = p.c / p.r;
    std::vector<double> values(static_cast<std::size_t>(n_paths));
    std::int64_t continuation = 0;
    for (std::int64_t i = 0; i < n_paths; ++i) {
        ArrivalPath path(p, x0, seed, i);
        path.ensure(eta_cap);
        double val = 0.0;
        for (int n = 1; n <= eta_cap; ++n) {
            const double t = path.time(n);
            const double x = path.price(n);
            const double disc = std::exp(-p.r * t);
            const double coupons = cr * (1.0 - disc);
            if (x >= threshold) {
                const double leg =
                    side == DppSide::Bondholder ? p.gamma * x : std::max(p.gamma * x, p.K);
                val = coupons + disc * leg;
                break;
            }
            if (n == eta_cap) {
                const double cont =
                    side == DppSide::Bondholder ? value_co(p, x) : value_f(p, fs, x);
                val = coupons + disc * cont;
                ++continuation;
            }
        }
        values[static_cast<std::size_t>(i)] = val;
    }
    report.rhs = summarize(values, seed, 0);
    report.continuation_fraction =
        static_cast<double>(continuation) / static_cast<double>(n_paths);
    report.pass = std::abs(report.rhs.mean - report.lhs) <= 3.0 * report.rhs.stderr_;
    return report;
}

double threshold_co_from_roots(const ModelParams& p, double alpha0, double beta_lambda) {
    const double num = p.c * (p.lambda + p.q) * (alpha0 * (p.lambda + p.r) - beta_lambda * p.r);
    const double den = p.gamma * p.r * (p.lambda + p.r) *
                       (alpha0 * (p.lambda + p.q) - p.lambda - beta_lambda * p.q);
    if (den <= 0.0) throw InternalBoundError("conversion-threshold denominator not positive");
    return num / den;
}

namespace {

double q_residual_scale(const ModelParams& p, double lambda, double z) {
    const double a = 0.5 * p.sigma * p.sigma;
    const double b = p.r - p.q - a;
    return std::max(1.0, a * z * z + std::abs(b * z) + (p.r + lambda));
}

void add_violation(std::vector<SweepViolation>& out, const ModelParams& p, const char* claim,
                   double margin, double tol) {
    if (!(margin >= -tol)) out.push_back({claim, p, margin});
}

void add_residual(std::vector<SweepViolation>& out, const ModelParams& p, const char* claim,
                  double residual, double tol) {
    if (!(std::abs(residual) <= tol)) out.push_back({claim, p, std::abs(residual)});
}

}  // namespace

std::vector<SweepViolation> sweep_check_draw(const ModelParams& p, const RootPair& roots0,
                                             const RootPair& roots_lambda) {
    validate_params(p);
    std::vector<SweepViolation> out;
    const double tol = 1e-9;

    // Characteristic roots actually solve their quadratics.
    add_residual(out, p, "root_residual_alpha0", q_lambda(p, 0.0, roots0.alpha),
                 tol * q_residual_scale(p, 0.0, roots0.alpha));
    add_residual(out, p, "root_residual_beta0", q_lambda(p, 0.0, roots0.beta),
                 tol * q_residual_scale(p, 0.0, roots0.beta));
    add_residual(out, p, "root_residual_alpha_lambda", q_lambda(p, p.lambda, roots_lambda.alpha),
                 tol * q_residual_scale(p, p.lambda, roots_lambda.alpha));
    add_residual(out, p, "root_residual_beta_lambda", q_lambda(p, p.lambda, roots_lambda.beta),
                 tol * q_residual_scale(p, p.lambda, roots_lambda.beta));

    // Sign, ordering and monotonicity in the kill rate.
    add_violation(out, p, "root_order",
                  std::min({roots0.alpha - 1.0, -roots0.beta, roots_lambda.alpha - roots0.alpha,
                            roots0.beta - roots_lambda.beta}),
                  tol);

    // r*alpha_lambda/(lambda+r) < alpha.
    add_violation(out, p, "root_ratio_bound",
                  roots0.alpha - p.r * roots_lambda.alpha / (p.lambda + p.r), tol);

    // Rate-signed root bound.
    if (p.q < p.r) {
        const double bound = (p.lambda + p.r) / (p.r - p.q);
        add_violation(out, p, "root_rate_bound", bound - roots_lambda.alpha, tol * bound);
    } else if (p.q > p.r) {
        const double bound = (p.lambda + p.r) / (p.r - p.q);  // negative
        add_violation(out, p, "root_rate_bound", roots_lambda.beta - bound, tol * (-bound));
    }

    // Conversion-threshold bounds from the supplied roots.
    const double x_star = threshold_co_from_roots(p, roots0.alpha, roots_lambda.beta);
    const double x_unc = roots0.alpha / (roots0.alpha - 1.0) * p.c / (p.gamma * p.r);
    const double thr_scale = std::max(1.0, x_unc);
    add_violation(out, p, "threshold_above_perpetuity", x_star - p.c / (p.gamma * p.r),
                  tol * thr_scale);
    add_violation(out, p, "threshold_above_yield_bound",
                  x_star - p.c / (p.gamma * p.q) * (p.lambda + p.q) / (p.lambda + p.r),
                  tol * thr_scale);
    add_violation(out, p, "threshold_below_unconstrained", x_unc - x_star, tol * thr_scale);

    const double cr = p.c / p.r;
    const double val_scale = std::max({1.0, p.K, cr});
    const double cut_high = p.gamma * x_star;

    if (p.K <= cr) {
        // Low-call regime: both glue coefficients must be positive.
        const double den =
            (roots_lambda.alpha - roots_lambda.beta) * (p.lambda + p.q) * (p.lambda + p.r);
        const double a_low =
            ((p.lambda + p.r) - roots_lambda.beta * (p.r - p.q)) * p.lambda * p.K / den;
        const double b_low =
            ((p.lambda + p.r) - roots_lambda.alpha * (p.r - p.q)) * p.lambda * p.K / den;
        add_violation(out, p, "low_coef_positive", std::min(a_low, b_low), tol * val_scale);
        // Value dominates both stopped legs before the forced-conversion point.
        double worst = 1e300;
        for (double u : geometric_levels(p.K / p.gamma, 0.01, 1.0, 21)) {
            const double v = value_ca(p, u);
            worst = std::min(worst, v - std::max(p.K, p.gamma * u));
        }
        add_violation(out, p, "low_value_above_stops", worst, tol * val_scale);
    } else if (p.K < cut_high) {
        // Middle regime: smooth fit must solve, the call threshold sits below
        // the forced-conversion point iff the conversion threshold sits above
        // it, and the issuer curve dominates the conversion payoff up to the
        // call threshold.
        try {
            const FirmSolution fs = firm_coefficients(p);
            add_violation(out, p, "mid_call_below_forced", p.K / p.gamma - fs.x_ca,
                          tol * thr_scale);
            const bool conv_above = x_star > p.K / p.gamma;
            const bool call_below = fs.x_ca < p.K / p.gamma;
            add_violation(out, p, "mid_threshold_iff", (conv_above == call_below) ? 1.0 : -1.0,
                          tol);
            double worst = 1e300;
            for (double u : geometric_levels(fs.x_ca, 0.01, 1.0, 21)) {
                worst = std::min(worst, value_f(p, fs, u) - p.gamma * u);
            }
            add_violation(out, p, "mid_value_above_conversion", worst, tol * val_scale);
        } catch (const SmoothFitError& e) {
            out.push_back({"mid_smooth_fit", p, e.residual});
        }
    } else {
        // High-call regime: the holder-only value never exceeds the call
        // price before the conversion threshold.
        double worst = 1e300;
        for (double u : geometric_levels(x_star, 0.01, 1.0, 21)) {
            worst = std::min(worst, p.K - value_co(p, u));
        }
        add_violation(out, p, "high_value_below_call", worst, tol * val_scale);
    }
    return out;
}

SweepReport property_sweep(int n_draws, std::uint64_t seed) {
    if (n_draws < 1) throw InvalidParamError("n_draws", "non_positive");
    SweepReport report;
    report.n_draws = n_draws;
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    auto in = [&](double lo, double hi) { return lo + (hi - lo) * u01(gen); };

    for (int draw = 0; draw < n_draws; ++draw) {
        ModelParams base;
        base.r = in(0.01, 0.2);
        base.q = in(0.01, 0.2);
        base.sigma = in(0.1, 0.8);
        base.lambda = in(0.1, 50.0);
        base.c = in(0.1, 5.0);
        base.gamma = in(0.1, 5.0);
        base.K = 1.0;  // placeholder; set per regime below

        const RootPair roots0 = char_roots(base, 0.0);
        const RootPair roots_lambda = char_roots(base, base.lambda);
        const double cr = base.c / base.r;
        const double cut_high =
            base.gamma * threshold_co_from_roots(base, roots0.alpha, roots_lambda.beta);

        // One K per regime, kept inside the regime's interior so the strict
        // inequalities have honest room above the tolerance.
        const double k_low = cr * in(0.05, 0.95);
        const double k_mid = cr + (cut_high - cr) * in(0.05, 0.95);
        const double k_high = cut_high * (1.0 + 4.0 * in(0.05, 0.95));
        for (double k : {k_low, k_mid, k_high}) {
            ModelParams p = base;
            p.K = k;
            std::vector<SweepViolation> v = sweep_check_draw(p, roots0, roots_lambda);
            report.violations.insert(report.violations.end(), v.begin(), v.end());
        }
    }
    return report;
}

AsymptoticsReport asymptotics_check(const ModelParams& p, std::vector<double> ladder,
                                    std::vector<double> xs) {
    validate_params(p);
    if (ladder.size() < 5) throw InvalidParamError("lambdas", "too_short");
    for (std::size_t i = 0; i + 1 < ladder.size(); ++i) {
        if (!(ladder[i] > 0.0) || !(ladder[i] < ladder[i + 1])) {
            throw InvalidParamError("lambdas", "not_increasing");
        }
    }

    AsymptoticsReport report;
    report.x_co_unconstrained = threshold_co_unconstrained(p);
    if (xs.empty()) {
        for (double f : {0.3, 0.5, 0.75, 1.0, 1.5}) xs.push_back(f * report.x_co_unconstrained);
    }

    double prev_gap = 1e300;
    report.co_gap_decreasing = true;
    for (double lam : ladder) {
        ModelParams pl = p;
        pl.lambda = lam;
        const PricingSolution sol = solve(pl);
        AsymptoticsRow row;
        row.lambda = lam;
        row.regime = sol.regime.tag;
        row.x_co_lambda = sol.x_co_lambda;
        row.x_ca_lambda = sol.firm ? sol.firm->x_ca : std::nan("");
        double gap = 0.0;
        for (double x : xs) {
            const double vu = sol.value_unconstrained(x);
            const double vl = sol.value(x);
            gap = std::max(gap, std::abs(vl - vu) / std::max(std::abs(vu), 1e-12));
        }
        row.value_gap_max = gap;
        report.rows.push_back(row);

        const double co_gap =
            std::abs(sol.x_co_lambda - report.x_co_unconstrained) / report.x_co_unconstrained;
        if (co_gap >= prev_gap) report.co_gap_decreasing = false;
        prev_gap = co_gap;
        report.co_gap_final = co_gap;
    }

    const AsymptoticsRow& last = report.rows.back();
    report.value_gap_final = last.value_gap_max;
    const double k_over_gamma = p.K / p.gamma;
    report.ca_gap_final = last.regime == RegimeTag::MidK
                              ? std::abs(last.x_ca_lambda - k_over_gamma) / k_over_gamma
                              : std::nan("");
    bool ok = report.co_gap_decreasing && report.co_gap_final < 0.01 &&
              report.value_gap_final < 0.01;
    if (last.regime == RegimeTag::MidK) ok = ok && report.ca_gap_final < 0.01;
    report.pass = ok;
    return report;
}

}  // namespace ccb
