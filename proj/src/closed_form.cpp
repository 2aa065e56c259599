#include "ccbond/closed_form.hpp"

#include <algorithm>
#include <cmath>

namespace ccb {

double pow_ratio(double x, double x_ref, double e) {
    if (x == x_ref) return 1.0;
    return std::exp(e * (std::log(x) - std::log(x_ref)));
}

namespace {

void require_positive_x(double x) {
    if (!(x > 0.0)) throw NonPositiveXError(x);
}

double scale_of(const ModelParams& p) {
    return std::fmax(1.0, std::fmax(p.K, p.c / p.r));
}

}  // namespace

double threshold_co(const ModelParams& p) {
    validate_params(p);
    const double a0 = char_roots(p, 0.0).alpha;
    const double bl = char_roots(p, p.lambda).beta;
    const double l = p.lambda;
    const double num = p.c * (l + p.q) * (a0 * (l + p.r) - bl * p.r);
    const double den = p.gamma * p.r * (l + p.r) * (a0 * (l + p.q) - l - bl * p.q);
    if (!(den > 0.0))
        throw InternalBoundError("conversion-threshold denominator not positive");
    return num / den;
}

double threshold_co_unconstrained(const ModelParams& p) {
    validate_params(p);
    const double a0 = char_roots(p, 0.0).alpha;
    return a0 / (a0 - 1.0) * p.c / (p.gamma * p.r);
}

double value_co(const ModelParams& p, double x) {
    validate_params(p);
    require_positive_x(x);
    const double xs = threshold_co(p);
    const double l = p.lambda;
    if (x < xs) {
        const double a0 = char_roots(p, 0.0).alpha;
        return p.c / p.r + (p.gamma * xs - p.c / p.r) * pow_ratio(x, xs, a0);
    }
    const double bl = char_roots(p, l).beta;
    const double coef = p.q * p.gamma * xs / (l + p.q) - p.c / (l + p.r);
    const double tail = coef == 0.0 ? 0.0 : coef * pow_ratio(x, xs, bl);
    return p.c / (l + p.r) + l * p.gamma * x / (l + p.q) + tail;
}

Regime classify_regime(const ModelParams& p) {
    validate_params(p);
    Regime reg;
    reg.cut_low = p.c / p.r;
    reg.cut_high = p.gamma * threshold_co(p);
    if (p.K <= reg.cut_low)
        reg.tag = RegimeTag::LowK;
    else if (p.K >= reg.cut_high)
        reg.tag = RegimeTag::HighK;
    else
        reg.tag = RegimeTag::MidK;
    return reg;
}

FirmSolution firm_coefficients(const ModelParams& p) {
    const Regime reg = classify_regime(p);
    if (reg.tag != RegimeTag::MidK)
        throw RegimeMismatchError("call-threshold coefficients exist only for c/r < K < gamma*x_co");

    const double a0 = char_roots(p, 0.0).alpha;
    const RootPair rl = char_roots(p, p.lambda);
    const double al = rl.alpha, bl = rl.beta;
    const double l = p.lambda, r = p.r, q = p.q, K = p.K;
    const double kc = K - p.c / r;  // > 0 in MidK

    FirmSolution fs;
    fs.a_coef = kc / (al - bl) * (a0 - r * bl / (l + r));
    fs.b_coef = kc / (al - bl) * (r * al / (l + r) - a0);

    // theta^alpha_l in closed form; theta = K / (gamma x_ca) > 1.
    const double bracket = (1.0 / kc) * ((l + r) / (a0 * (l + r) - r * bl)) *
                           (l * K / (l + q)) * (1.0 - (r - q) * bl / (l + r));
    if (!(bracket > 0.0))
        throw InternalBoundError("call-threshold bracket not positive");
    fs.x_ca = (K / p.gamma) * std::exp(-std::log(bracket) / al);
    fs.theta = K / (p.gamma * fs.x_ca);

    const double th_al = bracket;  // theta^alpha_l, exactly
    const double th_bl = std::exp((bl / al) * std::log(bracket));
    fs.c_coef = fs.a_coef * (al / bl) * th_al + fs.b_coef * th_bl - (l * K / (l + q)) / bl;

    // Self-check: the four smooth-fit equations the coefficients must solve.
    const double cl = (p.c + l * K) / (l + r);
    const double e1 = K - (cl + fs.a_coef + fs.b_coef);
    const double e2 = kc * a0 - (fs.a_coef * al + fs.b_coef * bl);
    const double e3 = (cl + fs.a_coef * th_al + fs.b_coef * th_bl) -
                      (p.c / (l + r) + l * K / (l + q) + fs.c_coef);
    const double e4 = (fs.a_coef * al * th_al + fs.b_coef * bl * th_bl) -
                      (l * K / (l + q) + fs.c_coef * bl);
    fs.max_residual = std::max({std::fabs(e1), std::fabs(e2), std::fabs(e3), std::fabs(e4)});
    if (fs.max_residual > 1e-10 * scale_of(p)) throw SmoothFitError(fs.max_residual);
    return fs;
}

double value_f(const ModelParams& p, const FirmSolution& fs, double x) {
    require_positive_x(x);
    const double l = p.lambda, r = p.r;
    const double a0 = char_roots(p, 0.0).alpha;
    const RootPair rl = char_roots(p, l);
    const double kg = p.K / p.gamma;
    if (x < fs.x_ca) return p.c / r + (p.K - p.c / r) * pow_ratio(x, fs.x_ca, a0);
    if (x <= kg) {
        return (p.c + l * p.K) / (l + r) + fs.a_coef * pow_ratio(x, fs.x_ca, rl.alpha) +
               fs.b_coef * pow_ratio(x, fs.x_ca, rl.beta);
    }
    return p.c / (l + r) + l * p.gamma * x / (l + p.q) + fs.c_coef * pow_ratio(x, kg, rl.beta);
}

double value_f(const ModelParams& p, double x) {
    return value_f(p, firm_coefficients(p), x);
}

double z_level(const ModelParams& p) {
    const Regime reg = classify_regime(p);
    if (reg.tag != RegimeTag::HighK)
        throw RegimeMismatchError("indifference level z exists only for K >= gamma*x_co");

    const double tol = 1e-12 * p.K;
    double lo = p.K / p.gamma;
    if (std::fabs(value_co(p, lo) - p.K) <= tol) return lo;

    // v_co is continuous, strictly increasing and unbounded beyond the
    // conversion threshold, so bracket by doubling and bisect.
    double hi = 2.0 * std::fmax(lo, threshold_co(p));
    int guard = 0;
    while (value_co(p, hi) < p.K) {
        hi *= 2.0;
        if (++guard > 200) throw InternalBoundError("failed to bracket v_co = K");
    }
    for (int i = 0; i < 400; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double v = value_co(p, mid);
        if (std::fabs(v - p.K) <= tol) return mid;
        (v < p.K ? lo : hi) = mid;
        if (hi - lo <= 1e-16 * hi) break;
    }
    const double z = 0.5 * (lo + hi);
    if (std::fabs(value_co(p, z) - p.K) > 10.0 * tol)
        throw NoConvergenceError(400, std::fabs(value_co(p, z) - p.K));
    return z;
}

PricingSolution solve(const ModelParams& p) {
    PricingSolution s;
    s.p = p;
    s.regime = classify_regime(p);
    s.roots0 = char_roots(p, 0.0);
    s.roots_lambda = char_roots(p, p.lambda);
    s.x_co_lambda = threshold_co(p);
    s.x_co_unconstrained = threshold_co_unconstrained(p);

    const double l = p.lambda, r = p.r, q = p.q;
    const double al = s.roots_lambda.alpha, bl = s.roots_lambda.beta;
    switch (s.regime.tag) {
        case RegimeTag::LowK: {
            const double common = l * p.K / ((al - bl) * (l + q) * (l + r));
            s.low_a = ((l + r) - bl * (r - q)) * common;
            s.low_b = ((l + r) - al * (r - q)) * common;
            if (!(s.low_a > 0.0) || !(s.low_b > 0.0))
                throw InternalBoundError("low-call curve coefficients not positive");
            s.firm_strategy = {StrategyDescriptor::Kind::FixedArrival, 0.0, 1};
            s.holder_strategy = {StrategyDescriptor::Kind::Threshold, p.K / p.gamma, 0};
            break;
        }
        case RegimeTag::MidK: {
            s.firm = firm_coefficients(p);
            s.firm_strategy = {StrategyDescriptor::Kind::Threshold, s.firm->x_ca, 0};
            s.holder_strategy = {StrategyDescriptor::Kind::Threshold, p.K / p.gamma, 0};
            break;
        }
        case RegimeTag::HighK: {
            s.z = z_level(p);
            s.firm_strategy = {StrategyDescriptor::Kind::Threshold, *s.z, 0};
            s.holder_strategy = {StrategyDescriptor::Kind::Threshold, s.x_co_lambda, 0};
            break;
        }
    }
    return s;
}

double PricingSolution::value(double x) const {
    require_positive_x(x);
    const double l = p.lambda, r = p.r;
    switch (regime.tag) {
        case RegimeTag::LowK: {
            const double kg = p.K / p.gamma;
            if (x < kg)
                return (p.c + l * p.K) / (l + r) + low_a * pow_ratio(x, kg, roots_lambda.alpha);
            return p.c / (l + r) + l * p.gamma * x / (l + p.q) +
                   low_b * pow_ratio(x, kg, roots_lambda.beta);
        }
        case RegimeTag::MidK:
            return value_f(p, *firm, x);
        case RegimeTag::HighK:
            return value_co(p, x);
    }
    throw InternalBoundError("unreachable regime");
}

double PricingSolution::value_unconstrained(double x) const {
    require_positive_x(x);
    const double cr = p.c / p.r;
    const double a0 = roots0.alpha;
    if (p.K <= cr) return std::fmax(p.K, p.gamma * x);
    if (p.K < p.gamma * x_co_unconstrained) {
        const double kg = p.K / p.gamma;
        if (x < kg) return cr + (p.K - cr) * pow_ratio(x, kg, a0);
        return p.gamma * x;
    }
    if (x < x_co_unconstrained)
        return cr + (p.gamma * x_co_unconstrained - cr) * pow_ratio(x, x_co_unconstrained, a0);
    return p.gamma * x;
}

double value_ca(const ModelParams& p, double x) { return solve(p).value(x); }

double value_ca_unconstrained(const ModelParams& p, double x) {
    return solve(p).value_unconstrained(x);
}

double forced_conversion_boundary(const ModelParams& p, double x) {
    validate_params(p);
    if (!(x >= 0.0)) throw NonPositiveXError(x);
    return p.c / (p.r + p.lambda) + p.lambda * p.gamma * x / (p.q + p.lambda);
}

}  // namespace ccb
