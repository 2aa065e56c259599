#include "ccbond/model.hpp"

#include <cmath>

namespace ccb {

namespace {

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw InvalidParamError(name, "non_finite");
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0)) throw InvalidParamError(name, "non_positive");
}

}  // namespace

void validate_params(const ModelParams& p) {
    require_finite(p.r, "r");
    require_finite(p.q, "q");
    require_finite(p.sigma, "sigma");
    require_finite(p.lambda, "lambda");
    require_finite(p.c, "c");
    require_finite(p.gamma, "gamma");
    require_finite(p.K, "K");
    require_positive(p.r, "r");
    require_positive(p.q, "q");
    require_positive(p.sigma, "sigma");
    require_positive(p.lambda, "lambda");
    if (p.c < 0.0) throw InvalidParamError("c", "negative");
    require_positive(p.gamma, "gamma");
    require_positive(p.K, "K");
}

double q_lambda(const ModelParams& p, double lambda, double z) {
    const double half_sig2 = 0.5 * p.sigma * p.sigma;
    return half_sig2 * z * z + (p.r - p.q - half_sig2) * z - (p.r + lambda);
}

RootPair char_roots(const ModelParams& p, double lambda) {
    const double a = 0.5 * p.sigma * p.sigma;
    const double b = p.r - p.q - a;
    const double c0 = -(p.r + lambda);
    // b^2 - 4 a c0 = b^2 + 4 a (r + lambda) > 0: one positive, one negative root.
    const double disc = b * b - 4.0 * a * c0;
    if (!(disc > 0.0))
        throw InternalBoundError("characteristic quadratic has no real root pair");
    const double sq = std::sqrt(disc);
    // Larger-magnitude root from the formula, the other from the root product
    // c0 / a, so neither suffers cancellation.
    double big;
    if (b >= 0.0)
        big = (-b - sq) / (2.0 * a);
    else
        big = (-b + sq) / (2.0 * a);
    const double other = c0 / (a * big);

    RootPair roots;
    roots.lambda_used = lambda;
    roots.alpha = std::fmax(big, other);
    roots.beta = std::fmin(big, other);
    if (!(roots.alpha > 1.0) || !(roots.beta < 0.0))
        throw InternalBoundError("characteristic roots violate alpha > 1 > 0 > beta");
    return roots;
}

RootBoundsReport check_root_bounds(const ModelParams& p, double lambda) {
    const RootPair r0 = char_roots(p, 0.0);
    const RootPair rl = char_roots(p, lambda);

    RootBoundsReport rep;
    rep.margin_alpha_ratio = r0.alpha - p.r * rl.alpha / (lambda + p.r);
    rep.ok = rep.margin_alpha_ratio > 0.0;

    if (p.r != p.q) {
        rep.rate_clause_checked = true;
        const double bound = (lambda + p.r) / (p.r - p.q);
        if (p.q < p.r) {
            rep.margin_signed_rate = bound - rl.alpha;
        } else {
            // bound is negative here; beta_lambda must sit above it.
            rep.margin_signed_rate = rl.beta - bound;
        }
        rep.ok = rep.ok && rep.margin_signed_rate > 0.0;
    }
    return rep;
}

}  // namespace ccb
