#pragma once

#include <cstdint>

#include "ccbond/errors.hpp"

namespace ccb {

/// Market and contract parameters for the perpetual convertible bond.
///
/// The share price follows a geometric Brownian motion
///     dX_t = (r - q) X_t dt + sigma X_t dW_t
/// under the pricing measure.  The bond pays a continuous coupon `c`,
/// converts into `gamma` shares if the holder stops, and is called at the
/// fixed price `K` if the issuer stops first.  Both players may act only at
/// the arrival times of an independent Poisson clock with rate `lambda`.
struct ModelParams {
    double r = 0.0;       ///< riskless rate, > 0
    double q = 0.0;       ///< dividend yield, > 0
    double sigma = 0.0;   ///< volatility, > 0
    double lambda = 0.0;  ///< Poisson decision rate, > 0
    double c = 0.0;       ///< coupon rate, >= 0
    double gamma = 0.0;   ///< conversion ratio, > 0
    double K = 0.0;       ///< call (redemption) price, > 0
};

/// Roots of the characteristic quadratic of the discounted generator.
struct RootPair {
    double alpha = 0.0;        ///< positive root, > 1
    double beta = 0.0;         ///< negative root, < 0
    double lambda_used = 0.0;  ///< kill rate the pair was solved at
};

enum class RegimeTag { LowK, MidK, HighK };

/// Call-price regime together with the cut points that delimit it.
struct Regime {
    RegimeTag tag = RegimeTag::MidK;
    double cut_low = 0.0;   ///< c / r
    double cut_high = 0.0;  ///< gamma * x_co(lambda)
};

/// Diagnostics from the analytic root-bound checks (see check_root_bounds).
struct RootBoundsReport {
    bool ok = false;
    double margin_alpha_ratio = 0.0;  ///< alpha - r*alpha_lambda/(lambda+r)
    double margin_signed_rate = 0.0;  ///< bound margin for the r != q clause (0 when r == q)
    bool rate_clause_checked = false;
};

/// Throws InvalidParamError unless every field is finite, r, q, sigma,
/// lambda, gamma, K are strictly positive and c >= 0.
void validate_params(const ModelParams& p);

/// Characteristic quadratic of the generator killed at rate `lambda`:
///     Q(z) = sigma^2/2 z^2 + (r - q - sigma^2/2) z - (r + lambda).
double q_lambda(const ModelParams& p, double lambda, double z);

/// Roots of q_lambda, solved with the numerically stable quadratic formula:
/// the larger-magnitude root is taken from the formula and the other is
/// recovered from the product of roots, avoiding cancellation for extreme
/// drift/volatility mixes.  Postcondition: alpha > 1 and beta < 0.
RootPair char_roots(const ModelParams& p, double lambda);

/// Analytic bounds the roots must satisfy:
///   - always: r * alpha_lambda / (lambda + r) < alpha_0;
///   - if q < r: alpha_lambda < (lambda + r) / (r - q);
///   - if q > r: beta_lambda > (lambda + r) / (r - q).
/// Returns the margins; `ok` is false when any bound fails.
RootBoundsReport check_root_bounds(const ModelParams& p, double lambda);

/// Splits the call price into the three analytic regimes:
///   K <= c/r                   -> LowK  (call price below the coupon perpetuity)
///   K >= gamma * x_co(lambda)  -> HighK (call never binds)
///   otherwise                  -> MidK
/// Boundary values are assigned to the outer regimes so the split is
/// exhaustive and mutually exclusive.
Regime classify_regime(const ModelParams& p);

}  // namespace ccb
