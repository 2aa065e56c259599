#pragma once

#include <optional>

#include "ccbond/model.hpp"

namespace ccb {

/// Exact value of the holder-only auxiliary problem (issuer never calls):
/// the holder converts at the first Poisson arrival with X >= x_co(lambda).

/// Conversion threshold of the holder-only problem under the Poisson clock.
double threshold_co(const ModelParams& p);

/// Conversion threshold of the same problem with unrestricted stopping,
///     x_co = alpha/(alpha - 1) * c/(gamma r).
double threshold_co_unconstrained(const ModelParams& p);

/// Holder-only value function v_co.  Throws NonPositiveXError for x <= 0.
double value_co(const ModelParams& p, double x);

/// Coefficients of the issuer's optimal-call solution in the middle regime
/// c/r < K < gamma*x_co(lambda).  The curve has three branches glued C^1 at
/// the call threshold x_ca and at the forced-conversion point K/gamma:
///
///   x <  x_ca          : c/r + (K - c/r) (x/x_ca)^alpha
///   x_ca <= x <= K/gam : (c + lambda K)/(lambda + r)
///                        + A (x/x_ca)^alpha_l + B (x/x_ca)^beta_l
///   x >  K/gamma       : c/(lambda+r) + lambda gamma x/(lambda+q)
///                        + C (gamma x / K)^beta_l
struct FirmSolution {
    double x_ca = 0.0;   ///< issuer call threshold
    double theta = 0.0;  ///< K / (gamma x_ca) > 1
    double a_coef = 0.0;
    double b_coef = 0.0;
    double c_coef = 0.0;
    double max_residual = 0.0;  ///< worst smooth-fit equation residual
};

/// Solves the four smooth-fit equations for (A, B, x_ca, C) in closed form
/// and verifies all four residuals below 1e-10 before returning.
/// Throws RegimeMismatchError outside MidK and SmoothFitError when the
/// self-check fails.
FirmSolution firm_coefficients(const ModelParams& p);

/// Issuer-optimal value curve in the middle regime (uses firm_coefficients).
double value_f(const ModelParams& p, double x);
double value_f(const ModelParams& p, const FirmSolution& fs, double x);

/// In the high-call regime the issuer is indifferent; its threshold is the
/// price level z >= K/gamma where the holder-only value reaches K:
/// v_co(z) = K, found by bisection to |v_co(z) - K| <= 1e-12 K.
/// Throws RegimeMismatchError outside HighK.
double z_level(const ModelParams& p);

/// Equilibrium-strategy descriptor: stop at the first Poisson arrival with
/// X >= level (Threshold), or at the k-th arrival outright (FixedArrival).
struct StrategyDescriptor {
    enum class Kind { Threshold, FixedArrival };
    Kind kind = Kind::Threshold;
    double level = 0.0;
    int arrival = 0;
};

/// Full solution of the constrained game for one parameter set: regime,
/// thresholds, value curve and the saddle-point strategies.
struct PricingSolution {
    ModelParams p;
    Regime regime;
    RootPair roots0;        ///< roots at lambda = 0
    RootPair roots_lambda;  ///< roots at the decision rate
    double x_co_lambda = 0.0;
    double x_co_unconstrained = 0.0;
    std::optional<FirmSolution> firm;  ///< MidK only
    std::optional<double> z;           ///< HighK only
    double low_a = 0.0, low_b = 0.0;   ///< LowK curve coefficients
    StrategyDescriptor firm_strategy;
    StrategyDescriptor holder_strategy;

    /// Equilibrium bond value at price x under the Poisson constraint.
    double value(double x) const;
    /// Bond value with unrestricted stopping (lambda -> infinity limit).
    double value_unconstrained(double x) const;
};

/// Builds the PricingSolution for the regime K falls into.
PricingSolution solve(const ModelParams& p);

/// Constrained game value (convenience wrapper around solve()).
double value_ca(const ModelParams& p, double x);

/// Game value with unrestricted stopping:
///   K <= c/r              : max{K, gamma x}
///   c/r < K < gamma x_co  : c/r + (gamma x/K)^alpha (K - c/r) below K/gamma,
///                           gamma x above
///   K >= gamma x_co       : holder-only unconstrained solution capped by
///                           conversion at x_co
double value_ca_unconstrained(const ModelParams& p, double x);

/// Boundary curve below which conversion is forced at the next arrival:
///     L(x) = c/(r + lambda) + lambda gamma x/(q + lambda).
double forced_conversion_boundary(const ModelParams& p, double x);

/// (x/x_ref)^e evaluated in log space; exact 1.0 at x == x_ref.
double pow_ratio(double x, double x_ref, double e);

}  // namespace ccb
