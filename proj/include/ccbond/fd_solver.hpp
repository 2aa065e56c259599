#pragma once

#include <vector>

#include "ccbond/model.hpp"

namespace ccb {

/// Uniform grid in log-price with a value curve on it, produced by the
/// independent finite-difference solvers below.  These solvers share no
/// formulas with the closed-form module beyond the ODE itself; they exist
/// to cross-check it.
struct GridCurve {
    std::vector<double> x;  ///< strictly increasing prices
    std::vector<double> v;  ///< solution values
    double residual = 0.0;  ///< final fixed-point sup-change
    int iterations = 0;

    std::size_t size() const { return x.size(); }
};

struct FdConfig {
    int points = 4000;
    double tol = 1e-10;
    int max_iterations = 5000;
};

/// Holder-only obstacle problem: find V with
///     (L - (r + lambda)) V + c + lambda * max{V, gamma x} = 0,
/// V(x_lo) = c/r, V(x_hi) = c/(lambda+r) + lambda gamma x_hi/(lambda+q).
/// Solved by a monotone fixed point over the max-term: each sweep solves
/// one tridiagonal system with second-order central differences in log
/// price.  Starting from V == c/(lambda+r) the iterates increase nodewise.
GridCurve solve_hjb_co(const ModelParams& p, const FdConfig& cfg = {});

/// Issuer-optimal problem in the middle regime: the nonlinearity is
///     min{V, K} below K/gamma and gamma x above,
/// with V(x_lo) = c/r and the same right asymptote.
GridCurve solve_hjb_f(const ModelParams& p, const FdConfig& cfg = {});

/// Low-call-price curve: the source max{gamma x, K} does not involve V, so
/// a single linear solve suffices.  V(x_lo) = (c + lambda K)/(lambda + r).
GridCurve solve_hjb_ca_low(const ModelParams& p, const FdConfig& cfg = {});

enum class BoundaryCondition {
    CrossGammaX,  ///< first crossing of V and gamma x
    CrossK,       ///< first crossing of V and K
};

/// Locates the unique sign change of V - obstacle on the grid interior and
/// returns the linearly interpolated crossing price.  Throws
/// NoCrossingError / MultipleCrossingsError when the count is not one.
double detect_free_boundary(const ModelParams& p, const GridCurve& curve,
                            BoundaryCondition condition);

}  // namespace ccb
