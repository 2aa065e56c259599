#include "ccbond/fd_solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "ccbond/closed_form.hpp"

namespace ccb {

namespace {

struct LogGrid {
    std::vector<double> x;
    double h = 0.0;  // log spacing
};

/// Grid bounds: the left edge sits deep in the coupon-dominated region and
/// the right edge far enough out that the decaying beta-power tail is below
/// 1e-8 of the linear asymptote, so Dirichlet data from the asymptote is
/// clean at the boundary.
LogGrid build_grid(const ModelParams& p, int points) {
    const double x_ref = std::fmax(threshold_co(p), p.K / p.gamma);
    const double beta_l = char_roots(p, p.lambda).beta;
    const double decay = std::fmax(2.0, -beta_l);
    const double hi_factor = std::fmin(std::pow(1e8, 1.0 / decay), 1e5);
    const double x_hi = x_ref * std::fmax(10.0, hi_factor);
    const double x_lo = 1e-3 * std::fmin(p.c > 0.0 ? p.c / (p.gamma * p.r) : p.K / p.gamma,
                                         p.K / p.gamma);

    LogGrid g;
    const double y_lo = std::log(x_lo);
    const double y_hi = std::log(x_hi);
    g.h = (y_hi - y_lo) / static_cast<double>(points - 1);
    g.x.resize(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        g.x[static_cast<std::size_t>(i)] = std::exp(y_lo + g.h * i);
    return g;
}

/// Thomas solve of the constant-coefficient interior stencil
///   lo*V_{i-1} + di*V_i + up*V_{i+1} = rhs_i
/// with Dirichlet ends already folded into rhs.
void solve_tridiagonal(double lo, double di, double up, std::vector<double>& rhs,
                       std::vector<double>& scratch, std::vector<double>& out) {
    const std::size_t m = rhs.size();
    scratch.resize(m);
    out.resize(m);
    double piv = di;
    scratch[0] = up / piv;
    out[0] = rhs[0] / piv;
    for (std::size_t i = 1; i < m; ++i) {
        piv = di - lo * scratch[i - 1];
        scratch[i] = up / piv;
        out[i] = (rhs[i] - lo * out[i - 1]) / piv;
    }
    for (std::size_t i = m - 1; i-- > 0;) out[i] -= scratch[i] * out[i + 1];
}

/// Shared fixed-point driver: repeatedly solves
///     (L - (r+lambda)) V + c + lambda * source(V_prev, x) = 0
/// until the sup-change falls below tol.
GridCurve solve_fixed_point(const ModelParams& p, const FdConfig& cfg, double left_bc,
                            const std::function<double(double, double)>& source,
                            double init_value) {
    validate_params(p);
    const LogGrid grid = build_grid(p, cfg.points);
    const std::size_t n = grid.x.size();
    const std::size_t m = n - 2;

    const double a = 0.5 * p.sigma * p.sigma;
    const double b = p.r - p.q - a;
    const double kill = p.r + p.lambda;
    const double h = grid.h;
    const double lo = a / (h * h) - b / (2.0 * h);
    const double di = -2.0 * a / (h * h) - kill;
    const double up = a / (h * h) + b / (2.0 * h);

    const double right_bc =
        p.c / (p.lambda + p.r) + p.lambda * p.gamma * grid.x[n - 1] / (p.lambda + p.q);

    GridCurve curve;
    curve.x = grid.x;
    curve.v.assign(n, init_value);
    curve.v[0] = left_bc;
    curve.v[n - 1] = right_bc;

    std::vector<double> rhs(m), scratch, interior;
    const double scale = std::fmax(1.0, p.c / p.r + p.K);
    for (int it = 1; it <= cfg.max_iterations; ++it) {
        for (std::size_t i = 0; i < m; ++i) {
            const double x = grid.x[i + 1];
            rhs[i] = -p.c - p.lambda * source(curve.v[i + 1], x);
        }
        rhs[0] -= lo * left_bc;
        rhs[m - 1] -= up * right_bc;
        solve_tridiagonal(lo, di, up, rhs, scratch, interior);

        double sup_change = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            sup_change = std::fmax(sup_change, std::fabs(interior[i] - curve.v[i + 1]));
            curve.v[i + 1] = interior[i];
        }
        curve.residual = sup_change;
        curve.iterations = it;
        if (sup_change <= cfg.tol * scale) return curve;
    }
    throw NoConvergenceError(cfg.max_iterations, curve.residual);
}

}  // namespace

GridCurve solve_hjb_co(const ModelParams& p, const FdConfig& cfg) {
    const double gamma = p.gamma;
    return solve_fixed_point(
        p, cfg, p.c / p.r,
        [gamma](double v, double x) { return std::fmax(v, gamma * x); },
        p.c / (p.lambda + p.r));
}

GridCurve solve_hjb_f(const ModelParams& p, const FdConfig& cfg) {
    const Regime reg = classify_regime(p);
    if (reg.tag != RegimeTag::MidK)
        throw RegimeMismatchError("issuer-optimal solve is defined for the middle regime only");
    const double gamma = p.gamma, K = p.K;
    const double kg = K / gamma;
    return solve_fixed_point(
        p, cfg, p.c / p.r,
        [gamma, K, kg](double v, double x) {
            return x < kg ? std::fmin(v, K) : gamma * x;
        },
        p.c / p.r);
}

GridCurve solve_hjb_ca_low(const ModelParams& p, const FdConfig& cfg) {
    const Regime reg = classify_regime(p);
    if (reg.tag != RegimeTag::LowK)
        throw RegimeMismatchError("low-call solve requires K <= c/r");
    const double gamma = p.gamma, K = p.K;
    const double left = (p.c + p.lambda * p.K) / (p.lambda + p.r);
    // Source independent of V: the fixed point converges after one sweep.
    return solve_fixed_point(
        p, cfg, left,
        [gamma, K](double, double x) { return std::fmax(gamma * x, K); }, left);
}

double detect_free_boundary(const ModelParams& p, const GridCurve& curve,
                            BoundaryCondition condition) {
    if (curve.size() < 3) throw EmptyGridError();
    const std::size_t n = curve.size();
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double obstacle =
            condition == BoundaryCondition::CrossGammaX ? p.gamma * curve.x[i] : p.K;
        s[i] = curve.v[i] - obstacle;
    }
    int count = 0;
    double crossing = 0.0;
    for (std::size_t i = 1; i + 2 < n; ++i) {
        if ((s[i] > 0.0) != (s[i + 1] > 0.0)) {
            ++count;
            const double w = s[i] / (s[i] - s[i + 1]);
            crossing = curve.x[i] + w * (curve.x[i + 1] - curve.x[i]);
        }
    }
    if (count == 0) throw NoCrossingError("value curve never crosses the obstacle");
    if (count > 1) throw MultipleCrossingsError(count);
    return crossing;
}

}  // namespace ccb
