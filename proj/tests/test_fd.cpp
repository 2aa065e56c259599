#include <chrono>
#include <cmath>
#include <functional>
#include <doctest.h>

#include "ccbond/closed_form.hpp"
#include "ccbond/errors.hpp"
#include "ccbond/fd_solver.hpp"

using namespace ccb;

namespace {

ModelParams toy(double K) {
    ModelParams p;
    p.r = 2.0;
    p.q = 2.0;
    p.sigma = std::sqrt(2.0);
    p.lambda = 4.0;
    p.c = 1.0;
    p.gamma = 1.0;
    p.K = K;
    return p;
}

double sup_rel_gap(const GridCurve& curve, const std::function<double(double)>& exact) {
    double gap = 0.0;
    for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
        const double cf = exact(curve.x[i]);
        gap = std::max(gap, std::abs(curve.v[i] - cf) / std::max(std::abs(cf), 1e-12));
    }
    return gap;
}

}  // namespace

TEST_CASE("holder-only oracle matches the closed form and its boundary") {
    const ModelParams p = toy(0.8);
    const auto t0 = std::chrono::steady_clock::now();
    const GridCurve curve = solve_hjb_co(p);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(seconds <= 10.0);
    CHECK(curve.residual <= 1e-10 * std::max(1.0, p.c / p.r + p.K));
    CHECK(sup_rel_gap(curve, [&](double x) { return value_co(p, x); }) <= 5e-3);
    const double b = detect_free_boundary(p, curve, BoundaryCondition::CrossGammaX);
    CHECK(std::abs(b - 2.0 / 3.0) / (2.0 / 3.0) <= 0.01);
}

TEST_CASE("issuer-optimal oracle matches the closed form and its boundary") {
    const ModelParams p = toy(0.6);
    const GridCurve curve = solve_hjb_f(p);
    CHECK(sup_rel_gap(curve, [&](double x) { return value_f(p, x); }) <= 5e-3);
    const double b = detect_free_boundary(p, curve, BoundaryCondition::CrossK);
    const double x_ca = firm_coefficients(p).x_ca;
    CHECK(std::abs(b - x_ca) / x_ca <= 0.01);
    CHECK_THROWS_AS(solve_hjb_f(toy(0.4)), RegimeMismatchError);
    CHECK_THROWS_AS(solve_hjb_f(toy(0.8)), RegimeMismatchError);
}

TEST_CASE("low-call oracle matches the glued curve") {
    const ModelParams p = toy(0.4);
    const GridCurve curve = solve_hjb_ca_low(p);
    const PricingSolution sol = solve(p);
    CHECK(sup_rel_gap(curve, [&](double x) { return sol.value(x); }) <= 5e-3);
    CHECK_THROWS_AS(solve_hjb_ca_low(toy(0.6)), RegimeMismatchError);
}

TEST_CASE("oracle error shrinks under grid refinement") {
    const ModelParams p = toy(0.8);
    FdConfig coarse;
    coarse.points = 500;
    FdConfig fine;
    fine.points = 4000;
    const double gap_coarse =
        sup_rel_gap(solve_hjb_co(p, coarse), [&](double x) { return value_co(p, x); });
    const double gap_fine =
        sup_rel_gap(solve_hjb_co(p, fine), [&](double x) { return value_co(p, x); });
    // Second-order stencil: 8x nodes should cut the error by far more than 3x.
    CHECK(gap_coarse / gap_fine >= 3.0);
}

TEST_CASE("fixed-point iterates increase monotonically from the perpetuity floor") {
    // The max-form solver starts at V = c/(lambda+r) and each sweep is
    // monotone; the returned curve must dominate the floor everywhere.
    const ModelParams p = toy(0.8);
    const GridCurve curve = solve_hjb_co(p);
    for (std::size_t i = 0; i < curve.size(); ++i) {
        CHECK(curve.v[i] >= p.c / (p.lambda + p.r) - 1e-12);
    }
    CHECK(curve.iterations > 1);
}

TEST_CASE("low-call oracle boundary values and slope") {
    // Left boundary carries the known limit (c + lambda K)/(lambda + r);
    // the curve is increasing in x.
    const ModelParams p = toy(0.4);
    const GridCurve curve = solve_hjb_ca_low(p);
    CHECK(curve.v.front() ==
          doctest::Approx((p.c + p.lambda * p.K) / (p.lambda + p.r)).epsilon(1e-6));
    for (std::size_t i = 1; i < curve.size(); ++i) {
        CHECK(curve.v[i] >= curve.v[i - 1] - 1e-12);
    }
}

TEST_CASE("free-boundary detection rejects degenerate inputs") {
    const ModelParams p = toy(0.8);
    GridCurve flat;
    flat.x = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
    flat.v = {10.0, 10.0, 10.0, 10.0, 10.0, 10.0};  // never crosses gamma x
    CHECK_THROWS_AS(detect_free_boundary(p, flat, BoundaryCondition::CrossGammaX),
                    NoCrossingError);
    GridCurve wiggly;
    wiggly.x = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
    wiggly.v = {0.05, 0.25, 0.25, 0.45, 0.45, 0.65};  // crosses gamma x repeatedly
    CHECK_THROWS_AS(detect_free_boundary(p, wiggly, BoundaryCondition::CrossGammaX),
                    MultipleCrossingsError);
}

TEST_CASE("smooth fit: derivative gaps halve with h at every interior cut") {
    // One-sided difference quotients at a C^1 junction differ by O(h); the
    // ratio between gaps at h and h/2 must approach 2 (>= 1.8 with the
    // h-ladder {1e-3, 5e-4, 2.5e-4}).  Value-matching residuals <= 1e-10.
    const auto check_cut = [](const std::function<double(double)>& f, double cut) {
        const double eps = 1e-13;
        CHECK(std::abs(f(cut * (1.0 - eps)) - f(cut * (1.0 + eps))) <= 1e-10);
        const auto gap = [&](double h) {
            const double forward = (f(cut + h) - f(cut)) / h;
            const double backward = (f(cut) - f(cut - h)) / h;
            return std::abs(forward - backward);
        };
        const double g1 = gap(1e-3);
        const double g2 = gap(5e-4);
        const double g3 = gap(2.5e-4);
        CHECK(g1 / g2 >= 1.8);
        CHECK(g2 / g3 >= 1.8);
    };

    const ModelParams high = toy(0.8);
    check_cut([&](double x) { return value_co(high, x); }, threshold_co(high));

    const ModelParams mid = toy(0.6);
    const FirmSolution fs = firm_coefficients(mid);
    check_cut([&](double x) { return value_f(mid, fs, x); }, fs.x_ca);
    check_cut([&](double x) { return value_f(mid, fs, x); }, mid.K / mid.gamma);

    const ModelParams low = toy(0.4);
    check_cut([&](double x) { return value_ca(low, x); }, low.K / low.gamma);
}
