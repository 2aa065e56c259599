#include <cmath>
#include <doctest.h>

#include "ccbond/closed_form.hpp"
#include "ccbond/errors.hpp"

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

}  // namespace

TEST_CASE("conversion thresholds on the toy set") {
    // [DERIVED] x_co(lambda) = 6*16/(12*12) = 2/3; unrestricted = 2/1 * 1/2 = 1.
    const ModelParams p = toy(0.6);
    CHECK(threshold_co(p) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(threshold_co_unconstrained(p) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("holder-only value: frozen points and limits") {
    const ModelParams p = toy(0.8);
    // [DERIVED] continuation branch 0.5 + (3/8) x^2 at x = 0.5.
    CHECK(value_co(p, 0.5) == doctest::Approx(0.59375).epsilon(1e-13));
    // [DERIVED] stopped branch 1/6 + 2x/3 + (1/18)(x/(2/3))^-2 at x = 1.
    CHECK(value_co(p, 1.0) == doctest::Approx(139.0 / 162.0).epsilon(1e-13));
    // [PAPER] v_co -> c/r as x -> 0.
    CHECK(value_co(p, 1e-9) == doctest::Approx(0.5).epsilon(1e-12));
    // Monotone increasing.
    double prev = 0.0;
    for (double x = 0.05; x < 3.0; x += 0.05) {
        const double v = value_co(p, x);
        CHECK(v > prev);
        prev = v;
    }
    CHECK_THROWS_AS(value_co(p, 0.0), NonPositiveXError);
    CHECK_THROWS_AS(value_co(p, -1.0), NonPositiveXError);
}

TEST_CASE("value-matching at the holder-only threshold") {
    // v_co(x*) = gamma x* exactly at the indifference point.
    const ModelParams p = toy(0.8);
    const double xs = threshold_co(p);
    CHECK(value_co(p, xs) == doctest::Approx(p.gamma * xs).epsilon(1e-13));
}

TEST_CASE("issuer smooth-fit coefficients in the middle regime") {
    // [DERIVED] K=0.6: A = 4/75, B = -1/50, theta^alpha_l = 3/2,
    // x_ca = 0.6 * 1.5^(-1/3), C = 0.08 - 0.02*1.5^(-2/3).
    const ModelParams p = toy(0.6);
    const FirmSolution fs = firm_coefficients(p);
    CHECK(fs.a_coef == doctest::Approx(4.0 / 75.0).epsilon(1e-12));
    CHECK(fs.b_coef == doctest::Approx(-0.02).epsilon(1e-12));
    CHECK(fs.x_ca == doctest::Approx(0.6 * std::pow(1.5, -1.0 / 3.0)).epsilon(1e-12));
    CHECK(fs.theta == doctest::Approx(std::pow(1.5, 1.0 / 3.0)).epsilon(1e-12));
    CHECK(fs.c_coef ==
          doctest::Approx(0.08 - 0.02 * std::pow(1.5, -2.0 / 3.0)).epsilon(1e-11));
    CHECK(fs.max_residual <= 1e-10);
    CHECK(fs.x_ca < p.K / p.gamma);  // [PAPER] call threshold below forced conversion
}

TEST_CASE("issuer value curve: frozen point, limits and continuity") {
    const ModelParams p = toy(0.6);
    // [DERIVED] v_f(0.3) = 0.5 + 0.025 * 1.5^(2/3) = 0.53275926742...
    CHECK(value_f(p, 0.3) ==
          doctest::Approx(0.5 + 0.025 * std::pow(1.5, 2.0 / 3.0)).epsilon(1e-12));
    // [TRIVIAL] first-branch limit c/r.
    CHECK(value_f(p, 1e-9) == doctest::Approx(0.5).epsilon(1e-12));
    // Value at the call threshold equals the call price.
    const FirmSolution fs = firm_coefficients(p);
    CHECK(value_f(p, fs, fs.x_ca) == doctest::Approx(p.K).epsilon(1e-12));
    // Continuity across both interior cuts.
    for (double cut : {fs.x_ca, p.K / p.gamma}) {
        const double left = value_f(p, fs, cut * (1.0 - 1e-13));
        const double right = value_f(p, fs, cut * (1.0 + 1e-13));
        CHECK(std::abs(left - right) <= 1e-10);
    }
    CHECK_THROWS_AS(firm_coefficients(toy(0.4)), RegimeMismatchError);
    CHECK_THROWS_AS(firm_coefficients(toy(0.8)), RegimeMismatchError);
}

TEST_CASE("indifference level z in the high regime") {
    // [DERIVED] v_co(z) = 0.8 has the root near 0.905.
    const ModelParams p = toy(0.8);
    const double z = z_level(p);
    CHECK(z > 0.904);
    CHECK(z < 0.906);
    CHECK(std::abs(value_co(p, z) - p.K) <= 1e-12 * p.K);
    CHECK(z >= p.K / p.gamma);
    CHECK_THROWS_AS(z_level(toy(0.6)), RegimeMismatchError);
}

TEST_CASE("full solution: strategies per regime") {
    const PricingSolution low = solve(toy(0.4));
    CHECK(low.regime.tag == RegimeTag::LowK);
    CHECK(low.firm_strategy.kind == StrategyDescriptor::Kind::FixedArrival);
    CHECK(low.firm_strategy.arrival == 1);
    CHECK(low.holder_strategy.kind == StrategyDescriptor::Kind::Threshold);
    CHECK(low.holder_strategy.level == doctest::Approx(0.4).epsilon(1e-15));
    // [DERIVED] r = q makes both glue coefficients equal 4/75.
    CHECK(low.low_a == doctest::Approx(4.0 / 75.0).epsilon(1e-12));
    CHECK(low.low_b == doctest::Approx(4.0 / 75.0).epsilon(1e-12));

    const PricingSolution mid = solve(toy(0.6));
    CHECK(mid.regime.tag == RegimeTag::MidK);
    CHECK(mid.firm_strategy.kind == StrategyDescriptor::Kind::Threshold);
    CHECK(mid.firm_strategy.level == doctest::Approx(mid.firm->x_ca).epsilon(1e-15));
    CHECK(mid.holder_strategy.level == doctest::Approx(0.6).epsilon(1e-15));

    const PricingSolution high = solve(toy(0.8));
    CHECK(high.regime.tag == RegimeTag::HighK);
    CHECK(high.firm_strategy.level == doctest::Approx(*high.z).epsilon(1e-15));
    CHECK(high.holder_strategy.level == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("low-regime value curve: limits, dominance, continuity") {
    const ModelParams p = toy(0.4);
    // [DERIVED] v(0+) = (c + lambda K)/(lambda + r) = 2.6/6 = 13/30.
    CHECK(value_ca(p, 1e-9) == doctest::Approx(13.0 / 30.0).epsilon(1e-9));
    // Value dominates both stopped legs up to the forced-conversion point.
    for (double x = 0.02; x <= 0.4; x += 0.02) {
        CHECK(value_ca(p, x) >= std::max(p.K, p.gamma * x) - 1e-12);
    }
    // Continuity at K/gamma.
    const double cut = p.K / p.gamma;
    CHECK(std::abs(value_ca(p, cut * (1.0 - 1e-13)) - value_ca(p, cut * (1.0 + 1e-13))) <=
          1e-10);
}

TEST_CASE("game value dispatches to the regime curves") {
    // [PAPER] MidK game value equals the issuer-optimal curve; HighK equals
    // the holder-only curve.
    const ModelParams mid = toy(0.6);
    for (double x : {0.1, 0.3, 0.55, 0.8, 2.0}) {
        CHECK(value_ca(mid, x) == doctest::Approx(value_f(mid, x)).epsilon(1e-15));
    }
    const ModelParams high = toy(0.8);
    for (double x : {0.1, 0.3, 0.55, 0.8, 2.0}) {
        CHECK(value_ca(high, x) == doctest::Approx(value_co(high, x)).epsilon(1e-15));
    }
}

TEST_CASE("unrestricted-stopping game value: case selection") {
    // [DERIVED] K=0.8 lies in (c/r, gamma*x_co) = (0.5, 1), so the middle
    // case applies: 0.5 + (0.5/0.8)^2 * 0.3 = 0.6171875.
    CHECK(value_ca_unconstrained(toy(0.8), 0.5) ==
          doctest::Approx(0.6171875).epsilon(1e-13));
    // Low case: max{K, gamma x}.
    CHECK(value_ca_unconstrained(toy(0.4), 0.3) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(value_ca_unconstrained(toy(0.4), 0.7) == doctest::Approx(0.7).epsilon(1e-15));
    // Middle case at K=0.6: 0.5 + (x/0.6)^2 * 0.1 below K/gamma, gamma x above.
    CHECK(value_ca_unconstrained(toy(0.6), 0.3) == doctest::Approx(0.525).epsilon(1e-13));
    CHECK(value_ca_unconstrained(toy(0.6), 0.9) == doctest::Approx(0.9).epsilon(1e-15));
    // High case K >= gamma*x_co: holder-only unrestricted solution
    // 0.5 + 0.5 x^2 below x_co = 1, gamma x above.
    CHECK(value_ca_unconstrained(toy(1.2), 0.5) == doctest::Approx(0.625).epsilon(1e-13));
    CHECK(value_ca_unconstrained(toy(1.2), 2.0) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("forced-conversion boundary line") {
    // [DERIVED] L(1) = 1/6 + 4/6 = 5/6 on the toy set.
    CHECK(forced_conversion_boundary(toy(0.6), 1.0) ==
          doctest::Approx(5.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("pow_ratio is exactly one at the reference point") {
    CHECK(pow_ratio(0.7, 0.7, 3.1415) == 1.0);
    CHECK(pow_ratio(2.0, 1.0, 2.0) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("constrained value never exceeds the unrestricted value (high regime)") {
    // Only the high regime admits a pointwise ordering: there the game value
    // is the holder-only value, a supremum over a smaller strategy set than
    // its unrestricted counterpart.  In the low regime the clock binds the
    // ISSUER (it cannot call immediately), which raises the value:
    // v(0+) = (c + lambda K)/(lambda + r) >= K whenever K <= c/r.  MidK has
    // no pointwise ordering either way; the rate-ladder convergence covers it.
    const ModelParams p = toy(0.8);
    const PricingSolution sol = solve(p);
    for (double x = 0.05; x <= 3.0; x += 0.05) {
        CHECK(sol.value(x) <= sol.value_unconstrained(x) + 1e-10);
    }
    // And the low-regime counterexample pinning the decision above:
    const ModelParams low = toy(0.4);
    const PricingSolution sol_low = solve(low);
    CHECK(sol_low.value(1e-9) > sol_low.value_unconstrained(1e-9) + 0.03);
}
