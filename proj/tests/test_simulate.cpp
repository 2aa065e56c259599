#include <cmath>
#include <cstdint>
#include <doctest.h>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ccbond/errors.hpp"
#include "ccbond/rng.hpp"
#include "ccbond/simulate.hpp"

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

TEST_CASE("path RNG: deterministic per (seed, index), decorrelated across indices") {
    PathRng a(42, 7), b(42, 7), c(42, 8);
    bool all_equal = true;
    bool any_equal_across = false;
    for (int i = 0; i < 1000; ++i) {
        const double ua = a.uniform();
        const double ub = b.uniform();
        const double uc = c.uniform();
        all_equal = all_equal && (ua == ub);
        any_equal_across = any_equal_across || (ua == uc);
        CHECK(ua > 0.0);
        CHECK(ua <= 1.0);
    }
    CHECK(all_equal);
    CHECK_FALSE(any_equal_across);
}

TEST_CASE("path RNG: exponential and normal moments") {
    PathRng rng(123, 0);
    const int n = 200000;
    double se = 0.0, sn = 0.0, sn2 = 0.0;
    for (int i = 0; i < n; ++i) {
        se += rng.exponential(4.0);
        const double z = rng.normal();
        sn += z;
        sn2 += z * z;
    }
    CHECK(se / n == doctest::Approx(0.25).epsilon(3.0 / std::sqrt(double(n)) * 4.0));
    CHECK(std::abs(sn / n) < 3.0 / std::sqrt(double(n)));
    CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("arrival path: reproducible, increasing clock, exact transitions") {
    const ModelParams p = toy(0.6);
    ArrivalPath path1(p, 0.5, 42, 3);
    ArrivalPath path2(p, 0.5, 42, 3);
    REQUIRE(path1.ensure(50));
    REQUIRE(path2.ensure(50));
    double prev_t = 0.0;
    for (int n = 1; n <= 50; ++n) {
        CHECK(path1.time(n) == path2.time(n));
        CHECK(path1.price(n) == path2.price(n));
        CHECK(path1.time(n) > prev_t);
        CHECK(path1.price(n) > 0.0);
        prev_t = path1.time(n);
    }
}

TEST_CASE("arrival path: vanishing volatility reduces to the deterministic flow") {
    // [TRIVIAL] sigma -> 0: X(t) = x0 * exp((r - q) t).
    ModelParams p = toy(0.6);
    p.r = 0.04;
    p.q = 0.02;
    p.sigma = 1e-8;
    ArrivalPath path(p, 1.0, 7, 0);
    REQUIRE(path.ensure(20));
    for (int n = 1; n <= 20; ++n) {
        const double expect = std::exp((p.r - p.q) * path.time(n));
        CHECK(path.price(n) == doctest::Approx(expect).epsilon(1e-4));
    }
}

TEST_CASE("first-arrival discount factor matches lambda/(lambda+r)") {
    // [DERIVED] E[e^{-r T_1}] = 4/6 = 2/3 on the toy set.
    const ModelParams p = toy(0.6);
    const int n = 100000;
    std::vector<double> vals(n);
    for (int i = 0; i < n; ++i) {
        ArrivalPath path(p, 0.5, 99, i);
        REQUIRE(path.ensure(1));
        vals[size_t(i)] = std::exp(-p.r * path.time(1));
    }
    const EstimatorResult res = summarize(vals, 99, 0);
    CHECK(std::abs(res.mean - 2.0 / 3.0) <= 3.0 * res.stderr_);
}

TEST_CASE("threshold stop indices are monotone in the level") {
    const ModelParams p = toy(0.6);
    for (int i = 0; i < 200; ++i) {
        ArrivalPath path(p, 0.5, 11, i);
        REQUIRE(path.ensure(200));
        std::int64_t prev_idx = 0;
        for (double level : {0.4, 0.6, 0.9, 1.5}) {
            std::int64_t idx = 201;  // sentinel: not hit within horizon
            for (std::int64_t n = 1; n <= 200; ++n) {
                if (path.price(n) >= level) {
                    idx = n;
                    break;
                }
            }
            CHECK(idx >= prev_idx);
            prev_idx = idx;
        }
    }
}

TEST_CASE("payoff: nobody stops resolves to the coupon perpetuity") {
    const ModelParams p = toy(0.6);
    ArrivalPath path(p, 0.5, 5, 0);
    const double v = evaluate_payoff(path, StoppingStrategy::never(),
                                     StoppingStrategy::never(), false);
    CHECK(v == doctest::Approx(p.c / p.r).epsilon(1e-12));
}

TEST_CASE("payoff: simultaneous stops pay the holder leg") {
    const ModelParams p = toy(0.6);
    for (int i = 0; i < 100; ++i) {
        ArrivalPath path(p, 0.5, 21, i);
        REQUIRE(path.ensure(3));
        const double t = path.time(3);
        const double x = path.price(3);
        const double expect =
            p.c / p.r * (1.0 - std::exp(-p.r * t)) + std::exp(-p.r * t) * p.gamma * x;
        ArrivalPath path_a(p, 0.5, 21, i);
        const double v = evaluate_payoff(path_a, StoppingStrategy::fixed_arrival(3),
                                         StoppingStrategy::fixed_arrival(3), false);
        CHECK(v == doctest::Approx(expect).epsilon(1e-12));
        // The tie rule does not depend on the envelope flag.
        ArrivalPath path_b(p, 0.5, 21, i);
        const double vm = evaluate_payoff(path_b, StoppingStrategy::fixed_arrival(3),
                                          StoppingStrategy::fixed_arrival(3), true);
        CHECK(vm == v);
    }
}

TEST_CASE("payoff: envelope call leg dominates the contractual one pathwise") {
    const ModelParams p = toy(0.6);
    const StoppingStrategy firm = StoppingStrategy::fixed_arrival(1);
    const StoppingStrategy holder = StoppingStrategy::never();
    bool any_strict = false;
    for (int i = 0; i < 1000; ++i) {
        ArrivalPath path_a(p, 0.5, 33, i);
        ArrivalPath path_b(p, 0.5, 33, i);
        const double v_mod = evaluate_payoff(path_a, firm, holder, true);
        const double v_unmod = evaluate_payoff(path_b, firm, holder, false);
        CHECK(v_mod >= v_unmod - 1e-15);
        any_strict = any_strict || (v_mod > v_unmod + 1e-12);
    }
    CHECK(any_strict);  // gamma X > K occurs with positive probability
}

TEST_CASE("payoff: issuer-first stop pays K; holder preemption pays gamma X") {
    const ModelParams p = toy(0.6);
    // Issuer stops at arrival 1 with a holder threshold that never fires
    // below it: payoff must be coupons + e^{-rT_1} K.
    for (int i = 0; i < 50; ++i) {
        ArrivalPath probe(p, 0.1, 55, i);
        REQUIRE(probe.ensure(1));
        if (probe.price(1) >= 10.0) continue;
        const double t = probe.time(1);
        const double expect =
            p.c / p.r * (1.0 - std::exp(-p.r * t)) + std::exp(-p.r * t) * p.K;
        ArrivalPath path(p, 0.1, 55, i);
        const double v = evaluate_payoff(path, StoppingStrategy::fixed_arrival(1),
                                         StoppingStrategy::threshold(10.0), false);
        CHECK(v == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("estimator: bit-identical across thread counts and call sites") {
    const ModelParams p = toy(0.8);
    const StoppingStrategy firm = StoppingStrategy::threshold(0.9048);
    const StoppingStrategy holder = StoppingStrategy::threshold(2.0 / 3.0);
    const EstimatorResult base = estimate_J(p, 0.5, firm, holder, false, 20000, 4242);
#ifdef _OPENMP
    const int saved = omp_get_max_threads();
    for (int threads : {1, 2, 4}) {
        omp_set_num_threads(threads);
        const EstimatorResult again = estimate_J(p, 0.5, firm, holder, false, 20000, 4242);
        CHECK(again.mean == base.mean);
        CHECK(again.stderr_ == base.stderr_);
    }
    omp_set_num_threads(saved);
#endif
    const EstimatorResult repeat = estimate_J(p, 0.5, firm, holder, false, 20000, 4242);
    CHECK(repeat.mean == base.mean);
    CHECK(repeat.stderr_ == base.stderr_);
}

TEST_CASE("estimator: saddle pair reproduces the closed-form value") {
    // [DERIVED] HighK toy at x0 = 0.5: value 0.59375.
    const ModelParams p = toy(0.8);
    const EstimatorResult res =
        estimate_J(p, 0.5, StoppingStrategy::threshold(0.90475),
                   StoppingStrategy::threshold(2.0 / 3.0), false, 50000, 4242);
    CHECK(std::abs(res.mean - 0.59375) <= 3.0 * res.stderr_);
    CHECK(res.stderr_ > 0.0);
    CHECK(res.stderr_ < 0.005);
}

TEST_CASE("estimator: one-arrival conversion has a computable mean") {
    // [DERIVED] holder converts at T_1 regardless of price, firm never calls:
    //   E = (c/r)(1 - E[e^{-rT_1}]) + E[e^{-rT_1} gamma X_{T_1}]
    // with E[e^{-rT_1}] = lambda/(lambda+r) and, for r = q,
    //   E[e^{-rT_1} X_{T_1}] = x0 * lambda/(lambda+r) (drift-neutral case).
    const ModelParams p = toy(0.6);
    const double x0 = 0.5;
    const double ed = p.lambda / (p.lambda + p.r);
    const double expect = p.c / p.r * (1.0 - ed) + ed * p.gamma * x0;
    const EstimatorResult res = estimate_J(p, x0, StoppingStrategy::never(),
                                           StoppingStrategy::fixed_arrival(1), false,
                                           100000, 7);
    CHECK(std::abs(res.mean - expect) <= 3.0 * res.stderr_);
}

TEST_CASE("pairwise sum: fixed shape, exactness on small arrays") {
    std::vector<double> xs = {1.0, 2.0, 3.0, 4.0, 5.0};
    CHECK(pairwise_sum(xs) == 15.0);
    std::vector<double> big(1000, 0.1);
    CHECK(pairwise_sum(big) == doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("deterministic game: open-set payoffs need responder-refined grids") {
    // Payoffs with an open stopping set for the maximizer: L = M = 1_{t>1},
    // U = 1_{t<=1}.  On any single grid pair the pair (upper, lower) = (1, 0)
    // is unattainable: upper = 1 forces a maximizer point inside (1, s*] for
    // the minimizer's first point s* > 1, and that same point blocks
    // lower = 0.  Each direction needs the responder's grid refined.
    const auto lower = [](double t) { return t > 1.0 ? 1.0 : 0.0; };
    const auto upper = [](double s) { return s <= 1.0 ? 1.0 : 0.0; };
    DeterministicGameSpec spec;
    spec.lower = lower;
    spec.tie = lower;
    spec.upper = upper;

    // Maximizer refined inside (1, 1.5): upper value 1 is attained.
    spec.grid_max = {0.5, 1.0, 1.2, 1.5, 2.0};
    spec.grid_min = {0.5, 1.0, 1.5, 2.0};
    CHECK(deterministic_game_value(spec).upper == 1.0);

    // Minimizer refined inside (1, 1.5): lower value 0 is attained.
    spec.grid_max = {0.5, 1.0, 1.5, 2.0};
    spec.grid_min = {0.5, 1.0, 1.2, 1.5, 2.0};
    CHECK(deterministic_game_value(spec).lower == 0.0);
}

TEST_CASE("deterministic game: closed-set variant has value 1 on a shared grid") {
    const auto lower = [](double t) { return t >= 1.0 ? 1.0 : 0.0; };
    const auto upper = [](double s) { return s < 1.0 ? 1.0 : 0.0; };
    DeterministicGameSpec spec;
    spec.lower = lower;
    spec.tie = lower;
    spec.upper = upper;
    spec.grid_max = {0.5, 1.0, 1.5};
    spec.grid_min = {0.5, 1.0, 1.5};
    const DeterministicGameValue val = deterministic_game_value(spec);
    CHECK(val.upper == 1.0);
    CHECK(val.lower == 1.0);
}

TEST_CASE("deterministic game: singleton grid collapses to plain optimization") {
    DeterministicGameSpec spec;
    spec.lower = [](double t) { return t; };
    spec.tie = [](double t) { return t; };
    spec.upper = [](double) { return 10.0; };
    spec.grid_max = {1.0, 2.0, 3.0};
    spec.grid_min = {5.0};  // minimizer stops after every maximizer option
    const DeterministicGameValue val = deterministic_game_value(spec);
    // Both orderings reduce to max_t lower(t) = 3.
    CHECK(val.upper == 3.0);
    CHECK(val.lower == 3.0);
}

TEST_CASE("deterministic game: empty grid is rejected") {
    DeterministicGameSpec spec;
    spec.lower = [](double) { return 0.0; };
    spec.tie = [](double) { return 0.0; };
    spec.upper = [](double) { return 1.0; };
    spec.grid_max = {};
    spec.grid_min = {1.0};
    CHECK_THROWS_AS(deterministic_game_value(spec), EmptyGridError);
}

TEST_CASE("literal example grids from the build contract evaluate to (0, 0)") {
    // Pinning the enumeration that motivated the responder-refined scheme:
    // grid_max = {0.5, 1, 1.5, 2}, grid_min = {0.5, 1, 1.2, 1.5, 2} yields
    // upper = lower = 0, not (1, 0): s = 1.2 defeats every maximizer point.
    const auto lower = [](double t) { return t > 1.0 ? 1.0 : 0.0; };
    const auto upper = [](double s) { return s <= 1.0 ? 1.0 : 0.0; };
    DeterministicGameSpec spec;
    spec.lower = lower;
    spec.tie = lower;
    spec.upper = upper;
    spec.grid_max = {0.5, 1.0, 1.5, 2.0};
    spec.grid_min = {0.5, 1.0, 1.2, 1.5, 2.0};
    const DeterministicGameValue val = deterministic_game_value(spec);
    CHECK(val.upper == 0.0);
    CHECK(val.lower == 0.0);
}
