#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ccbond/closed_form.hpp"
#include "ccbond/model.hpp"
#include "ccbond/rng.hpp"

namespace ccb {

/// One realization of the Poisson decision clock together with the share
/// price observed at each arrival.  The price is advanced with the exact
/// lognormal transition over each exponential gap, so there is no
/// discretization bias.  Arrivals are generated lazily via ensure().
class ArrivalPath {
  public:
    static constexpr std::int64_t n_max = 100000;

    ArrivalPath(const ModelParams& p, double x0, std::uint64_t seed, std::int64_t path_index);

    /// Extends the path to at least n arrivals (capped at n_max).
    /// Returns false if the cap was hit before reaching n.
    bool ensure(std::int64_t n);

    std::int64_t size() const { return static_cast<std::int64_t>(times_.size()); }
    double time(std::int64_t n) const { return times_[static_cast<std::size_t>(n - 1)]; }
    double price(std::int64_t n) const { return prices_[static_cast<std::size_t>(n - 1)]; }
    bool truncated() const { return truncated_; }
    double x0() const { return x0_; }
    const ModelParams& params() const { return p_; }

  private:
    ModelParams p_;
    double x0_;
    double drift_;  // r - q - sigma^2/2
    PathRng rng_;
    std::vector<double> times_;
    std::vector<double> prices_;
    bool truncated_ = false;
};

/// Stopping rule a player commits to.  All rules act only at clock arrivals.
struct StoppingStrategy {
    enum class Kind { Threshold, FixedArrival, Never };
    Kind kind = Kind::Never;
    double level = 0.0;  ///< Threshold: stop at the first arrival with X >= level
    int arrival = 0;     ///< FixedArrival: stop at the k-th arrival (k >= 1)

    static StoppingStrategy threshold(double level) {
        return {Kind::Threshold, level, 0};
    }
    static StoppingStrategy fixed_arrival(int k) { return {Kind::FixedArrival, 0.0, k}; }
    static StoppingStrategy never() { return {Kind::Never, 0.0, 0}; }
    static StoppingStrategy from_descriptor(const StrategyDescriptor& d) {
        if (d.kind == StrategyDescriptor::Kind::Threshold) return threshold(d.level);
        return fixed_arrival(d.arrival);
    }
};

/// Discounted payoff of one played-out game:
///   coupons c e^{-ru} up to the first stop, then
///     - holder stops first or simultaneously: gamma X at the stop,
///     - issuer stops strictly first: K (or max{gamma X, K} when
///       `modified` is set).
/// Ties always pay the holder leg.
///
/// When neither rule has stopped by the time the discount factor makes every
/// conceivable remaining payment smaller than ~1e-13 of the payoff scale,
/// the game can no longer be distinguished from one in which nobody ever
/// stops, and the exact perpetuity limit c/r is returned.  Paths are only
/// reported truncated when the hard cap n_max is exhausted while payments
/// could still matter; evaluate_payoff then throws TruncatedError.
double evaluate_payoff(ArrivalPath& path, const StoppingStrategy& firm,
                       const StoppingStrategy& holder, bool modified);

/// Monte Carlo estimate with deterministic aggregation.
struct EstimatorResult {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::int64_t n_paths = 0;
    std::uint64_t seed = 0;
    std::int64_t n_truncated = 0;
};

/// Fixed-shape pairwise sum: the reduction tree depends only on the length,
/// so the result is bit-identical however the inputs were produced.
double pairwise_sum(std::span<const double> xs);

/// Evaluates the payoff on paths 0..n-1 into `out` (out.size() == n).
/// Truncated paths store their coupon-only value and are counted in the
/// return value.  Safe to call from a parallel loop per disjoint slice.
std::int64_t collect_payoffs(const ModelParams& p, double x0, const StoppingStrategy& firm,
                             const StoppingStrategy& holder, bool modified, std::uint64_t seed,
                             std::span<double> out);

/// Mean and standard error of the discounted game payoff under the given
/// strategy pair.  Deterministic in (seed, n_paths) independent of thread
/// count.  Throws TruncatedError if more than 0.1% of paths truncate.
EstimatorResult estimate_J(const ModelParams& p, double x0, const StoppingStrategy& firm,
                           const StoppingStrategy& holder, bool modified, std::int64_t n_paths,
                           std::uint64_t seed);

/// Mean/SE of per-path values already collected into a slot array.
EstimatorResult summarize(std::span<const double> values, std::uint64_t seed,
                          std::int64_t n_truncated);

/// Deterministic two-player stopping game on finite candidate-time grids.
/// Payoff when the minimizer stops at s and the maximizer at t:
///     t < s : lower(t),   s < t : upper(s),   t == s : tie(t).
struct DeterministicGameSpec {
    std::function<double(double)> lower;
    std::function<double(double)> tie;
    std::function<double(double)> upper;
    std::vector<double> grid_max;  ///< maximizer's candidate times
    std::vector<double> grid_min;  ///< minimizer's candidate times
};

struct DeterministicGameValue {
    double upper = 0.0;  ///< min over grid_min of max over grid_max
    double lower = 0.0;  ///< max over grid_max of min over grid_min
};

/// Exhaustive enumeration of both orderings.  Throws EmptyGridError if
/// either grid is empty.
DeterministicGameValue deterministic_game_value(const DeterministicGameSpec& spec);

}  // namespace ccb
