#include "ccbond/simulate.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ccb {

ArrivalPath::ArrivalPath(const ModelParams& p, double x0, std::uint64_t seed,
                         std::int64_t path_index)
    : p_(p), x0_(x0), rng_(seed, path_index) {
    if (!(x0 > 0.0)) throw NonPositiveXError(x0);
    drift_ = p.r - p.q - 0.5 * p.sigma * p.sigma;
    times_.reserve(16);
    prices_.reserve(16);
}

bool ArrivalPath::ensure(std::int64_t n) {
    while (size() < n) {
        if (size() >= n_max) {
            truncated_ = true;
            return false;
        }
        const double gap = rng_.exponential(p_.lambda);
        const double z = rng_.normal();
        const double t_prev = times_.empty() ? 0.0 : times_.back();
        const double x_prev = prices_.empty() ? x0_ : prices_.back();
        times_.push_back(t_prev + gap);
        prices_.push_back(x_prev * std::exp(drift_ * gap + p_.sigma * std::sqrt(gap) * z));
    }
    return true;
}

namespace {

bool stops_at(const StoppingStrategy& s, std::int64_t n, double price) {
    switch (s.kind) {
        case StoppingStrategy::Kind::Threshold:
            return price >= s.level;
        case StoppingStrategy::Kind::FixedArrival:
            return n >= s.arrival;
        case StoppingStrategy::Kind::Never:
            return false;
    }
    return false;
}

}  // namespace

double evaluate_payoff(ArrivalPath& path, const StoppingStrategy& firm,
                       const StoppingStrategy& holder, bool modified) {
    const ModelParams& p = path.params();
    const double cr = p.c / p.r;
    // Once e^{-rT} (c/r + K + gamma X) drops below this, no remaining payment
    // can move the payoff at double precision relative to its scale.
    const double exit_tol = 1e-13 * std::fmax(cr + p.K + p.gamma * path.x0(), 1e-3);

    for (std::int64_t n = 1;; ++n) {
        if (!path.ensure(n)) throw TruncatedError(ArrivalPath::n_max);
        const double t = path.time(n);
        const double x = path.price(n);
        const bool holder_stops = stops_at(holder, n, x);
        const bool firm_stops = stops_at(firm, n, x);
        const double disc = std::exp(-p.r * t);
        if (holder_stops) {
            // Simultaneous stops pay the holder leg as well.
            return cr * (1.0 - disc) + disc * p.gamma * x;
        }
        if (firm_stops) {
            const double paid = modified ? std::fmax(p.gamma * x, p.K) : p.K;
            return cr * (1.0 - disc) + disc * paid;
        }
        if (disc * (cr + p.K + p.gamma * x) <= exit_tol) {
            // Indistinguishable from the game in which nobody ever stops.
            return cr;
        }
    }
}

double pairwise_sum(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n <= 64) {
        double acc = 0.0;
        for (double v : xs) acc += v;
        return acc;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

std::int64_t collect_payoffs(const ModelParams& p, double x0, const StoppingStrategy& firm,
                             const StoppingStrategy& holder, bool modified, std::uint64_t seed,
                             std::span<double> out) {
    const std::int64_t n = static_cast<std::int64_t>(out.size());
    std::int64_t truncated = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(+ : truncated)
#endif
    for (std::int64_t i = 0; i < n; ++i) {
        ArrivalPath path(p, x0, seed, i);
        try {
            out[static_cast<std::size_t>(i)] = evaluate_payoff(path, firm, holder, modified);
        } catch (const TruncatedError&) {
            ++truncated;
            // Best available stand-in: coupons collected so far.
            const double t_last = path.time(path.size());
            out[static_cast<std::size_t>(i)] = p.c / p.r * (1.0 - std::exp(-p.r * t_last));
        }
    }
    return truncated;
}

EstimatorResult summarize(std::span<const double> values, std::uint64_t seed,
                          std::int64_t n_truncated) {
    const std::int64_t n = static_cast<std::int64_t>(values.size());
    EstimatorResult res;
    res.n_paths = n;
    res.seed = seed;
    res.n_truncated = n_truncated;
    if (n == 0) return res;
    res.mean = pairwise_sum(values) / static_cast<double>(n);
    if (n > 1) {
        std::vector<double> sq(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double d = values[i] - res.mean;
            sq[i] = d * d;
        }
        const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
        res.stderr_ = std::sqrt(var / static_cast<double>(n));
    }
    return res;
}

EstimatorResult estimate_J(const ModelParams& p, double x0, const StoppingStrategy& firm,
                           const StoppingStrategy& holder, bool modified, std::int64_t n_paths,
                           std::uint64_t seed) {
    validate_params(p);
    std::vector<double> values(static_cast<std::size_t>(n_paths));
    const std::int64_t truncated = collect_payoffs(p, x0, firm, holder, modified, seed, values);
    if (truncated * 1000 > n_paths)
        throw TruncatedError(ArrivalPath::n_max);
    return summarize(values, seed, truncated);
}

DeterministicGameValue deterministic_game_value(const DeterministicGameSpec& spec) {
    if (spec.grid_max.empty() || spec.grid_min.empty()) throw EmptyGridError();

    const auto payoff = [&spec](double s, double t) {
        if (t < s) return spec.lower(t);
        if (s < t) return spec.upper(s);
        return spec.tie(t);
    };

    DeterministicGameValue v;
    bool first_outer = true;
    for (double s : spec.grid_min) {
        double best = 0.0;
        bool first = true;
        for (double t : spec.grid_max) {
            const double j = payoff(s, t);
            if (first || j > best) best = j;
            first = false;
        }
        if (first_outer || best < v.upper) v.upper = best;
        first_outer = false;
    }
    first_outer = true;
    for (double t : spec.grid_max) {
        double worst = 0.0;
        bool first = true;
        for (double s : spec.grid_min) {
            const double j = payoff(s, t);
            if (first || j < worst) worst = j;
            first = false;
        }
        if (first_outer || worst > v.lower) v.lower = worst;
        first_outer = false;
    }
    return v;
}

}  // namespace ccb
