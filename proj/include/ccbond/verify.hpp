#pragma once

#include <string>
#include <vector>

#include "ccbond/closed_form.hpp"
#include "ccbond/simulate.hpp"

namespace ccb {

/// One deviation row of the saddle battery.  `deficit` is the paired-path
/// mean advantage of the equilibrium center over this deviation, oriented
/// so that a genuine saddle point keeps it non-negative:
///   holder rows:  E[J~(center) - J~(firm*, tau_alt)]
///   issuer rows:  E[J(sigma_alt, holder*) - J(center)]
/// The row fails when deficit < -3 * deficit_se.
struct BatteryRow {
    bool firm_side = false;
    StoppingStrategy strategy;
    double mean = 0.0;
    double deficit = 0.0;
    double deficit_se = 0.0;
    bool pass = false;
};

struct SaddleReport {
    RegimeTag regime = RegimeTag::MidK;
    StoppingStrategy firm_center, holder_center;
    EstimatorResult center_modified;    ///< payoff with max{gamma X, K} on issuer stops
    EstimatorResult center_unmodified;  ///< contractual payoff
    double pair_gap_mean = 0.0;  ///< modified - unmodified on common paths
    double pair_gap_se = 0.0;
    std::vector<BatteryRow> rows;
    bool pass = false;
};

/// Builds the default deviation grids for both players: 13 thresholds
/// geometric on [0.2, 5] times the player's equilibrium scale plus fixed
/// stops at the first four arrivals.
struct DeviationGrids {
    std::vector<StoppingStrategy> firm;
    std::vector<StoppingStrategy> holder;
};
DeviationGrids default_deviation_grids(const PricingSolution& sol);

/// Monte Carlo saddle-point check with common random numbers: verifies that
/// (i) the modified and contractual payoffs agree at the center,
/// (ii) no holder deviation improves the modified payoff, and
/// (iii) no issuer deviation lowers the contractual payoff,
/// all at the 3-standard-error level on paired paths.
SaddleReport saddle_battery(const ModelParams& p, double x0, const StoppingStrategy& firm_center,
                            const StoppingStrategy& holder_center, const DeviationGrids& grids,
                            std::int64_t n_paths, std::uint64_t seed);

/// Convenience overload: centers and grids from the closed-form solution.
SaddleReport saddle_battery(const ModelParams& p, double x0, std::int64_t n_paths,
                            std::uint64_t seed);

enum class DppSide { Bondholder, Firm };

/// Dynamic-programming identity check at the Poisson clock: with
/// eta = (optimal stop) /\ T_k, the closed-form value must equal
///   E[ coupons to eta + stopped leg at eta (if the optimal rule fired)
///                     + discounted closed-form value at X_eta otherwise ].
/// Bondholder side uses v_co with conversion leg gamma X; issuer side uses
/// the middle-regime curve with call leg max{gamma X, K} (requires MidK).
struct DppReport {
    DppSide side = DppSide::Bondholder;
    int eta_cap = 1;
    double lhs = 0.0;
    EstimatorResult rhs;
    double continuation_fraction = 0.0;  ///< paths where eta = T_k
    bool pass = false;
};
DppReport dpp_check(const ModelParams& p, double x0, DppSide side, int eta_cap,
                    std::int64_t n_paths, std::uint64_t seed);

/// Randomized property sweep over the analytic claims (root residuals and
/// bounds, threshold bounds, regime facts, value/obstacle orderings,
/// smooth-fit residuals).  Zero violations expected at tolerance 1e-9.
struct SweepViolation {
    std::string claim;
    ModelParams p;
    double margin = 0.0;
};
struct SweepReport {
    int n_draws = 0;
    std::vector<SweepViolation> violations;
};
SweepReport property_sweep(int n_draws, std::uint64_t seed);

/// Claim checks for one parameter draw with injectable roots, so tests can
/// corrupt a root and confirm the sweep notices.
std::vector<SweepViolation> sweep_check_draw(const ModelParams& p, const RootPair& roots0,
                                             const RootPair& roots_lambda);

/// Conversion threshold recomputed from explicitly supplied roots.
double threshold_co_from_roots(const ModelParams& p, double alpha0, double beta_lambda);

/// Large-rate consistency: along an increasing lambda ladder the
/// constrained solution must approach the unrestricted one.
struct AsymptoticsRow {
    double lambda = 0.0;
    RegimeTag regime = RegimeTag::MidK;
    double x_co_lambda = 0.0;
    double x_ca_lambda = 0.0;  ///< NaN unless the rung is MidK
    double value_gap_max = 0.0;  ///< max relative gap over the sample prices
};
struct AsymptoticsReport {
    std::vector<AsymptoticsRow> rows;
    double x_co_unconstrained = 0.0;
    bool co_gap_decreasing = false;
    double co_gap_final = 0.0;     ///< relative threshold gap at the last rung
    double ca_gap_final = 0.0;     ///< relative |x_ca - K/gamma|, NaN unless final rung MidK
    double value_gap_final = 0.0;
    bool pass = false;
};

/// `ladder` must be strictly increasing with at least 5 rungs; `xs` are the
/// prices the value gap is sampled at (defaults scale with the unrestricted
/// conversion threshold when empty).
AsymptoticsReport asymptotics_check(const ModelParams& p, std::vector<double> ladder,
                                    std::vector<double> xs = {});

}  // namespace ccb
