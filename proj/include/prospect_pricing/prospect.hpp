#pragma once

// What probability weighting does to an equilibrium computed under expected
// utility, and the re-pricing strategies that recover the provider's revenue.
//
// All functions take the EUT equilibrium as given (rate b*, served set S,
// allocation, BW_max) and re-evaluate acceptance with the weighted guarantee
// h_i(b) * w(F_i). Users are said to accept when that weighted willingness
// strictly exceeds the price.

#include <cstddef>
#include <string_view>
#include <vector>

#include "prospect_pricing/game.hpp"
#include "prospect_pricing/numeric.hpp"
#include "prospect_pricing/weighting.hpp"

namespace pricing::prospect {

/// Amount shaved off a computed price, relative to r(b*), so that acceptance
/// holds strictly.
inline constexpr double kPriceEpsilon = 1e-9;

struct RrmConstraints {
  bool same_served_set = true;
  bool same_rate = true;
  bool same_total_bandwidth = true;
  bool same_allocation = true;

  bool strict() const {
    return same_served_set && same_rate && same_total_bandwidth && same_allocation;
  }
};

enum class Strategy {
  Preservation,
  StrictPricing,
  Reallocation,
  AdmissionControl,
  BandwidthExpansion,
  RateControl,
  NoPricingExpansion,
};

std::string_view strategy_name(Strategy s);

struct StrategyOutcome {
  Strategy strategy = Strategy::Preservation;
  bool feasible = false;
  double recovered_revenue = 0.0;  // min(EUT revenue, max_revenue)
  double revenue_loss = 0.0;       // EUT revenue - recovered_revenue
  double max_revenue = 0.0;        // best revenue with the price left free
  double new_price = 0.0;
  double new_rate_bps = 0.0;
  double new_total_bandwidth_hz = 0.0;
  std::vector<std::size_t> served;
  std::vector<double> allocation;  // per scenario user
  double min_bandwidth_threshold_hz = numeric::kInf;
  // Expansion only: least total bandwidth at which the EUT revenue is met
  // under the re-priced game.
  double required_pt_bandwidth_hz = numeric::kInf;
};

/// Which of the four RRM constraints an outcome keeps relative to `ne`.
RrmConstraints rrm_relation(const game::NashResult& ne, const StrategyOutcome& pt,
                            double relative_tolerance = 1e-12);

/// F_i^{-1}(w^{-1}(x / h_i(b)); b): bandwidth at which user i's weighted
/// willingness reaches x. 0 for x <= 0, +inf when x is out of reach.
double weighted_min_bandwidth(double rate_bps, double willingness, std::size_t user,
                              const game::Scenario& scenario,
                              const weighting::WeightingModel& model);

/// h_i(b) * w(F_i(b; bw)).
double weighted_willingness(double rate_bps, double bandwidth_hz, std::size_t user,
                            const game::Scenario& scenario,
                            const weighting::WeightingModel& model);

/// Largest willingness any bandwidth can buy for every listed user:
/// min_i h_i(b) w(sup_bw F_i(b; bw)).
double willingness_ceiling(double rate_bps, const std::vector<std::size_t>& users,
                           const game::Scenario& scenario,
                           const weighting::WeightingModel& model);

struct Equalization {
  double willingness = 0.0;        // common level reached by every user
  std::vector<double> allocation;  // per scenario user, sums to the total
};

/// Splits `total_hz` among `users` so that their weighted willingness is
/// equal, which maximizes the smallest of them.
Equalization equalize_willingness(double rate_bps, const std::vector<std::size_t>& users,
                                  double total_hz, const game::Scenario& scenario,
                                  const weighting::WeightingModel& model);

struct UserPreservation {
  std::size_t user = 0;
  double lambda = 0.0;  // w^{-1}(r(b*) / h_i(b*))
  double required_bandwidth_hz = 0.0;
  bool recoverable = true;  // lambda below the guarantee supremum
  bool passes = false;
};

struct PreservationReport {
  std::vector<UserPreservation> users;
  bool preserved = false;
  double aggregate_required_hz = 0.0;
  bool aggregate_sufficient = false;  // aggregate_required_hz < BW_max
};

/// The EUT equilibrium survives weighting iff every served user's allocation
/// strictly exceeds the bandwidth at which its weighted willingness equals
/// the EUT price.
PreservationReport ne_preserved(const game::Scenario& scenario, const game::NashResult& ne,
                                const weighting::WeightingModel& model);

struct LossResult {
  double loss = 0.0;           // per-user price cut, >= 0
  double total_loss = 0.0;     // |S| * loss
  double willingness = 0.0;    // smallest weighted willingness after pricing
  double price = 0.0;
  std::vector<double> allocation;
  std::vector<std::size_t> unrecoverable;
};

/// All four RRM constraints kept: the price drops to the smallest weighted
/// willingness under the EUT allocation.
LossResult loss_strict_rrm(const game::Scenario& scenario, const game::NashResult& ne,
                           const weighting::WeightingModel& model);

/// Allocation freed, everything else kept. Never worse than loss_strict_rrm.
LossResult loss_with_reallocation(const game::Scenario& scenario, const game::NashResult& ne,
                                  const weighting::WeightingModel& model);

/// The two losses above as strategy outcomes, for side-by-side comparison.
StrategyOutcome strict_pricing(const game::Scenario& scenario, const game::NashResult& ne,
                               const weighting::WeightingModel& model);
StrategyOutcome reallocation_pricing(const game::Scenario& scenario,
                                     const game::NashResult& ne,
                                     const weighting::WeightingModel& model);

/// Serve exactly |S| - drops users at the revenue-preserving price.
StrategyOutcome admission_control_fixed(const game::Scenario& scenario,
                                        const game::NashResult& ne,
                                        const weighting::WeightingModel& model,
                                        std::size_t drops);

/// Best of admission_control_fixed over 0..max_drops: the feasible candidate
/// with the smallest threshold, or the one with the most revenue when none is
/// feasible. Throws std::invalid_argument unless max_drops < |S|.
StrategyOutcome admission_control(const game::Scenario& scenario, const game::NashResult& ne,
                                  const weighting::WeightingModel& model,
                                  std::size_t max_drops);

StrategyOutcome bandwidth_expansion(const game::Scenario& scenario, const game::NashResult& ne,
                                    const weighting::WeightingModel& model);

struct RateControlOptions {
  // Restrict the new rate to h_i(b) - c1 b < r(b*) - c1 b* for every user.
  bool benefit_margin_constraint = false;
};

StrategyOutcome rate_control(const game::Scenario& scenario, const game::NashResult& ne,
                             const weighting::WeightingModel& model,
                             const RateControlOptions& options = {});

/// Keep the EUT price and buy whatever bandwidth the weighted users need.
StrategyOutcome no_pricing_expansion(const game::Scenario& scenario,
                                     const game::NashResult& ne,
                                     const weighting::WeightingModel& model);

struct MinAlphaOptions {
  double alpha_floor = 0.01;
  double tolerance = 1e-4;
  std::size_t admission_drops = 1;
  RateControlOptions rate_control;
};

struct MinAlphaResult {
  double alpha = 1.0;
  bool never_infeasible = false;  // recovers down to the floor
  bool no_recovery = false;       // fails even at alpha = 1
  bool monotone = true;           // coarse-grid predicate never flipped back
};

/// Threshold below BW_max under `strategy` at the given weighting.
bool strategy_recovers(Strategy strategy, const game::Scenario& scenario,
                       const game::NashResult& ne, const weighting::WeightingModel& model,
                       const MinAlphaOptions& options = {});

/// Smallest alpha at which `strategy` still recovers the EUT revenue.
/// Strategies supported: Preservation, AdmissionControl, BandwidthExpansion,
/// RateControl, NoPricingExpansion.
MinAlphaResult min_alpha(Strategy strategy, const game::Scenario& scenario,
                         const game::NashResult& ne, const MinAlphaOptions& options = {});

}  // namespace pricing::prospect
