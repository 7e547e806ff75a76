#pragma once

// The single-provider, multi-user pricing game under expected utility.
//
// The provider offers rate b at price r(b) and splits its bandwidth among the
// users it serves. User i accepts when h_i(b) * P(B_i > b | BW_i) > r(b); the
// provider pays c1 * b + c3 * BW_i for every offered user.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "prospect_pricing/channel.hpp"
#include "prospect_pricing/weighting.hpp"

namespace pricing::game {

/// coefficient * (rate_bps * 1e-3)^exponent, i.e. a power law in kbps.
struct PowerLaw {
  double coefficient = 1.0;
  double exponent = 1.0;

  double operator()(double rate_bps) const;
  /// Requires coefficient > 0 and 0 < exponent <= 1 (increasing, concave).
  void validate(const char* what) const;

  friend bool operator==(const PowerLaw&, const PowerLaw&) = default;
};

/// Provider price as a function of rate, r(b).
struct PricingFunction : PowerLaw {};
/// User benefit of guaranteed service at rate b, h_i(b). h_i(0) = 0.
struct BenefitFunction : PowerLaw {};

struct CostModel {
  double per_rate = 0.0;       // c1, currency per bps
  double per_bandwidth = 0.0;  // c3, currency per Hz

  double user_cost(double rate_bps, double bandwidth_hz) const {
    return per_rate * rate_bps + per_bandwidth * bandwidth_hz;
  }
  void validate() const;
};

struct User {
  channel::UserChannel channel;
  BenefitFunction benefit;
};

struct Scenario {
  std::vector<User> users;
  PricingFunction pricing;
  CostModel cost;
  double total_bandwidth_hz = 0.0;
  std::uint64_t rng_seed = 0;

  std::size_t size() const { return users.size(); }
  void validate() const;
};

/// Rate, price and per-user bandwidth (indexed like Scenario::users; zero for
/// users that are not offered the service).
struct Offer {
  double rate_bps = 0.0;
  double price = 0.0;
  std::vector<double> allocation;
};

/// Indices of the users with a positive allocation.
std::vector<std::size_t> offered_users(const Offer& offer);

/// Guarantee of `user` under `offer`; zero when the user has no bandwidth.
double offer_guarantee(const Offer& offer, std::size_t user, const Scenario& scenario);

/// p * (h_i(b) * w(F_i) - price). With the identity weighting this is the
/// expected utility of the user.
double user_utility(double accept_prob, const Offer& offer, std::size_t user,
                    const Scenario& scenario, const weighting::WeightingModel& model);

/// Expected provider utility. `accept_probs` runs over offered_users(offer).
double sp_utility(std::span<const double> accept_probs, const Offer& offer,
                  const Scenario& scenario);

/// BW_i(b): the least bandwidth at which user i is exactly indifferent at the
/// scenario price. Throws channel::UnattainableGuarantee when r(b) / h_i(b)
/// cannot be reached at rate b.
double min_bandwidth_for_user(double rate_bps, std::size_t user, const Scenario& scenario);

/// As min_bandwidth_for_user, but +inf instead of throwing.
double min_bandwidth_or_inf(double rate_bps, std::size_t user, const Scenario& scenario);

/// Rate search range shared by the solver and the oracle.
inline constexpr double kMinRateBps = 1e2;
inline constexpr double kMaxRateBps = 1e11;
/// Per-user padding over the minimum bandwidth, as a fraction of the total.
inline constexpr double kAllocationPadding = 1e-6;
/// Relative slack applied to the strict total-bandwidth inequality.
inline constexpr double kFeasibilitySlack = 1e-9;

/// argmax_b r(b) - c1 * b over the rate search range.
double unconstrained_rate(const PricingFunction& pricing, const CostModel& cost);

/// True when n users with combined minimum bandwidth `required_hz` fit.
bool fits_total_bandwidth(double required_hz, std::size_t n, double total_hz);

struct RevenueByCount {
  std::size_t served = 0;
  double rate_bps = 0.0;
  double revenue = 0.0;
  bool feasible = false;
  bool disqualified = false;  // a larger set also fits at this rate
};

struct NashResult {
  bool has_equilibrium = false;
  double rate_bps = 0.0;
  std::vector<std::size_t> served;  // ascending user index
  std::vector<double> allocation;   // per scenario user
  double price = 0.0;
  double sp_revenue = 0.0;
  double total_bandwidth_hz = 0.0;
  std::vector<RevenueByCount> per_count;  // from |S| down to 1
  double unconstrained_rate_bps = 0.0;
  bool profitable = false;  // r(b) > c1 b + c3 BW_max at the unconstrained rate

  Offer offer() const { return {rate_bps, price, allocation}; }
};

/// Revenue-maximizing pure-strategy equilibrium. For every served-set size n
/// the provider maximizes n (r(b) - c1 b) subject to the n cheapest users
/// fitting in the total bandwidth; sizes for which a larger set also fits are
/// dropped. The chosen users split the whole bandwidth in proportion to their
/// minimum requirements.
NashResult solve_nash(const Scenario& scenario);

class InstanceTooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exhaustive search over served subsets, a log-spaced rate grid and a uniform
/// per-user bandwidth grid, both with `grid_resolution` points. Acceptance is
/// checked directly on the guarantee, without inverting it. Up to four users.
NashResult brute_force_nash(const Scenario& scenario, std::size_t grid_resolution);

}  // namespace pricing::game
