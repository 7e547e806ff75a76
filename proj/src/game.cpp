#include "prospect_pricing/game.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "prospect_pricing/numeric.hpp"

namespace pricing::game {

namespace {

constexpr double kInf = numeric::kInf;
constexpr std::size_t kSolverGridPoints = 600;
constexpr std::size_t kMaxBruteForceUsers = 4;
constexpr double kOracleMinRateBps = 1e3;
constexpr double kOracleMaxRateBps = 1e9;

std::vector<double> requirements_at(double rate_bps, const Scenario& scenario) {
  std::vector<double> req(scenario.size());
  for (std::size_t i = 0; i < scenario.size(); ++i)
    req[i] = min_bandwidth_or_inf(rate_bps, i, scenario);
  return req;
}

// Users ordered by requirement, ties by index.
std::vector<std::size_t> cheapest_order(const std::vector<double>& req) {
  std::vector<std::size_t> order(req.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return req[a] < req[b]; });
  return order;
}

double cheapest_sum(const std::vector<double>& req, std::size_t n) {
  std::vector<double> sorted = req;
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += sorted[i];
  return sum;
}

bool count_fits(double rate_bps, std::size_t n, const Scenario& scenario) {
  if (n == 0) return true;
  if (n > scenario.size()) return false;
  return fits_total_bandwidth(cheapest_sum(requirements_at(rate_bps, scenario), n), n,
                              scenario.total_bandwidth_hz);
}

double margin_per_user(double rate_bps, const Scenario& scenario) {
  return scenario.pricing(rate_bps) - scenario.cost.per_rate * rate_bps;
}

// Splits `total` over `users` in proportion to `req`.
std::vector<double> proportional_allocation(const std::vector<std::size_t>& users,
                                            const std::vector<double>& req,
                                            std::size_t size, double total) {
  std::vector<double> allocation(size, 0.0);
  double sum = 0.0;
  for (std::size_t i : users) sum += req[i];
  for (std::size_t i : users) allocation[i] = req[i] * total / sum;
  return allocation;
}

// Best rate for a served-set size: coarse log grid, then golden section on the
// feasible part of the bracket around the best grid point.
// `sorted_req[k]` holds the requirements at grid[k] in ascending order.
RevenueByCount best_rate_for_count(std::size_t n, const Scenario& scenario,
                                   const std::vector<double>& grid,
                                   const std::vector<std::vector<double>>& sorted_req) {
  RevenueByCount out;
  out.served = n;
  const auto fits = [&](double b) { return count_fits(b, n, scenario); };
  const auto objective = [&](double b) {
    return static_cast<double>(n) * margin_per_user(b, scenario);
  };

  std::vector<char> feasible(grid.size());
  std::size_t best = grid.size();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double sum = std::accumulate(sorted_req[k].begin(),
                                       sorted_req[k].begin() + static_cast<std::ptrdiff_t>(n), 0.0);
    feasible[k] = fits_total_bandwidth(sum, n, scenario.total_bandwidth_hz);
    if (feasible[k] && (best == grid.size() || objective(grid[k]) > objective(grid[best])))
      best = k;
  }
  if (best == grid.size()) return out;

  double lo = grid[best > 0 ? best - 1 : best];
  double hi = grid[best + 1 < grid.size() ? best + 1 : best];
  if (best > 0 && !feasible[best - 1]) {
    // Smallest feasible rate between the two grid points.
    lo = numeric::bisect_threshold_log(fits, grid[best - 1], grid[best], 1e-13).above;
  }
  if (best + 1 < grid.size() && !feasible[best + 1]) {
    hi = numeric::bisect_threshold_log([&](double b) { return !fits(b); }, grid[best],
                                       grid[best + 1], 1e-13)
             .below;
  }
  numeric::Extremum e{grid[best], objective(grid[best])};
  if (hi > lo) {
    const numeric::Extremum g = numeric::golden_section_max_log(
        [&](double b) { return fits(b) ? objective(b) : -kInf; }, lo, hi, 1e-12);
    if (g.value > e.value) e = g;
  }
  out.feasible = true;
  out.rate_bps = e.argument;
  out.revenue = e.value - scenario.cost.per_bandwidth * scenario.total_bandwidth_hz;
  return out;
}

}  // namespace

double PowerLaw::operator()(double rate_bps) const {
  if (rate_bps <= 0.0) return 0.0;
  return coefficient * std::pow(rate_bps * 1e-3, exponent);
}

void PowerLaw::validate(const char* what) const {
  if (!(coefficient > 0.0))
    throw std::invalid_argument(std::string(what) + " coefficient must be positive");
  if (!(exponent > 0.0 && exponent <= 1.0))
    throw std::invalid_argument(std::string(what) + " exponent must lie in (0, 1]");
}

void CostModel::validate() const {
  if (!(per_rate >= 0.0) || !(per_bandwidth >= 0.0))
    throw std::invalid_argument("cost coefficients must be non-negative");
}

void Scenario::validate() const {
  if (users.empty()) throw std::invalid_argument("scenario has no users");
  if (!(total_bandwidth_hz > 0.0))
    throw std::invalid_argument("total bandwidth must be positive");
  pricing.validate("pricing");
  cost.validate();
  for (const User& u : users) u.benefit.validate("benefit");
}

std::vector<std::size_t> offered_users(const Offer& offer) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < offer.allocation.size(); ++i)
    if (offer.allocation[i] > 0.0) out.push_back(i);
  return out;
}

double offer_guarantee(const Offer& offer, std::size_t user, const Scenario& scenario) {
  const double bw = offer.allocation.at(user);
  if (bw <= 0.0) return offer.rate_bps == 0.0 ? 1.0 : 0.0;
  return channel::service_guarantee(offer.rate_bps, bw, scenario.users.at(user).channel);
}

double user_utility(double accept_prob, const Offer& offer, std::size_t user,
                    const Scenario& scenario, const weighting::WeightingModel& model) {
  if (accept_prob == 0.0) return 0.0;
  const double benefit = scenario.users.at(user).benefit(offer.rate_bps);
  const double perceived = weighting::weight(offer_guarantee(offer, user, scenario), model);
  return accept_prob * (benefit * perceived - offer.price);
}

double sp_utility(std::span<const double> accept_probs, const Offer& offer,
                  const Scenario& scenario) {
  const std::vector<std::size_t> users = offered_users(offer);
  if (accept_probs.size() != users.size())
    throw std::invalid_argument("one acceptance probability per offered user required");
  double total = 0.0;
  for (std::size_t k = 0; k < users.size(); ++k) {
    const double cost = scenario.cost.user_cost(offer.rate_bps, offer.allocation[users[k]]);
    total += accept_probs[k] * (offer.price - cost) + (1.0 - accept_probs[k]) * (-cost);
  }
  return total;
}

double min_bandwidth_for_user(double rate_bps, std::size_t user, const Scenario& scenario) {
  const User& u = scenario.users.at(user);
  const double target = scenario.pricing(rate_bps) / u.benefit(rate_bps);
  if (!(target < 1.0))
    throw channel::UnattainableGuarantee("price exceeds the benefit of certain service");
  return channel::min_bandwidth(rate_bps, target, u.channel);
}

double min_bandwidth_or_inf(double rate_bps, std::size_t user, const Scenario& scenario) {
  try {
    return min_bandwidth_for_user(rate_bps, user, scenario);
  } catch (const channel::UnattainableGuarantee&) {
    return kInf;
  }
}

double unconstrained_rate(const PricingFunction& pricing, const CostModel& cost) {
  const auto margin = [&](double b) { return pricing(b) - cost.per_rate * b; };
  const std::vector<double> grid = numeric::log_space(kMinRateBps, kMaxRateBps, kSolverGridPoints);
  std::size_t best = 0;
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (margin(grid[k]) > margin(grid[best])) best = k;
  const double lo = grid[best > 0 ? best - 1 : 0];
  const double hi = grid[std::min(best + 1, grid.size() - 1)];
  return numeric::golden_section_max_log(margin, lo, hi, 1e-13).argument;
}

bool fits_total_bandwidth(double required_hz, std::size_t n, double total_hz) {
  const double padded = required_hz + static_cast<double>(n) * kAllocationPadding * total_hz;
  return padded < total_hz * (1.0 + kFeasibilitySlack);
}

NashResult solve_nash(const Scenario& scenario) {
  scenario.validate();
  const std::size_t n_users = scenario.size();
  const std::vector<double> grid =
      numeric::log_space(kMinRateBps, kMaxRateBps, kSolverGridPoints);

  NashResult result;
  result.total_bandwidth_hz = scenario.total_bandwidth_hz;
  result.allocation.assign(n_users, 0.0);
  result.unconstrained_rate_bps = unconstrained_rate(scenario.pricing, scenario.cost);
  result.profitable = margin_per_user(result.unconstrained_rate_bps, scenario) >
                      scenario.cost.per_bandwidth * scenario.total_bandwidth_hz;

  std::vector<std::vector<double>> sorted_req(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    sorted_req[k] = requirements_at(grid[k], scenario);
    std::sort(sorted_req[k].begin(), sorted_req[k].end());
  }

  for (std::size_t n = n_users; n >= 1; --n) {
    RevenueByCount entry = best_rate_for_count(n, scenario, grid, sorted_req);
    if (entry.feasible && n < n_users && count_fits(entry.rate_bps, n + 1, scenario)) {
      entry.disqualified = true;
      entry.revenue = 0.0;
    }
    result.per_count.push_back(entry);
  }

  const RevenueByCount* best = nullptr;
  for (const RevenueByCount& e : result.per_count) {
    if (!e.feasible || e.disqualified) continue;
    if (best == nullptr || e.revenue > best->revenue) best = &e;
  }
  if (best == nullptr || !(best->revenue > 0.0)) return result;

  const std::vector<double> req = requirements_at(best->rate_bps, scenario);
  std::vector<std::size_t> served = cheapest_order(req);
  served.resize(best->served);
  std::sort(served.begin(), served.end());

  result.has_equilibrium = true;
  result.rate_bps = best->rate_bps;
  result.price = scenario.pricing(best->rate_bps);
  result.served = served;
  result.allocation =
      proportional_allocation(served, req, n_users, scenario.total_bandwidth_hz);
  result.sp_revenue = best->revenue;
  return result;
}

NashResult brute_force_nash(const Scenario& scenario, std::size_t grid_resolution) {
  scenario.validate();
  const std::size_t n_users = scenario.size();
  if (n_users > kMaxBruteForceUsers)
    throw InstanceTooLarge("brute_force_nash handles at most 4 users");
  if (grid_resolution < 2) throw std::invalid_argument("grid resolution must be >= 2");

  const double total = scenario.total_bandwidth_hz;
  const std::vector<double> rates =
      numeric::log_space(kOracleMinRateBps, kOracleMaxRateBps, grid_resolution);
  const double bw_step = total / static_cast<double>(grid_resolution);
  const std::size_t n_subsets = std::size_t{1} << n_users;

  NashResult result;
  result.total_bandwidth_hz = total;
  result.allocation.assign(n_users, 0.0);
  double best_revenue = 0.0;
  double best_rate = 0.0;
  std::size_t best_mask = 0;
  std::vector<double> best_req;

  std::vector<double> req(n_users);
  for (double b : rates) {
    const double price = scenario.pricing(b);
    for (std::size_t i = 0; i < n_users; ++i) {
      const User& u = scenario.users[i];
      const double benefit = u.benefit(b);
      req[i] = kInf;
      for (std::size_t k = 1; k <= grid_resolution; ++k) {
        const double bw = bw_step * static_cast<double>(k);
        if (benefit * channel::service_guarantee(b, bw, u.channel) > price) {
          req[i] = bw;
          break;
        }
      }
    }
    for (std::size_t mask = 1; mask < n_subsets; ++mask) {
      double sum = 0.0;
      for (std::size_t i = 0; i < n_users; ++i)
        if (mask & (std::size_t{1} << i)) sum += req[i];
      if (!(sum <= total)) continue;
      const int size = std::popcount(mask);
      bool larger_fits = false;
      for (std::size_t other = 1; other < n_subsets && !larger_fits; ++other) {
        if (std::popcount(other) <= size) continue;
        double s = 0.0;
        for (std::size_t i = 0; i < n_users; ++i)
          if (other & (std::size_t{1} << i)) s += req[i];
        larger_fits = s <= total;
      }
      if (larger_fits) continue;
      const double revenue = size * (price - scenario.cost.per_rate * b) -
                             scenario.cost.per_bandwidth * total;
      if (revenue > best_revenue) {
        best_revenue = revenue;
        best_rate = b;
        best_mask = mask;
        best_req = req;
      }
    }
  }
  if (best_mask == 0) return result;

  std::vector<std::size_t> served;
  for (std::size_t i = 0; i < n_users; ++i)
    if (best_mask & (std::size_t{1} << i)) served.push_back(i);
  result.has_equilibrium = true;
  result.rate_bps = best_rate;
  result.price = scenario.pricing(best_rate);
  result.served = served;
  result.allocation = proportional_allocation(served, best_req, n_users, total);
  result.sp_revenue = best_revenue;
  return result;
}

}  // namespace pricing::game
