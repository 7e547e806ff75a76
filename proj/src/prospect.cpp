#include "prospect_pricing/prospect.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "prospect_pricing/channel.hpp"
#include "prospect_pricing/numeric.hpp"

namespace pricing::prospect {

namespace {

using game::NashResult;
using game::Scenario;
using weighting::WeightingModel;

constexpr double kInf = numeric::kInf;
constexpr std::size_t kExhaustiveAdmissionLimit = 12;
constexpr std::size_t kRateGridPoints = 400;
constexpr std::size_t kRateRevenueGridPoints = 60;
constexpr std::size_t kRateLocalStarts = 8;
constexpr double kRateBracketLow = 1e-3;
constexpr double kRateBracketHigh = 10.0;

void require_equilibrium(const NashResult& ne) {
  if (!ne.has_equilibrium || ne.served.empty())
    throw std::invalid_argument("an equilibrium with at least one served user is required");
}

double eut_revenue(const NashResult& ne) { return ne.sp_revenue; }

double price_epsilon(const NashResult& ne) { return kPriceEpsilon * ne.price; }

double sum_requirements(double rate_bps, double willingness,
                        const std::vector<std::size_t>& users, const Scenario& scenario,
                        const WeightingModel& model, std::vector<double>* per_user = nullptr) {
  double sum = 0.0;
  for (std::size_t i : users) {
    const double bw = weighted_min_bandwidth(rate_bps, willingness, i, scenario, model);
    if (per_user != nullptr) (*per_user)[i] = bw;
    sum += bw;
  }
  return sum;
}

// Requirements scaled up so they use the whole of `total`.
std::vector<double> scale_to(std::vector<double> allocation, double total) {
  const double sum = std::accumulate(allocation.begin(), allocation.end(), 0.0);
  if (sum > 0.0 && std::isfinite(sum))
    for (double& a : allocation) a *= total / sum;
  return allocation;
}

void settle_revenue(StrategyOutcome& out, const NashResult& ne) {
  const double target = eut_revenue(ne);
  out.recovered_revenue = out.feasible ? target : std::min(target, out.max_revenue);
  out.recovered_revenue = std::clamp(out.recovered_revenue, 0.0, target);
  out.revenue_loss = target - out.recovered_revenue;
}

StrategyOutcome base_outcome(Strategy s, const NashResult& ne) {
  StrategyOutcome out;
  out.strategy = s;
  out.new_price = ne.price;
  out.new_rate_bps = ne.rate_bps;
  out.new_total_bandwidth_hz = ne.total_bandwidth_hz;
  out.served = ne.served;
  out.allocation = ne.allocation;
  return out;
}

struct ExpansionSearch {
  double argument = 0.0;  // optimal BW_PT
  double value = 0.0;     // sup_B N x(B) - c3 B
};

ExpansionSearch expansion_optimum(const Scenario& scenario, const NashResult& ne,
                                  const WeightingModel& model) {
  const double n = static_cast<double>(ne.served.size());
  const double c3 = scenario.cost.per_bandwidth;
  const auto surplus = [&](double total) {
    return n * equalize_willingness(ne.rate_bps, ne.served, total, scenario, model).willingness -
           c3 * total;
  };
  double b = ne.total_bandwidth_hz;
  double s = surplus(b);
  double lo = b * 0.5;
  double hi = b * 2.0;
  double s_hi = surplus(hi);
  if (s_hi > s) {
    for (int k = 0; k < 200 && s_hi > s; ++k) {
      lo = b;
      b = hi;
      s = s_hi;
      hi = b * 2.0;
      s_hi = surplus(hi);
    }
  } else {
    double s_lo = surplus(lo);
    for (int k = 0; k < 60 && s_lo > s; ++k) {
      hi = b;
      b = lo;
      s = s_lo;
      lo = b * 0.5;
      s_lo = surplus(lo);
    }
  }
  const numeric::Extremum e = numeric::golden_section_max_log(surplus, lo, hi, 1e-10);
  if (e.value > s) return {e.argument, e.value};
  return {b, s};
}

double rate_control_price(double rate_bps, const Scenario& scenario, const NashResult& ne) {
  return ne.price + scenario.cost.per_rate * (rate_bps - ne.rate_bps);
}

bool rate_allowed(double rate_bps, const Scenario& scenario, const NashResult& ne,
                  const RateControlOptions& options) {
  if (!(rate_control_price(rate_bps, scenario, ne) > 0.0)) return false;
  if (!options.benefit_margin_constraint) return true;
  const double margin = ne.price - scenario.cost.per_rate * ne.rate_bps;
  for (std::size_t i : ne.served) {
    if (!(scenario.users[i].benefit(rate_bps) - scenario.cost.per_rate * rate_bps < margin))
      return false;
  }
  return true;
}

double rate_control_requirement(double rate_bps, const Scenario& scenario, const NashResult& ne,
                                const WeightingModel& model, const RateControlOptions& options) {
  if (!rate_allowed(rate_bps, scenario, ne, options)) return kInf;
  return sum_requirements(rate_bps, rate_control_price(rate_bps, scenario, ne), ne.served,
                          scenario, model);
}

// Multi-start minimization of `f` over a log grid: the best few local minima
// of the grid are refined by golden section between their neighbours.
numeric::Extremum minimize_on_log_grid(const std::function<double(double)>& f,
                                       const std::vector<double>& grid,
                                       std::size_t starts, double extra_candidate) {
  std::vector<double> values(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) values[k] = f(grid[k]);

  std::vector<std::size_t> minima;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!std::isfinite(values[k])) continue;
    const bool left = k == 0 || values[k] <= values[k - 1];
    const bool right = k + 1 == grid.size() || values[k] <= values[k + 1];
    if (left && right) minima.push_back(k);
  }
  std::sort(minima.begin(), minima.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  if (minima.size() > starts) minima.resize(starts);

  numeric::Extremum best{extra_candidate, f(extra_candidate)};
  for (std::size_t k : minima) {
    if (values[k] < best.value) best = {grid[k], values[k]};
    const double lo = grid[k > 0 ? k - 1 : k];
    const double hi = grid[k + 1 < grid.size() ? k + 1 : k];
    if (!(hi > lo)) continue;
    const numeric::Extremum g =
        numeric::golden_section_max_log([&](double x) { return -f(x); }, lo, hi, 1e-12);
    if (-g.value < best.value) best = {g.argument, -g.value};
  }
  return best;
}

numeric::Extremum rate_control_minimum(const Scenario& scenario, const NashResult& ne,
                                       const WeightingModel& model,
                                       const RateControlOptions& options) {
  const std::vector<double> grid = numeric::log_space(
      kRateBracketLow * ne.rate_bps, kRateBracketHigh * ne.rate_bps, kRateGridPoints);
  return minimize_on_log_grid(
      [&](double b) { return rate_control_requirement(b, scenario, ne, model, options); },
      grid, kRateLocalStarts, ne.rate_bps);
}

double no_pricing_threshold(const Scenario& scenario, const NashResult& ne,
                            const WeightingModel& model, std::vector<double>* per_user) {
  return sum_requirements(ne.rate_bps, ne.price, ne.served, scenario, model, per_user);
}

std::vector<std::vector<std::size_t>> subsets_of_size(const std::vector<std::size_t>& set,
                                                      std::size_t size) {
  std::vector<std::vector<std::size_t>> out;
  const std::size_t n = set.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != size) continue;
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::size_t{1} << i)) s.push_back(set[i]);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Preservation: return "preservation";
    case Strategy::StrictPricing: return "strict_pricing";
    case Strategy::Reallocation: return "reallocation";
    case Strategy::AdmissionControl: return "admission_control";
    case Strategy::BandwidthExpansion: return "bandwidth_expansion";
    case Strategy::RateControl: return "rate_control";
    case Strategy::NoPricingExpansion: return "no_pricing_expansion";
  }
  return "unknown";
}

RrmConstraints rrm_relation(const NashResult& ne, const StrategyOutcome& pt,
                            double relative_tolerance) {
  const auto close = [&](double a, double b, double scale) {
    return std::abs(a - b) <= relative_tolerance * scale;
  };
  RrmConstraints c;
  c.same_served_set = pt.served == ne.served;
  c.same_rate = close(pt.new_rate_bps, ne.rate_bps, ne.rate_bps);
  c.same_total_bandwidth =
      close(pt.new_total_bandwidth_hz, ne.total_bandwidth_hz, ne.total_bandwidth_hz);
  c.same_allocation = pt.allocation.size() == ne.allocation.size();
  for (std::size_t i = 0; c.same_allocation && i < ne.allocation.size(); ++i)
    c.same_allocation = close(pt.allocation[i], ne.allocation[i], ne.total_bandwidth_hz);
  return c;
}

double weighted_min_bandwidth(double rate_bps, double willingness, std::size_t user,
                              const Scenario& scenario, const WeightingModel& model) {
  if (!(willingness > 0.0)) return 0.0;
  const game::User& u = scenario.users.at(user);
  const double ratio = willingness / u.benefit(rate_bps);
  if (!(ratio < 1.0)) return kInf;
  const double exponent = weighting::inverse_weight_exponent(ratio, model);
  if (!std::isfinite(exponent)) return 0.0;
  try {
    return channel::min_bandwidth_for_exponent(rate_bps, exponent, u.channel);
  } catch (const channel::UnattainableGuarantee&) {
    return kInf;
  }
}

double weighted_willingness(double rate_bps, double bandwidth_hz, std::size_t user,
                            const Scenario& scenario, const WeightingModel& model) {
  if (!(bandwidth_hz > 0.0)) return 0.0;
  const game::User& u = scenario.users.at(user);
  return u.benefit(rate_bps) *
         weighting::weight_of_exponent(
             channel::guarantee_exponent(rate_bps, bandwidth_hz, u.channel), model);
}

double willingness_ceiling(double rate_bps, const std::vector<std::size_t>& users,
                           const Scenario& scenario, const WeightingModel& model) {
  double ceiling = kInf;
  for (std::size_t i : users) {
    const game::User& u = scenario.users.at(i);
    const double exponent = rate_bps * std::numbers::ln2 / u.channel.snr_bandwidth_hz();
    ceiling = std::min(ceiling,
                       u.benefit(rate_bps) * weighting::weight_of_exponent(exponent, model));
  }
  return ceiling;
}

Equalization equalize_willingness(double rate_bps, const std::vector<std::size_t>& users,
                                  double total_hz, const Scenario& scenario,
                                  const WeightingModel& model) {
  Equalization out;
  out.allocation.assign(scenario.size(), 0.0);
  if (users.empty() || !(total_hz > 0.0)) return out;

  const double ceiling = willingness_ceiling(rate_bps, users, scenario, model);
  if (!(ceiling > 0.0)) {
    for (std::size_t i : users) out.allocation[i] = total_hz / static_cast<double>(users.size());
    return out;
  }
  const auto exhausts = [&](double x) {
    return x >= ceiling || sum_requirements(rate_bps, x, users, scenario, model) >= total_hz;
  };
  const numeric::Bracket br = numeric::bisect_threshold(exhausts, 0.0, ceiling, 1e-14);
  out.willingness = br.below;
  std::vector<double> req(scenario.size(), 0.0);
  const double sum = sum_requirements(rate_bps, br.below, users, scenario, model, &req);
  if (sum > 0.0) {
    for (std::size_t i : users) out.allocation[i] = req[i] * total_hz / sum;
  } else {
    for (std::size_t i : users) out.allocation[i] = total_hz / static_cast<double>(users.size());
  }
  return out;
}

PreservationReport ne_preserved(const Scenario& scenario, const NashResult& ne,
                                const WeightingModel& model) {
  require_equilibrium(ne);
  PreservationReport report;
  report.preserved = true;
  for (std::size_t i : ne.served) {
    UserPreservation u;
    u.user = i;
    const double ratio = ne.price / scenario.users[i].benefit(ne.rate_bps);
    u.lambda = ratio < 1.0 ? weighting::inverse_weight(ratio, model) : 1.0;
    u.required_bandwidth_hz = weighted_min_bandwidth(ne.rate_bps, ne.price, i, scenario, model);
    u.recoverable = std::isfinite(u.required_bandwidth_hz);
    u.passes = ne.allocation[i] > u.required_bandwidth_hz;
    report.preserved = report.preserved && u.passes;
    report.aggregate_required_hz += u.required_bandwidth_hz;
    report.users.push_back(u);
  }
  report.aggregate_sufficient = report.aggregate_required_hz < ne.total_bandwidth_hz;
  return report;
}

LossResult loss_strict_rrm(const Scenario& scenario, const NashResult& ne,
                           const WeightingModel& model) {
  require_equilibrium(ne);
  LossResult out;
  out.allocation = ne.allocation;
  out.willingness = kInf;
  for (std::size_t i : ne.served)
    out.willingness = std::min(
        out.willingness, weighted_willingness(ne.rate_bps, ne.allocation[i], i, scenario, model));
  if (out.willingness > ne.price) {
    out.price = ne.price;
  } else {
    out.loss = ne.price - out.willingness;
    out.price = out.willingness - price_epsilon(ne);
  }
  out.total_loss = static_cast<double>(ne.served.size()) * out.loss;
  return out;
}

LossResult loss_with_reallocation(const Scenario& scenario, const NashResult& ne,
                                  const WeightingModel& model) {
  const LossResult strict = loss_strict_rrm(scenario, ne, model);
  const Equalization eq =
      equalize_willingness(ne.rate_bps, ne.served, ne.total_bandwidth_hz, scenario, model);

  LossResult out;
  if (eq.willingness > strict.willingness) {
    out.willingness = eq.willingness;
    out.allocation = eq.allocation;
  } else {
    out.willingness = strict.willingness;
    out.allocation = strict.allocation;
  }
  if (out.willingness > ne.price) {
    out.price = ne.price;
  } else {
    out.loss = ne.price - out.willingness;
    out.price = out.willingness - price_epsilon(ne);
  }
  out.total_loss = static_cast<double>(ne.served.size()) * out.loss;
  for (std::size_t i : ne.served) {
    if (!(willingness_ceiling(ne.rate_bps, {i}, scenario, model) > ne.price))
      out.unrecoverable.push_back(i);
  }
  return out;
}

namespace {

StrategyOutcome from_loss(Strategy s, const LossResult& loss, const NashResult& ne) {
  StrategyOutcome out = base_outcome(s, ne);
  out.feasible = loss.loss == 0.0;
  out.new_price = loss.price;
  out.allocation = loss.allocation;
  out.max_revenue = eut_revenue(ne) - loss.total_loss;
  out.min_bandwidth_threshold_hz = out.feasible ? ne.total_bandwidth_hz : kInf;
  settle_revenue(out, ne);
  if (!out.feasible) out.revenue_loss = std::min(loss.total_loss, eut_revenue(ne));
  return out;
}

}  // namespace

StrategyOutcome strict_pricing(const Scenario& scenario, const NashResult& ne,
                               const WeightingModel& model) {
  return from_loss(Strategy::StrictPricing, loss_strict_rrm(scenario, ne, model), ne);
}

StrategyOutcome reallocation_pricing(const Scenario& scenario, const NashResult& ne,
                                     const WeightingModel& model) {
  return from_loss(Strategy::Reallocation, loss_with_reallocation(scenario, ne, model), ne);
}

StrategyOutcome admission_control_fixed(const Scenario& scenario, const NashResult& ne,
                                        const WeightingModel& model, std::size_t drops) {
  require_equilibrium(ne);
  const std::size_t n = ne.served.size();
  if (drops >= n) throw std::invalid_argument("admission control must keep at least one user");
  const std::size_t m = n - drops;
  const double ratio = static_cast<double>(n) / static_cast<double>(m);
  const double b = ne.rate_bps;
  const double c1 = scenario.cost.per_rate;
  const double price = ratio * ne.price - (ratio - 1.0) * c1 * b;

  std::vector<double> req(scenario.size(), 0.0);
  sum_requirements(b, price, ne.served, scenario, model, &req);

  std::vector<std::size_t> chosen;
  double threshold = kInf;
  if (n <= kExhaustiveAdmissionLimit) {
    for (const std::vector<std::size_t>& s : subsets_of_size(ne.served, m)) {
      double sum = 0.0;
      for (std::size_t i : s) sum += req[i];
      if (chosen.empty() || sum < threshold) {
        threshold = sum;
        chosen = s;
      }
    }
  } else {
    // The requirement of a user depends on the subset only through its size,
    // so repeatedly dropping the heaviest user is exact.
    chosen = ne.served;
    std::stable_sort(chosen.begin(), chosen.end(),
                     [&](std::size_t a, std::size_t c) { return req[a] < req[c]; });
    chosen.resize(m);
    std::sort(chosen.begin(), chosen.end());
    threshold = 0.0;
    for (std::size_t i : chosen) threshold += req[i];
  }

  StrategyOutcome out = base_outcome(Strategy::AdmissionControl, ne);
  out.served = chosen;
  out.min_bandwidth_threshold_hz = threshold;
  out.feasible = threshold < ne.total_bandwidth_hz;

  const Equalization eq = equalize_willingness(b, chosen, ne.total_bandwidth_hz, scenario, model);
  const double best_price = std::max(eq.willingness, out.feasible ? price : 0.0);
  out.max_revenue = static_cast<double>(m) * (best_price - c1 * b) -
                    scenario.cost.per_bandwidth * ne.total_bandwidth_hz;
  if (out.feasible) {
    std::vector<double> alloc(scenario.size(), 0.0);
    for (std::size_t i : chosen) alloc[i] = req[i];
    out.allocation = scale_to(std::move(alloc), ne.total_bandwidth_hz);
    out.new_price = price;
  } else {
    out.allocation = eq.allocation;
    out.new_price = eq.willingness - price_epsilon(ne);
  }
  settle_revenue(out, ne);
  return out;
}

StrategyOutcome admission_control(const Scenario& scenario, const NashResult& ne,
                                  const WeightingModel& model, std::size_t max_drops) {
  require_equilibrium(ne);
  if (max_drops >= ne.served.size())
    throw std::invalid_argument("max_drops must be smaller than the served set");
  StrategyOutcome best;
  bool have = false;
  for (std::size_t k = 0; k <= max_drops; ++k) {
    StrategyOutcome c = admission_control_fixed(scenario, ne, model, k);
    if (!have) {
      best = std::move(c);
      have = true;
      continue;
    }
    const bool better =
        c.feasible ? (!best.feasible ||
                      c.min_bandwidth_threshold_hz < best.min_bandwidth_threshold_hz)
                   : (!best.feasible && c.recovered_revenue > best.recovered_revenue);
    if (better) best = std::move(c);
  }
  return best;
}

StrategyOutcome bandwidth_expansion(const Scenario& scenario, const NashResult& ne,
                                    const WeightingModel& model) {
  require_equilibrium(ne);
  const double c3 = scenario.cost.per_bandwidth;
  if (!(c3 > 0.0))
    throw std::invalid_argument("bandwidth expansion needs a positive bandwidth cost");
  const double n = static_cast<double>(ne.served.size());
  const double b = ne.rate_bps;

  const ExpansionSearch opt = expansion_optimum(scenario, ne, model);
  StrategyOutcome out = base_outcome(Strategy::BandwidthExpansion, ne);
  out.min_bandwidth_threshold_hz = (n * ne.price - opt.value) / c3;
  out.feasible = out.min_bandwidth_threshold_hz < ne.total_bandwidth_hz;
  out.max_revenue = opt.value - n * scenario.cost.per_rate * b;
  out.new_total_bandwidth_hz = opt.argument;
  const Equalization eq = equalize_willingness(b, ne.served, opt.argument, scenario, model);
  out.allocation = eq.allocation;
  out.new_price = eq.willingness - price_epsilon(ne);

  const double target = n * ne.price - c3 * ne.total_bandwidth_hz;
  const auto meets = [&](double total) {
    return n * equalize_willingness(b, ne.served, total, scenario, model).willingness -
               c3 * total >=
           target;
  };
  if (opt.value >= target) {
    double lo = opt.argument;
    for (int k = 0; k < 200 && meets(lo); ++k) lo *= 0.5;
    out.required_pt_bandwidth_hz =
        meets(lo) ? lo : numeric::bisect_threshold_log(meets, lo, opt.argument, 1e-12).above;
  }
  settle_revenue(out, ne);
  return out;
}

StrategyOutcome rate_control(const Scenario& scenario, const NashResult& ne,
                             const WeightingModel& model, const RateControlOptions& options) {
  require_equilibrium(ne);
  const double n = static_cast<double>(ne.served.size());
  const double c1 = scenario.cost.per_rate;
  const double c3 = scenario.cost.per_bandwidth;
  const double total = ne.total_bandwidth_hz;

  const numeric::Extremum best = rate_control_minimum(scenario, ne, model, options);
  StrategyOutcome out = base_outcome(Strategy::RateControl, ne);
  out.min_bandwidth_threshold_hz = best.value;
  out.feasible = best.value < total;

  const auto revenue = [&](double rate) {
    if (!rate_allowed(rate, scenario, ne, options)) return -kInf;
    const double x = equalize_willingness(rate, ne.served, total, scenario, model).willingness;
    return n * (x - c1 * rate) - c3 * total;
  };
  const std::vector<double> grid = numeric::log_space(
      kRateBracketLow * ne.rate_bps, kRateBracketHigh * ne.rate_bps, kRateRevenueGridPoints);
  const numeric::Extremum top = minimize_on_log_grid(
      [&](double rate) { return -revenue(rate); }, grid, 1,
      std::isfinite(best.value) ? best.argument : ne.rate_bps);
  out.max_revenue = -top.value;

  if (out.feasible) {
    out.new_rate_bps = best.argument;
    out.new_price = rate_control_price(best.argument, scenario, ne);
    std::vector<double> req(scenario.size(), 0.0);
    sum_requirements(best.argument, out.new_price, ne.served, scenario, model, &req);
    out.allocation = scale_to(std::move(req), total);
  } else {
    out.new_rate_bps = top.argument;
    const Equalization eq = equalize_willingness(top.argument, ne.served, total, scenario, model);
    out.allocation = eq.allocation;
    out.new_price = eq.willingness - price_epsilon(ne);
  }
  settle_revenue(out, ne);
  return out;
}

StrategyOutcome no_pricing_expansion(const Scenario& scenario, const NashResult& ne,
                                     const WeightingModel& model) {
  require_equilibrium(ne);
  std::vector<double> req(scenario.size(), 0.0);
  const double threshold = no_pricing_threshold(scenario, ne, model, &req);
  StrategyOutcome out = base_outcome(Strategy::NoPricingExpansion, ne);
  out.min_bandwidth_threshold_hz = threshold;
  out.feasible = threshold < ne.total_bandwidth_hz;
  out.new_total_bandwidth_hz = threshold;
  out.allocation = req;
  out.max_revenue = static_cast<double>(ne.served.size()) *
                        (ne.price - scenario.cost.per_rate * ne.rate_bps) -
                    scenario.cost.per_bandwidth * threshold;
  settle_revenue(out, ne);
  return out;
}

bool strategy_recovers(Strategy strategy, const Scenario& scenario, const NashResult& ne,
                       const WeightingModel& model, const MinAlphaOptions& options) {
  switch (strategy) {
    case Strategy::Preservation:
      return ne_preserved(scenario, ne, model).preserved;
    case Strategy::StrictPricing:
      return loss_strict_rrm(scenario, ne, model).loss == 0.0;
    case Strategy::Reallocation:
      return loss_with_reallocation(scenario, ne, model).loss == 0.0;
    case Strategy::AdmissionControl:
      return admission_control_fixed(scenario, ne, model, options.admission_drops).feasible;
    case Strategy::BandwidthExpansion: {
      const double c3 = scenario.cost.per_bandwidth;
      const double n = static_cast<double>(ne.served.size());
      const ExpansionSearch opt = expansion_optimum(scenario, ne, model);
      return (n * ne.price - opt.value) / c3 < ne.total_bandwidth_hz;
    }
    case Strategy::RateControl:
      return rate_control_minimum(scenario, ne, model, options.rate_control).value <
             ne.total_bandwidth_hz;
    case Strategy::NoPricingExpansion:
      return no_pricing_threshold(scenario, ne, model, nullptr) < ne.total_bandwidth_hz;
  }
  return false;
}

MinAlphaResult min_alpha(Strategy strategy, const Scenario& scenario, const NashResult& ne,
                         const MinAlphaOptions& options) {
  require_equilibrium(ne);
  if (!(options.alpha_floor > 0.0 && options.alpha_floor < 1.0))
    throw std::invalid_argument("alpha floor must lie in (0, 1)");
  const auto recovers = [&](double alpha) {
    return strategy_recovers(strategy, scenario, ne, WeightingModel(alpha), options);
  };

  MinAlphaResult out;
  if (!recovers(1.0)) {
    out.no_recovery = true;
    return out;
  }

  std::vector<double> grid{options.alpha_floor};
  for (int k = 1; k < 20; ++k) {
    const double a = 0.05 * k;
    if (a > options.alpha_floor) grid.push_back(a);
  }
  grid.push_back(1.0);
  std::vector<char> holds(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) holds[k] = recovers(grid[k]);

  std::size_t last_false = grid.size();
  for (std::size_t k = 0; k < grid.size(); ++k)
    if (!holds[k]) last_false = k;
  for (std::size_t k = 0; k < last_false && last_false < grid.size(); ++k)
    if (holds[k]) out.monotone = false;

  if (last_false == grid.size()) {
    out.never_infeasible = true;
    out.alpha = options.alpha_floor;
    return out;
  }
  const numeric::Bracket br = numeric::bisect_threshold(recovers, grid[last_false],
                                                        grid[last_false + 1],
                                                        0.25 * options.tolerance);
  out.alpha = br.above;
  return out;
}

}  // namespace pricing::prospect
