#pragma once

// Reference evaluations used by the tests. They deliberately avoid the
// library's numerics: closed forms in long double, plain scans instead of
// bracketing, exhaustive enumeration instead of search.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "prospect_pricing/experiments.hpp"
#include "prospect_pricing/game.hpp"

namespace oracle {

using ld = long double;

inline ld prelec(ld p, ld alpha) {
  if (p <= 0) return 0;
  if (p >= 1) return 1;
  return std::exp(-std::pow(-std::log(p), alpha));
}

inline ld prelec_inverse(ld q, ld alpha) {
  if (q <= 0) return 0;
  if (q >= 1) return 1;
  return std::exp(-std::pow(-std::log(q), 1 / alpha));
}

// exp(-(2^{b/bw} - 1) N0 bw / P), with snr_bw = P / N0.
inline ld guarantee(ld rate, ld bw, ld snr_bw) {
  return std::exp(-(std::pow(2.0L, rate / bw) - 1) * bw / snr_bw);
}

// Plain bisection in long double on a linear scale, 80 halvings.
inline ld inverse_guarantee(ld rate, ld target, ld snr_bw) {
  ld lo = 0, hi = rate;
  while (guarantee(rate, hi, snr_bw) < target) {
    lo = hi;
    hi *= 2;
    if (hi > 1e300L) return std::numeric_limits<ld>::infinity();
  }
  for (int i = 0; i < 80; ++i) {
    const ld mid = (lo + hi) / 2;
    if (mid > 0 && guarantee(rate, mid, snr_bw) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

inline ld power_law(ld coeff, ld exponent, ld rate) {
  return coeff * std::pow(rate * 1e-3L, exponent);
}

// Bandwidth at which h(b) w(F(b; bw)) = x; +inf when out of reach.
inline ld weighted_requirement(ld rate, ld x, const pricing::game::User& u, ld alpha) {
  const ld h = power_law(u.benefit.coefficient, u.benefit.exponent, rate);
  if (x <= 0) return 0;
  if (x >= h) return std::numeric_limits<ld>::infinity();
  const ld target = prelec_inverse(x / h, alpha);
  const ld snr = static_cast<ld>(u.channel.snr_bandwidth_hz());
  if (target >= std::exp(-rate * std::log(2.0L) / snr)) return std::numeric_limits<ld>::infinity();
  return inverse_guarantee(rate, target, snr);
}

// Revenue the exhaustive equilibrium grid can lose against the exact
// optimum: one rate step plus the rate cut that absorbs rounding every served
// user's bandwidth up to the grid.
inline double nash_grid_slack(const pricing::game::Scenario& s,
                              const pricing::game::NashResult& exact, std::size_t resolution) {
  const auto margin = [&](double b) { return s.pricing(b) - s.cost.per_rate * b; };
  const double rho = std::pow(1e6, 1.0 / static_cast<double>(resolution - 1));
  const double n = static_cast<double>(exact.served.size());
  const double shrink = 1.0 - 2.0 * (n + 1.0) / static_cast<double>(resolution);
  const double b_lo = exact.rate_bps * shrink / rho;
  return n * std::abs(margin(exact.rate_bps) - margin(b_lo)) + 1e-9;
}

// Small heterogeneous cells for property and oracle tests.
struct RandomScenarioOptions {
  std::size_t min_users = 1;
  std::size_t max_users = 3;
  double min_snr_bw = 1e8;
  double max_snr_bw = 1e10;
  double min_bandwidth_factor = 0.3;  // BW_max relative to the all-served need
  double max_bandwidth_factor = 2.0;
  bool vary_benefit = false;
};

inline pricing::game::Scenario random_scenario(std::mt19937_64& rng,
                                               const RandomScenarioOptions& o = {}) {
  using namespace pricing;
  std::uniform_int_distribution<std::size_t> count(o.min_users, o.max_users);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  game::Scenario s;
  s.pricing = {{2e-3, 0.82}};
  s.cost = {1e-6 / 3.0, 1e-8};
  const std::size_t n = count(rng);
  for (std::size_t i = 0; i < n; ++i) {
    const double snr = o.min_snr_bw * std::pow(o.max_snr_bw / o.min_snr_bw, unit(rng));
    game::BenefitFunction h{{1e-2, 0.65}};
    if (o.vary_benefit) h.coefficient = 1e-2 * (0.8 + 0.4 * unit(rng));
    s.users.push_back({channel::UserChannel(snr * 4e-21, 4e-21), h});
  }
  const double rate = game::unconstrained_rate(s.pricing, s.cost);
  double need = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double bw = game::min_bandwidth_or_inf(rate, i, s);
    if (std::isfinite(bw)) need += bw;
  }
  if (!(need > 0.0)) need = 1e6;
  const double f = o.min_bandwidth_factor *
                   std::pow(o.max_bandwidth_factor / o.min_bandwidth_factor, unit(rng));
  s.total_bandwidth_hz = f * need;
  return s;
}

}  // namespace oracle
