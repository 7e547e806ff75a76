#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "../support/oracles.hpp"
#include "prospect_pricing/experiments.hpp"
#include "prospect_pricing/game.hpp"
#include "prospect_pricing/numeric.hpp"

using namespace pricing;
using namespace pricing::game;

namespace {

const weighting::WeightingModel kEu = weighting::WeightingModel::expected_utility();

Scenario identical_users(std::size_t n, double snr_bw, double total_hz) {
  Scenario s;
  s.pricing = {{2e-3, 0.82}};
  s.cost = {1e-6 / 3.0, 1e-8};
  for (std::size_t i = 0; i < n; ++i)
    s.users.push_back({channel::UserChannel(snr_bw * 4e-21, 4e-21), {{1e-2, 0.65}}});
  s.total_bandwidth_hz = total_hz;
  return s;
}

double margin(const Scenario& s, double b) { return s.pricing(b) - s.cost.per_rate * b; }

std::vector<std::size_t> all_users(const Scenario& s) {
  std::vector<std::size_t> v(s.size());
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

}  // namespace

TEST_CASE("power laws are in kbps") {
  const PricingFunction r{{2e-3, 0.82}};
  CHECK(r(1e3) == doctest::Approx(2e-3));
  CHECK(r(7e6) == doctest::Approx(2e-3 * std::pow(7e3, 0.82)).epsilon(1e-14));
  CHECK(r(0.0) == 0.0);
  CHECK_THROWS_AS((PowerLaw{1.0, 1.5}.validate("x")), std::invalid_argument);
  CHECK_THROWS_AS((PowerLaw{-1.0, 0.5}.validate("x")), std::invalid_argument);
}

TEST_CASE("user utility") {
  const Scenario s = identical_users(2, 1e9, 1e7);
  const double b = 5e6;
  Offer offer{b, s.pricing(b), {min_bandwidth_for_user(b, 0, s), 3e6}};
  CHECK(user_utility(0.0, offer, 0, s, kEu) == 0.0);
  CHECK(std::abs(user_utility(1.0, offer, 0, s, kEu)) < 1e-12);

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const Scenario rs = oracle::random_scenario(rng, {.vary_benefit = true});
    const double rate = std::pow(10.0, 5 + 2.5 * u(rng));
    const double alpha = 0.1 + 0.9 * u(rng);
    const double p = u(rng);
    Offer o{rate, u(rng) * rs.pricing(rate) * 2, std::vector<double>(rs.size(), 0.0)};
    for (double& a : o.allocation) a = std::pow(10.0, 5 + 2 * u(rng));
    for (std::size_t i = 0; i < rs.size(); ++i) {
      const auto& usr = rs.users[i];
      const long double h = oracle::power_law(usr.benefit.coefficient, usr.benefit.exponent, rate);
      const long double f = oracle::guarantee(rate, o.allocation[i], usr.channel.snr_bandwidth_hz());
      // Guarantees below the double range are out of scope.
      if (f < std::numeric_limits<double>::min()) continue;
      const long double expect = p * (h * oracle::prelec(f, alpha) - o.price);
      const double got = user_utility(p, o, i, rs, weighting::WeightingModel(alpha));
      REQUIRE(std::abs(got - static_cast<double>(expect)) <=
              1e-9 * static_cast<double>(h + std::abs(o.price)));
    }
  }
}

TEST_CASE("provider utility") {
  const Scenario s = identical_users(3, 1e9, 1e7);
  const double b = 4e6;
  const Offer o{b, s.pricing(b), {1e6, 2e6, 3e6}};
  const double c1b = s.cost.per_rate * b;
  const std::vector<double> ones{1, 1, 1}, zeros{0, 0, 0};
  CHECK(sp_utility(ones, o, s) ==
        doctest::Approx(3 * s.pricing(b) - 3 * c1b - s.cost.per_bandwidth * 6e6));
  CHECK(sp_utility(zeros, o, s) == doctest::Approx(-(3 * c1b + s.cost.per_bandwidth * 6e6)));
  const std::vector<double> short_vec{1, 1};
  CHECK_THROWS_AS(sp_utility(short_vec, o, s), std::invalid_argument);
}

TEST_CASE("property: provider utility depends on acceptance only through its mean") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const Scenario s = identical_users(4, 1e9, 1e7);
    const double b = std::pow(10.0, 5 + 2 * u(rng));
    Offer o{b, s.pricing(b), {}};
    for (int i = 0; i < 4; ++i) o.allocation.push_back(std::pow(10.0, 5 + 2 * u(rng)));
    std::vector<double> p(4);
    for (double& x : p) x = u(rng);
    std::vector<double> q = p;
    std::shuffle(q.begin(), q.end(), rng);
    // Move mass between two entries keeping the sum.
    const double d = std::min(q[0], 1.0 - q[1]) * u(rng);
    q[0] -= d;
    q[1] += d;
    REQUIRE(sp_utility(p, o, s) == doctest::Approx(sp_utility(q, o, s)).epsilon(1e-12));
  }
}

TEST_CASE("min_bandwidth_for_user") {
  const Scenario s = identical_users(1, 5.6e9, 1e7);
  const double b = 7e6;
  const double bw = min_bandwidth_for_user(b, 0, s);
  const double target = s.pricing(b) / s.users[0].benefit(b);
  CHECK(channel::service_guarantee(b, bw, s.users[0].channel) ==
        doctest::Approx(target).epsilon(1e-9));
  CHECK_THROWS_AS(min_bandwidth_for_user(2e10, 0, s), channel::UnattainableGuarantee);
  CHECK(std::isinf(min_bandwidth_or_inf(2e10, 0, s)));
}

TEST_CASE("min_bandwidth_for_user on a default-cell median user against a grid scan") {
  const Scenario cell = experiments::build_scenario(experiments::ScenarioSpec{});
  std::vector<double> snr;
  for (const User& u : cell.users) snr.push_back(u.channel.snr_bandwidth_hz());
  std::vector<std::size_t> order = all_users(cell);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return snr[a] < snr[b]; });
  const std::size_t median = order[order.size() / 2];
  const double b = 7e6;
  const double bw = min_bandwidth_for_user(b, median, cell);
  const double target = cell.pricing(b) / cell.users[median].benefit(b);
  const double lo = bw * 0.5, hi = bw * 2.0;
  const int n = 200000;
  const double step = (hi - lo) / (n - 1);
  int first = -1;
  for (int k = 0; k < n && first < 0; ++k)
    if (oracle::guarantee(b, lo + step * k, snr[median]) >= target) first = k;
  REQUIRE(first > 0);
  CHECK(bw > lo + step * (first - 1));
  CHECK(bw <= lo + step * first);
}

TEST_CASE("solve_nash: identical users with ample bandwidth") {
  Scenario s = identical_users(5, 1e9, 1.0);
  const double b_unc = unconstrained_rate(s.pricing, s.cost);
  s.total_bandwidth_hz = 5 * 1.5 * min_bandwidth_for_user(b_unc, 0, s);
  const NashResult ne = solve_nash(s);
  REQUIRE(ne.has_equilibrium);
  CHECK(ne.served.size() == 5);
  CHECK(ne.rate_bps == doctest::Approx(b_unc).epsilon(1e-6));
  for (double a : ne.allocation) CHECK(a == doctest::Approx(s.total_bandwidth_hz / 5));
  CHECK(ne.sp_revenue == doctest::Approx(5 * margin(s, ne.rate_bps) -
                                         s.cost.per_bandwidth * s.total_bandwidth_hz));
}

TEST_CASE("solve_nash: two identical users sharing 1.5 requirements") {
  Scenario s = identical_users(2, 1e9, 1.0);
  const double b_unc = unconstrained_rate(s.pricing, s.cost);
  s.total_bandwidth_hz = 1.5 * min_bandwidth_for_user(b_unc, 0, s);
  const NashResult ne = solve_nash(s);
  const NashResult brute = brute_force_nash(s, 1000);
  REQUIRE(ne.has_equilibrium);
  REQUIRE(brute.has_equilibrium);
  CHECK(ne.served.size() == brute.served.size());
  // Enumerate n directly: the 1-user revenue at the unconstrained rate versus
  // the best 2-user revenue.
  const double one = margin(s, b_unc) - s.cost.per_bandwidth * s.total_bandwidth_hz;
  RevenueByCount two;
  for (const RevenueByCount& e : ne.per_count)
    if (e.served == 2) two = e;
  const std::size_t expect = two.feasible && two.revenue > one ? 2 : 1;
  CHECK(ne.served.size() == expect);
}

TEST_CASE("solve_nash: one user matches the exhaustive grid") {
  const Scenario s = identical_users(1, 2e9, 3e6);
  const NashResult ne = solve_nash(s);
  const NashResult brute = brute_force_nash(s, 1000);
  REQUIRE(ne.has_equilibrium);
  REQUIRE(brute.has_equilibrium);
  CHECK(brute.sp_revenue <= ne.sp_revenue * (1 + 1e-6));
  CHECK(ne.sp_revenue - brute.sp_revenue <= oracle::nash_grid_slack(s, ne, 1000));
}

TEST_CASE("solve_nash: default cell runs near 7 Mbps") {
  const experiments::Study st = experiments::prepare_study(experiments::ScenarioSpec{});
  CHECK(st.ne.served.size() == 10);
  CHECK(st.ne.rate_bps > 6e6);
  CHECK(st.ne.rate_bps < 8e6);
  CHECK(st.ne.profitable);
}

TEST_CASE("brute_force_nash guards and empty equilibria") {
  CHECK_THROWS_AS(brute_force_nash(identical_users(5, 1e9, 1e7), 10), InstanceTooLarge);
  Scenario costly = identical_users(2, 1e9, 1e7);
  costly.cost.per_bandwidth = 1.0;
  const NashResult a = solve_nash(costly);
  const NashResult b = brute_force_nash(costly, 100);
  CHECK_FALSE(a.has_equilibrium);
  CHECK_FALSE(b.has_equilibrium);
  CHECK_FALSE(a.profitable);
}

TEST_CASE("property: equilibrium structure") {
  std::mt19937_64 rng(33);
  int checked = 0;
  for (int k = 0; k < 1000; ++k) {
    const Scenario s = oracle::random_scenario(rng, {.max_users = 4});
    const NashResult ne = solve_nash(s);
    if (!ne.has_equilibrium) continue;
    ++checked;
    const double b = ne.rate_bps;
    std::vector<double> req(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) req[i] = min_bandwidth_or_inf(b, i, s);

    // No strictly larger subset fits.
    for (std::size_t mask = 0; mask < (std::size_t{1} << s.size()); ++mask) {
      const auto size = static_cast<std::size_t>(std::popcount(mask));
      if (size <= ne.served.size()) continue;
      double sum = 0;
      for (std::size_t i = 0; i < s.size(); ++i)
        if (mask & (std::size_t{1} << i)) sum += req[i];
      REQUIRE_FALSE(fits_total_bandwidth(sum, size, s.total_bandwidth_hz));
    }
    // Served users are the cheapest ones.
    double worst_served = 0, best_unserved = numeric::kInf;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const bool in = std::find(ne.served.begin(), ne.served.end(), i) != ne.served.end();
      if (in) worst_served = std::max(worst_served, req[i]);
      else best_unserved = std::min(best_unserved, req[i]);
    }
    REQUIRE(worst_served <= best_unserved);
    // Every served user gets more than its minimum and the revenue identity holds.
    const Offer o = ne.offer();
    for (std::size_t i : ne.served) REQUIRE(ne.allocation[i] > req[i]);
    const std::vector<double> ones(ne.served.size(), 1.0);
    REQUIRE(sp_utility(ones, o, s) == doctest::Approx(ne.sp_revenue).epsilon(1e-10));
    for (std::size_t i : ne.served) REQUIRE(user_utility(1.0, o, i, s, kEu) > 0.0);
  }
  CHECK(checked > 500);
}

TEST_CASE("property: solver is never beaten by the exhaustive grid") {
  std::mt19937_64 rng(34);
  const std::size_t resolution = 200;
  int compared = 0;
  for (int k = 0; k < 1000; ++k) {
    const Scenario s = oracle::random_scenario(rng, {.max_users = 3});
    const NashResult ne = solve_nash(s);
    const NashResult brute = brute_force_nash(s, resolution);
    if (!brute.has_equilibrium) continue;
    REQUIRE(ne.has_equilibrium);
    ++compared;
    REQUIRE(brute.sp_revenue <= ne.sp_revenue + 1e-6 * std::abs(ne.sp_revenue));
    REQUIRE(ne.sp_revenue - brute.sp_revenue <= oracle::nash_grid_slack(s, ne, resolution));
  }
  CHECK(compared > 500);
}
