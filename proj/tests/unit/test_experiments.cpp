#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "prospect_pricing/experiments.hpp"

using namespace pricing;
using namespace pricing::experiments;

namespace {

const Study& default_study() {
  static const Study s = prepare_study(ScenarioSpec{});
  return s;
}

std::string csv(const Table& t) {
  std::ostringstream os;
  write_csv(os, t);
  return os.str();
}

SweepSpec coarse() {
  SweepSpec s;
  s.alpha_step = 0.02;
  return s;
}

std::size_t column(const Table& t, const std::string& name) {
  for (std::size_t k = 0; k < t.header.size(); ++k)
    if (t.header[k] == name) return k;
  FAIL("no column " << name);
  return 0;
}

const char* kPsychData =
    "packet_loss_pct,delay_ms,rating_mean,rating_dev,fps_mean,fps_dev\n"
    "0,0,4.0,0.1,20,1\n"
    "4,0,2.5,0.3,10,1\n"
    "8,0,,,,\n"
    "16,0,1.0,0.2,2,1\n";

}  // namespace

TEST_CASE("scenario construction") {
  const ScenarioSpec spec;
  const game::Scenario a = build_scenario(spec);
  const game::Scenario b = build_scenario(spec);
  REQUIRE(a.size() == spec.user_count);
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(a.users[i].channel.snr_bandwidth_hz() == b.users[i].channel.snr_bandwidth_hz());
  CHECK(a.total_bandwidth_hz == b.total_bandwidth_hz);
  CHECK(a.rng_seed == spec.seed);

  // Margin rule: BW_max is (1 + margin) times the total requirement at the
  // unconstrained rate.
  const double rate = game::unconstrained_rate(a.pricing, a.cost);
  double need = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double bw = game::min_bandwidth_or_inf(rate, i, a);
    if (std::isfinite(bw)) need += bw;
  }
  CHECK(a.total_bandwidth_hz == doctest::Approx(1.1 * need).epsilon(1e-12));

  ScenarioSpec other = spec;
  other.seed = spec.seed + 1;
  CHECK(build_scenario(other).total_bandwidth_hz != a.total_bandwidth_hz);

  ScenarioSpec absolute = spec;
  absolute.bandwidth_rule = BandwidthRule::Absolute;
  absolute.total_bandwidth_hz = 5e6;
  CHECK(build_scenario(absolute).total_bandwidth_hz == 5e6);
}

TEST_CASE("default cell bandwidth is near 14 MHz") {
  const Study& st = default_study();
  CHECK(st.scenario.total_bandwidth_hz > 0.95 * 14e6);
  CHECK(st.scenario.total_bandwidth_hz < 1.05 * 14e6);
}

TEST_CASE("scenario validation names the key") {
  const auto key_of = [](ScenarioSpec s) -> std::string {
    try {
      s.validate();
    } catch (const std::invalid_argument& e) {
      return e.what();
    }
    return "";
  };
  ScenarioSpec s;
  CHECK(key_of(s).empty());
  s.pathloss_exponent = -1;
  CHECK(key_of(s) == "pathloss_exponent");
  s = {};
  s.user_count = 0;
  CHECK(key_of(s) == "user_count");
  s = {};
  s.bandwidth_rule = BandwidthRule::Absolute;
  CHECK(key_of(s) == "total_bandwidth_hz");
  s = {};
  s.cell_radius_m = 10;
  CHECK_FALSE(key_of(s).empty());
}

TEST_CASE("alpha grid") {
  SweepSpec s;
  const std::vector<double> g = alpha_grid(s);
  REQUIRE(g.size() == 21);
  CHECK(g.front() == 0.8);
  CHECK(g.back() == 1.0);
  CHECK(g[7] == 0.87);
  s.alpha_step = 0.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = {};
  s.alpha_min = 0.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = {};
  s.alpha_max = 1.2;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = {};
  s.alpha_min = 0.9;
  s.alpha_max = 0.8;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("csv formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(6986353.123456) == "6986353.12");
  const Table t{{"a", "b"}, {{1, 2.5}, {3, 4}}};
  CHECK(csv(t) == "a,b\n1,2.5\n3,4\n");
}

TEST_CASE("sweeps are deterministic and normalized") {
  const Study& st = default_study();
  const SweepSpec spec = coarse();
  for (Sweep kind : {Sweep::RevenueLoss, Sweep::Price, Sweep::Expansion}) {
    const Table a = run_sweep(kind, st, spec);
    const Table b = run_sweep(kind, prepare_study(ScenarioSpec{}), spec);
    CHECK(csv(a) == csv(b));
    CHECK(a.header == sweep_header(kind));
    CHECK(a.rows.size() == alpha_grid(spec).size());
  }
  const Table loss = sweep_revenue_loss(st, spec);
  for (const auto& row : loss.rows) {
    CHECK(row[1] >= 0.0);
    CHECK(row[1] <= 1.0);
    CHECK(row[2] >= 0.0);
    CHECK(row[2] <= row[1] + 1e-12);
  }
  CHECK(loss.rows.back()[1] == 0.0);
  CHECK(loss.rows.back()[2] == 0.0);

  const Table price = sweep_price(st, spec);
  for (const auto& row : price.rows) {
    CHECK(row[1] > 0.0);
    CHECK(row[1] <= 1.0);
    CHECK(row[2] <= 1.0);
    CHECK(row[2] >= row[1] - 1e-12);
  }
}

TEST_CASE("expansion sweep crossing is consistent on every row") {
  const Table t = sweep_expansion(default_study(), coarse());
  const std::size_t bw = column(t, "min_bw_norm");
  const std::size_t rev = column(t, "max_revenue_norm");
  for (const auto& row : t.rows) {
    INFO("alpha ", row[0]);
    CHECK((row[bw] < 1.0) == (row[rev] > 1.0));
    CHECK(row[column(t, "const_1.0")] == 1.0);
  }
}

TEST_CASE("admission sweep") {
  SweepSpec spec = coarse();
  spec.alpha_min = 0.9;
  spec.max_drops = 2;
  const Table t = sweep_admission(default_study(), spec);
  CHECK(t.header == sweep_header(Sweep::Admission));
  CHECK(t.rows.size() == alpha_grid(spec).size() * 3);
  const std::size_t n = default_study().ne.served.size();
  for (const auto& row : t.rows) {
    CHECK(row[2] == n - row[1]);
    CHECK(row[5] >= 0.0);
    CHECK((row[6] == 1.0) == (row[5] < 1.0));
    CHECK(row[4] >= 0.0);
    CHECK(row[4] <= 1.0);
  }
  spec.max_drops = n;
  CHECK_THROWS_AS(sweep_admission(default_study(), spec), std::invalid_argument);
}

TEST_CASE("no equilibrium is reported") {
  ScenarioSpec s;
  s.c3 = 1.0;
  CHECK_THROWS_AS(prepare_study(s), NoEquilibrium);
  const Table t = ne_summary(game::NashResult{});
  CHECK(t.header == ne_summary_header());
  CHECK(t.rows.at(0).back() == 0.0);
}

TEST_CASE("psychophysics reader") {
  std::istringstream in(kPsychData);
  const auto recs = read_psychophysics(in);
  REQUIRE(recs.size() == 4);
  CHECK(recs[0].valid);
  CHECK_FALSE(recs[2].valid);
  CHECK(recs[1].mean_fps == 10.0);

  std::istringstream bad_header("loss,delay\n1,2\n");
  CHECK_THROWS_AS(read_psychophysics(bad_header), std::runtime_error);
  std::istringstream bad_row(
      "packet_loss_pct,delay_ms,rating_mean,rating_dev,fps_mean,fps_dev\n0,0,x,0,1,0\n");
  CHECK_THROWS_AS(read_psychophysics(bad_row), std::runtime_error);
  CHECK_THROWS_AS(read_psychophysics_file("/nonexistent/psych.csv"), std::runtime_error);
}

TEST_CASE("psychophysics mapping and fit") {
  std::istringstream in(kPsychData);
  const auto recs = read_psychophysics(in);
  const PsychFit f = fit_psychophysics(recs);
  REQUIRE(f.samples.size() == 3);
  CHECK(f.samples[0].sample.p == 1.0);
  CHECK(f.samples[0].sample.wp == 1.0);
  CHECK(f.samples[1].sample.p == 0.5);
  CHECK(f.samples[1].sample.wp == 0.5);
  CHECK(f.samples[2].sample.p == doctest::Approx(0.1));
  CHECK(f.samples[2].sample.wp == 0.0);

  const auto bundled = read_psychophysics_file("data/psychophysics.csv");
  CHECK(bundled.size() == 40);
  const PsychFit g = fit_psychophysics(bundled);
  double max_fps = 0;
  for (const auto& r : bundled)
    if (r.valid) max_fps = std::max(max_fps, r.mean_fps);
  CHECK(max_fps == 21.84);
  for (const MappedSample& m : g.samples) {
    CHECK(m.sample.p > 0.0);
    CHECK(m.sample.p <= 1.0);
    CHECK(m.sample.wp >= 0.0);
    CHECK(m.sample.wp <= 1.0);
  }
  CHECK(g.fit.model.alpha() >= 0.45);
  CHECK(g.fit.model.alpha() <= 0.70);
  const Table t = psychophysics_table(bundled, g);
  CHECK(t.header == psychophysics_header());
  CHECK(t.rows.size() == g.samples.size());

  std::vector<PsychRecord> one(recs.begin(), recs.begin() + 1);
  CHECK_THROWS_AS(fit_psychophysics(one), weighting::InsufficientData);
}
