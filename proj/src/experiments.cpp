#include "prospect_pricing/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "prospect_pricing/prospect.hpp"

namespace pricing::experiments {

namespace {

using weighting::WeightingModel;

double norm_loss(double loss, double revenue) {
  return std::clamp(loss / revenue, 0.0, 1.0);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    const auto first = field.find_first_not_of(" \t\r");
    const auto last = field.find_last_not_of(" \t\r");
    out.push_back(first == std::string::npos ? "" : field.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_field(const std::string& s, std::size_t line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size())
    throw std::runtime_error("line " + std::to_string(line_no) + ": bad number '" + s + "'");
  return v;
}

}  // namespace

void ScenarioSpec::validate() const {
  if (!(reference_distance_m > 0.0)) throw std::invalid_argument("reference_distance_m");
  if (!(pathloss_exponent > 0.0)) throw std::invalid_argument("pathloss_exponent");
  if (!(shadowing_sigma_db >= 0.0)) throw std::invalid_argument("shadowing_sigma_db");
  if (!(cell_radius_m >= reference_distance_m)) throw std::invalid_argument("cell_radius_m");
  if (user_count == 0) throw std::invalid_argument("user_count");
  if (!(pricing_coefficient > 0.0)) throw std::invalid_argument("pricing_coefficient");
  if (!(pricing_exponent > 0.0 && pricing_exponent <= 1.0))
    throw std::invalid_argument("pricing_exponent");
  if (!(benefit_coefficient > 0.0)) throw std::invalid_argument("benefit_coefficient");
  if (!(benefit_exponent > 0.0 && benefit_exponent <= 1.0))
    throw std::invalid_argument("benefit_exponent");
  if (!(c1 >= 0.0)) throw std::invalid_argument("c1");
  if (!(c3 >= 0.0)) throw std::invalid_argument("c3");
  if (bandwidth_rule == BandwidthRule::Margin && !(bandwidth_margin > 0.0))
    throw std::invalid_argument("bandwidth_margin");
  if (bandwidth_rule == BandwidthRule::Absolute && !(total_bandwidth_hz > 0.0))
    throw std::invalid_argument("total_bandwidth_hz");
}

game::Scenario build_scenario(const ScenarioSpec& spec) {
  spec.validate();
  game::Scenario s;
  s.pricing = {{spec.pricing_coefficient, spec.pricing_exponent}};
  s.cost = {spec.c1, spec.c3};
  s.rng_seed = spec.seed;

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> shadow(0.0, spec.shadowing_sigma_db);
  for (std::size_t i = 0; i < spec.user_count; ++i) {
    channel::LinkBudget link;
    link.tx_power_dbm = spec.tx_power_dbm;
    link.antenna_constant_db = spec.antenna_constant_db;
    link.pathloss_exponent = spec.pathloss_exponent;
    link.reference_distance_m = spec.reference_distance_m;
    link.noise_psd_dbm_per_hz = spec.noise_psd_dbm_per_hz;
    link.distance_m =
        std::max(spec.cell_radius_m * std::sqrt(unit(rng)), spec.reference_distance_m);
    link.shadowing_db = spec.shadowing_sigma_db > 0.0 ? shadow(rng) : 0.0;
    s.users.push_back({channel::UserChannel::from_link_budget(link),
                       {{spec.benefit_coefficient, spec.benefit_exponent}}});
  }

  if (spec.bandwidth_rule == BandwidthRule::Absolute) {
    s.total_bandwidth_hz = spec.total_bandwidth_hz;
  } else {
    const double rate = game::unconstrained_rate(s.pricing, s.cost);
    double sum = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double bw = game::min_bandwidth_or_inf(rate, i, s);
      if (std::isfinite(bw)) sum += bw;
    }
    if (!(sum > 0.0))
      throw NoEquilibrium("no user can be served at the unconstrained-optimal rate");
    s.total_bandwidth_hz = (1.0 + spec.bandwidth_margin) * sum;
  }
  return s;
}

Study prepare_study(const ScenarioSpec& spec) {
  Study study{build_scenario(spec), {}};
  study.ne = game::solve_nash(study.scenario);
  if (!study.ne.has_equilibrium) throw NoEquilibrium("the scenario has no profitable equilibrium");
  return study;
}

void SweepSpec::validate() const {
  if (!(alpha_min > 0.0 && alpha_min <= alpha_max && alpha_max <= 1.0))
    throw std::invalid_argument("alpha range must satisfy 0 < alpha_min <= alpha_max <= 1");
  if (!(alpha_step > 0.0)) throw std::invalid_argument("alpha_step must be positive");
}

std::vector<double> alpha_grid(const SweepSpec& spec) {
  spec.validate();
  const auto count =
      static_cast<std::size_t>(std::floor((spec.alpha_max - spec.alpha_min) / spec.alpha_step +
                                          1e-9)) +
      1;
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double a = spec.alpha_min + static_cast<double>(k) * spec.alpha_step;
    out.push_back(std::min(std::round(a * 1e9) / 1e9, spec.alpha_max));
  }
  return out;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_csv(std::ostream& os, const Table& table) {
  for (std::size_t k = 0; k < table.header.size(); ++k)
    os << (k ? "," : "") << table.header[k];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << format_number(row[k]);
    os << '\n';
  }
}

std::vector<std::string> sweep_header(Sweep sweep) {
  switch (sweep) {
    case Sweep::RevenueLoss: return {"alpha", "loss_strict_norm", "loss_realloc_norm"};
    case Sweep::Price: return {"alpha", "price_strict_norm", "price_realloc_norm"};
    case Sweep::Expansion: return {"alpha", "min_bw_norm", "max_revenue_norm", "const_1.0"};
    case Sweep::Admission:
      return {"alpha", "drops", "served", "price_norm", "loss_norm", "threshold_norm", "feasible"};
    case Sweep::Comparison:
      return {"alpha",
              "bw_baseline_norm",
              "bw_expansion_norm",
              "bw_admission_norm",
              "bw_rate_norm",
              "rev_baseline_norm",
              "rev_expansion_norm",
              "rev_admission_norm",
              "rev_rate_norm"};
  }
  return {};
}

Table run_sweep(Sweep sweep, const Study& study, const SweepSpec& spec) {
  switch (sweep) {
    case Sweep::RevenueLoss: return sweep_revenue_loss(study, spec);
    case Sweep::Price: return sweep_price(study, spec);
    case Sweep::Expansion: return sweep_expansion(study, spec);
    case Sweep::Admission: return sweep_admission(study, spec);
    case Sweep::Comparison: return sweep_comparison(study, spec);
  }
  return {};
}

Table sweep_revenue_loss(const Study& study, const SweepSpec& spec) {
  Table t{sweep_header(Sweep::RevenueLoss), {}};
  const double u = study.ne.sp_revenue;
  for (double a : alpha_grid(spec)) {
    const WeightingModel m(a);
    const auto strict = prospect::loss_strict_rrm(study.scenario, study.ne, m);
    const auto realloc = prospect::loss_with_reallocation(study.scenario, study.ne, m);
    t.rows.push_back({a, norm_loss(strict.total_loss, u), norm_loss(realloc.total_loss, u)});
  }
  return t;
}

Table sweep_price(const Study& study, const SweepSpec& spec) {
  Table t{sweep_header(Sweep::Price), {}};
  const double r = study.ne.price;
  for (double a : alpha_grid(spec)) {
    const WeightingModel m(a);
    const auto strict = prospect::loss_strict_rrm(study.scenario, study.ne, m);
    const auto realloc = prospect::loss_with_reallocation(study.scenario, study.ne, m);
    t.rows.push_back({a, strict.price / r, realloc.price / r});
  }
  return t;
}

Table sweep_expansion(const Study& study, const SweepSpec& spec) {
  Table t{sweep_header(Sweep::Expansion), {}};
  const double bw = study.ne.total_bandwidth_hz;
  const double u = study.ne.sp_revenue;
  for (double a : alpha_grid(spec)) {
    const auto e = prospect::bandwidth_expansion(study.scenario, study.ne, WeightingModel(a));
    t.rows.push_back({a, e.min_bandwidth_threshold_hz / bw, e.max_revenue / u, 1.0});
  }
  return t;
}

Table sweep_admission(const Study& study, const SweepSpec& spec) {
  Table t{sweep_header(Sweep::Admission), {}};
  const std::size_t n = study.ne.served.size();
  if (spec.max_drops >= n)
    throw std::invalid_argument("max_drops must be smaller than the number of served users");
  const double bw = study.ne.total_bandwidth_hz;
  const double u = study.ne.sp_revenue;
  const double r = study.ne.price;
  for (double a : alpha_grid(spec)) {
    const WeightingModel m(a);
    for (std::size_t k = 0; k <= spec.max_drops; ++k) {
      const auto o = prospect::admission_control_fixed(study.scenario, study.ne, m, k);
      t.rows.push_back({a, static_cast<double>(k), static_cast<double>(o.served.size()),
                        o.new_price / r, norm_loss(o.revenue_loss, u),
                        o.min_bandwidth_threshold_hz / bw, o.feasible ? 1.0 : 0.0});
    }
  }
  return t;
}

Table sweep_comparison(const Study& study, const SweepSpec& spec) {
  Table t{sweep_header(Sweep::Comparison), {}};
  const double bw = study.ne.total_bandwidth_hz;
  const double u = study.ne.sp_revenue;
  const std::size_t drops = study.ne.served.size() > 1 ? 1 : 0;
  for (double a : alpha_grid(spec)) {
    const WeightingModel m(a);
    const auto base = prospect::no_pricing_expansion(study.scenario, study.ne, m);
    const auto exp = prospect::bandwidth_expansion(study.scenario, study.ne, m);
    const auto adm = prospect::admission_control_fixed(study.scenario, study.ne, m, drops);
    const auto rc = prospect::rate_control(study.scenario, study.ne, m);
    t.rows.push_back({a, base.min_bandwidth_threshold_hz / bw, exp.min_bandwidth_threshold_hz / bw,
                      adm.min_bandwidth_threshold_hz / bw, rc.min_bandwidth_threshold_hz / bw,
                      base.recovered_revenue / u, exp.recovered_revenue / u,
                      adm.recovered_revenue / u, rc.recovered_revenue / u});
  }
  return t;
}

std::vector<std::string> ne_summary_header() {
  return {"rate_bps", "served_count", "price", "sp_revenue", "total_bandwidth_hz",
          "has_equilibrium"};
}

Table ne_summary(const game::NashResult& ne) {
  return {ne_summary_header(),
          {{ne.rate_bps, static_cast<double>(ne.served.size()), ne.price, ne.sp_revenue,
            ne.total_bandwidth_hz, ne.has_equilibrium ? 1.0 : 0.0}}};
}

std::vector<PsychRecord> read_psychophysics(std::istream& is) {
  static const std::vector<std::string> kColumns{"packet_loss_pct", "delay_ms", "rating_mean",
                                                 "rating_dev",      "fps_mean", "fps_dev"};
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("psychophysics file is empty");
  if (split_csv_line(line) != kColumns)
    throw std::runtime_error("psychophysics header must be: packet_loss_pct,delay_ms,"
                             "rating_mean,rating_dev,fps_mean,fps_dev");
  std::vector<PsychRecord> out;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != kColumns.size())
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected 6 fields");
    PsychRecord r;
    r.packet_loss_pct = parse_field(f[0], line_no);
    r.delay_ms = parse_field(f[1], line_no);
    r.valid = !f[2].empty() && !f[4].empty();
    if (r.valid) {
      r.mean_rating = parse_field(f[2], line_no);
      r.mean_fps = parse_field(f[4], line_no);
      r.rating_dev = f[3].empty() ? 0.0 : parse_field(f[3], line_no);
      r.fps_dev = f[5].empty() ? 0.0 : parse_field(f[5], line_no);
      if (r.mean_rating < 1.0 || r.mean_rating > 4.0 || !(r.mean_fps > 0.0))
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": rating must lie in [1, 4] and fps must be positive");
    }
    out.push_back(r);
  }
  return out;
}

std::vector<PsychRecord> read_psychophysics_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_psychophysics(in);
}

PsychFit fit_psychophysics(const std::vector<PsychRecord>& records) {
  double max_fps = 0.0;
  for (const PsychRecord& r : records)
    if (r.valid) max_fps = std::max(max_fps, r.mean_fps);
  std::vector<MappedSample> mapped;
  for (std::size_t k = 0; k < records.size(); ++k) {
    const PsychRecord& r = records[k];
    if (!r.valid) continue;
    mapped.push_back({k, {r.mean_fps / max_fps, (r.mean_rating - 1.0) / 3.0}});
  }
  if (mapped.size() < 2)
    throw weighting::InsufficientData("at least two valid psychophysics records are needed");
  std::vector<weighting::ProbabilitySample> samples;
  for (const MappedSample& m : mapped) samples.push_back(m.sample);
  return {weighting::fit_alpha(samples), std::move(mapped)};
}

std::vector<std::string> psychophysics_header() {
  return {"packet_loss_pct", "delay_ms", "p", "wp", "w_fit", "alpha", "mse"};
}

Table psychophysics_table(const std::vector<PsychRecord>& records, const PsychFit& fit) {
  Table t{psychophysics_header(), {}};
  for (const MappedSample& m : fit.samples) {
    const PsychRecord& r = records.at(m.record);
    t.rows.push_back({r.packet_loss_pct, r.delay_ms, m.sample.p, m.sample.wp,
                      weighting::weight(m.sample.p, fit.fit.model), fit.fit.model.alpha(),
                      fit.fit.mse});
  }
  return t;
}

}  // namespace pricing::experiments
