#pragma once

// Deterministic numerical studies over the skewness alpha, and the fit of a
// Prelec curve to subjective video-quality measurements.

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "prospect_pricing/channel.hpp"
#include "prospect_pricing/game.hpp"
#include "prospect_pricing/weighting.hpp"

namespace pricing::experiments {

inline constexpr std::uint64_t kDefaultSeed = 36;

enum class BandwidthRule { Margin, Absolute };

/// Everything needed to draw a random cell and size its bandwidth.
struct ScenarioSpec {
  double tx_power_dbm = 40.0;
  double antenna_constant_db = -64.5;
  double noise_psd_dbm_per_hz = -174.0;
  double reference_distance_m = 20.0;
  double pathloss_exponent = 4.0;
  double shadowing_sigma_db = 4.0;
  double cell_radius_m = 800.0;
  std::size_t user_count = 10;
  double pricing_coefficient = 2e-3;
  double pricing_exponent = 0.82;
  double benefit_coefficient = 1e-2;
  double benefit_exponent = 0.65;
  double c1 = 1e-6 / 3.0;
  double c3 = 1e-8;
  BandwidthRule bandwidth_rule = BandwidthRule::Margin;
  // Margin rule: BW_max = (1 + margin) * sum of minimum bandwidths at the
  // unconstrained-optimal rate.
  double bandwidth_margin = 0.10;
  double total_bandwidth_hz = 0.0;  // absolute rule
  std::uint64_t seed = kDefaultSeed;

  void validate() const;
  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

/// Users uniform over the disc (radius R sqrt(u), at least d0 from the base
/// station), each with one N(0, sigma) shadowing draw.
game::Scenario build_scenario(const ScenarioSpec& spec);

class NoEquilibrium : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Study {
  game::Scenario scenario;
  game::NashResult ne;
};

/// Builds the scenario and solves it. Throws NoEquilibrium.
Study prepare_study(const ScenarioSpec& spec);

struct SweepSpec {
  double alpha_min = 0.80;
  double alpha_max = 1.00;
  double alpha_step = 0.01;
  ScenarioSpec scenario;
  std::size_t max_drops = 3;

  void validate() const;
};

/// Ascending alpha values alpha_min, alpha_min + step, ... up to alpha_max.
std::vector<double> alpha_grid(const SweepSpec& spec);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Header line then one line per row, numbers as %.9g.
void write_csv(std::ostream& os, const Table& table);
std::string format_number(double v);

enum class Sweep { RevenueLoss, Price, Expansion, Admission, Comparison };

/// Column names of each sweep, in output order.
std::vector<std::string> sweep_header(Sweep sweep);
Table run_sweep(Sweep sweep, const Study& study, const SweepSpec& spec);

Table sweep_revenue_loss(const Study& study, const SweepSpec& spec);
Table sweep_price(const Study& study, const SweepSpec& spec);
Table sweep_expansion(const Study& study, const SweepSpec& spec);
/// One row per (alpha, drops) for drops = 0..max_drops.
Table sweep_admission(const Study& study, const SweepSpec& spec);
/// Thresholds and recovered revenue for the unpriced baseline, expansion,
/// single-drop admission control and rate control.
Table sweep_comparison(const Study& study, const SweepSpec& spec);

std::vector<std::string> ne_summary_header();
Table ne_summary(const game::NashResult& ne);

struct PsychRecord {
  double packet_loss_pct = 0.0;
  double delay_ms = 0.0;
  double mean_rating = 0.0;
  double rating_dev = 0.0;
  double mean_fps = 0.0;
  double fps_dev = 0.0;
  bool valid = false;
};

/// Reads the six-column psychophysics CSV. An empty fps_mean or rating_mean
/// marks the cell invalid. Throws std::runtime_error on malformed files.
std::vector<PsychRecord> read_psychophysics(std::istream& is);
std::vector<PsychRecord> read_psychophysics_file(const std::string& path);

struct MappedSample {
  std::size_t record = 0;
  weighting::ProbabilitySample sample;
};

struct PsychFit {
  weighting::AlphaFit fit;
  std::vector<MappedSample> samples;
};

/// p = fps / max fps over valid records, w = (rating - 1) / 3, then a
/// least-squares Prelec fit. Throws weighting::InsufficientData for fewer than
/// two valid records.
PsychFit fit_psychophysics(const std::vector<PsychRecord>& records);

std::vector<std::string> psychophysics_header();
Table psychophysics_table(const std::vector<PsychRecord>& records, const PsychFit& fit);

}  // namespace pricing::experiments
