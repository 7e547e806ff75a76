#pragma once

// Prelec probability weighting and the valuation of discrete lotteries.
//
// w(p) = exp(-(-ln p)^alpha), alpha in (0, 1]. alpha = 1 is the expected
// utility case (w is the identity). Payoffs are valued linearly; only the
// probability half of prospect theory is modelled here.

#include <span>
#include <stdexcept>
#include <vector>

namespace pricing::weighting {

class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class WeightingModel {
 public:
  /// Throws std::domain_error unless 0 < alpha <= 1.
  explicit WeightingModel(double alpha);

  static WeightingModel expected_utility() { return WeightingModel(1.0); }

  double alpha() const { return alpha_; }
  bool is_identity() const { return alpha_ == 1.0; }

  friend bool operator==(const WeightingModel&, const WeightingModel&) = default;

 private:
  double alpha_;
};

/// w(p). w(0) = 0 and w(1) = 1 by continuity. Throws std::domain_error for
/// p outside [0, 1].
double weight(double p, const WeightingModel& model);

/// w^{-1}(q) = exp(-(-ln q)^{1/alpha}).
double inverse_weight(double q, const WeightingModel& model);

/// Both maps in terms of exponents t = -ln p, for probabilities below the
/// double range: w(e^{-t}) = e^{-t^alpha}, and t such that w(e^{-t}) = q.
double weight_of_exponent(double t, const WeightingModel& model);
double inverse_weight_exponent(double q, const WeightingModel& model);

struct Outcome {
  double payoff;
  double probability;
};

class Lottery {
 public:
  /// Probabilities must lie in [0, 1] and sum to 1 within 1e-9.
  explicit Lottery(std::vector<Outcome> outcomes);

  std::span<const Outcome> outcomes() const { return outcomes_; }

 private:
  std::vector<Outcome> outcomes_;
};

/// Sum of payoff_i * w(p_i). With the identity model this is the plain
/// expectation.
double lottery_value(const Lottery& lottery, const WeightingModel& model);

struct ProbabilitySample {
  double p;
  double wp;
};

struct AlphaFit {
  WeightingModel model;
  double mse;
};

/// Mean squared error of w(., alpha) against the samples.
double weighting_mse(std::span<const ProbabilitySample> samples, double alpha);

/// Least-squares Prelec fit: grid over (0, 1] in steps of 0.001, then
/// golden-section refinement to 1e-6 around the best grid point. Throws
/// InsufficientData for fewer than two samples.
AlphaFit fit_alpha(std::span<const ProbabilitySample> samples);

}  // namespace pricing::weighting
