#include "prospect_pricing/weighting.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "prospect_pricing/numeric.hpp"

namespace pricing::weighting {

namespace {

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error(std::string(what) + " must lie in [0, 1], got " +
                            std::to_string(p));
}

// -ln p, accurate for p close to one.
double neg_log(double p) { return p > 0.5 ? -std::log1p(p - 1.0) : -std::log(p); }

}  // namespace

WeightingModel::WeightingModel(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::domain_error("Prelec alpha must lie in (0, 1], got " +
                            std::to_string(alpha));
}

double weight(double p, const WeightingModel& model) {
  require_probability(p, "probability");
  if (p == 0.0 || p == 1.0 || model.is_identity()) return p;
  return std::exp(-std::pow(neg_log(p), model.alpha()));
}

double inverse_weight(double q, const WeightingModel& model) {
  require_probability(q, "weighted probability");
  if (q == 0.0 || q == 1.0 || model.is_identity()) return q;
  return std::exp(-std::pow(neg_log(q), 1.0 / model.alpha()));
}

double weight_of_exponent(double t, const WeightingModel& model) {
  if (!(t >= 0.0)) throw std::domain_error("exponent must be non-negative");
  return std::exp(-std::pow(t, model.alpha()));
}

double inverse_weight_exponent(double q, const WeightingModel& model) {
  require_probability(q, "weighted probability");
  return std::pow(neg_log(q), 1.0 / model.alpha());
}

Lottery::Lottery(std::vector<Outcome> outcomes) : outcomes_(std::move(outcomes)) {
  if (outcomes_.empty()) throw std::invalid_argument("lottery has no outcomes");
  double total = 0.0;
  for (const Outcome& o : outcomes_) {
    require_probability(o.probability, "outcome probability");
    total += o.probability;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("lottery probabilities sum to " +
                                std::to_string(total) + ", expected 1");
}

double lottery_value(const Lottery& lottery, const WeightingModel& model) {
  double value = 0.0;
  for (const Outcome& o : lottery.outcomes())
    value += o.payoff * weight(o.probability, model);
  return value;
}

double weighting_mse(std::span<const ProbabilitySample> samples, double alpha) {
  const WeightingModel model(alpha);
  double sum = 0.0;
  for (const ProbabilitySample& s : samples) {
    const double d = weight(s.p, model) - s.wp;
    sum += d * d;
  }
  return sum / static_cast<double>(samples.size());
}

AlphaFit fit_alpha(std::span<const ProbabilitySample> samples) {
  if (samples.size() < 2)
    throw InsufficientData("fit_alpha needs at least two samples, got " +
                           std::to_string(samples.size()));
  for (const ProbabilitySample& s : samples) {
    require_probability(s.p, "sample p");
    require_probability(s.wp, "sample w(p)");
  }

  constexpr int kGridPoints = 1000;
  constexpr double kStep = 1.0 / kGridPoints;
  int best_index = 1;
  double best_mse = weighting_mse(samples, kStep);
  for (int i = 2; i <= kGridPoints; ++i) {
    const double mse = weighting_mse(samples, i * kStep);
    if (mse < best_mse) {
      best_mse = mse;
      best_index = i;
    }
  }

  const double lo = std::max((best_index - 1) * kStep, 1e-9);
  const double hi = std::min((best_index + 1) * kStep, 1.0);
  const numeric::Extremum refined = numeric::golden_section_max(
      [&](double a) { return -weighting_mse(samples, a); }, lo, hi, 1e-7);

  double alpha = best_index * kStep;
  if (-refined.value < best_mse) {
    alpha = refined.argument;
    best_mse = -refined.value;
  }
  return {WeightingModel(alpha), best_mse};
}

}  // namespace pricing::weighting
