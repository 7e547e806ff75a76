#include "prospect_pricing/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "prospect_pricing/numeric.hpp"

namespace pricing::channel {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }
double dbm_to_watts(double dbm) { return db_to_linear(dbm - 30.0); }
double watts_to_dbm(double watts) { return linear_to_db(watts) + 30.0; }

void LinkBudget::validate() const {
  if (!(reference_distance_m > 0.0))
    throw std::invalid_argument("reference distance must be positive");
  if (!(distance_m >= reference_distance_m))
    throw std::invalid_argument("distance " + std::to_string(distance_m) +
                                " m is inside the reference distance");
  if (!(pathloss_exponent > 0.0))
    throw std::invalid_argument("path-loss exponent must be positive");
}

double received_power_dbm(const LinkBudget& link) {
  link.validate();
  return link.tx_power_dbm + link.antenna_constant_db -
         10.0 * link.pathloss_exponent *
             std::log10(link.distance_m / link.reference_distance_m) +
         link.shadowing_db;
}

UserChannel::UserChannel(double received_power_w, double noise_psd_w_per_hz)
    : received_power_w_(received_power_w), noise_psd_w_per_hz_(noise_psd_w_per_hz) {
  if (!(received_power_w > 0.0) || !(noise_psd_w_per_hz > 0.0))
    throw std::invalid_argument("received power and noise PSD must be positive");
}

UserChannel UserChannel::from_link_budget(const LinkBudget& link) {
  return UserChannel(dbm_to_watts(received_power_dbm(link)),
                     dbm_to_watts(link.noise_psd_dbm_per_hz));
}

double guarantee_exponent(double rate_bps, double bandwidth_hz, const UserChannel& ch) {
  if (!(bandwidth_hz > 0.0))
    throw std::domain_error("bandwidth must be positive");
  if (!(rate_bps >= 0.0)) throw std::domain_error("rate must be non-negative");
  // 2^{b/BW} - 1 via expm1 keeps precision in the wideband limit.
  const double excess = std::expm1(std::numbers::ln2 * rate_bps / bandwidth_hz);
  return excess * bandwidth_hz / ch.snr_bandwidth_hz();
}

double service_guarantee(double rate_bps, double bandwidth_hz, const UserChannel& ch) {
  return std::exp(-guarantee_exponent(rate_bps, bandwidth_hz, ch));
}

double guarantee_supremum(double rate_bps, const UserChannel& ch) {
  if (!(rate_bps >= 0.0)) throw std::domain_error("rate must be non-negative");
  return std::exp(-rate_bps * std::numbers::ln2 / ch.snr_bandwidth_hz());
}

double min_bandwidth(double rate_bps, double target, const UserChannel& ch) {
  if (!(target > 0.0)) throw std::domain_error("target guarantee must be positive");
  if (!(target < 1.0) || target >= guarantee_supremum(rate_bps, ch))
    throw UnattainableGuarantee("guarantee " + std::to_string(target) +
                                " is not reachable at rate " +
                                std::to_string(rate_bps) + " bps");
  return min_bandwidth_for_exponent(rate_bps, -std::log(target), ch);
}

double min_bandwidth_for_exponent(double rate_bps, double exponent, const UserChannel& ch) {
  if (!(rate_bps > 0.0)) throw std::domain_error("rate must be positive");
  if (!std::isfinite(exponent)) throw std::domain_error("target guarantee must be positive");
  if (!(exponent > rate_bps * std::numbers::ln2 / ch.snr_bandwidth_hz()))
    throw UnattainableGuarantee("guarantee exponent " + std::to_string(exponent) +
                                " is not reachable at rate " +
                                std::to_string(rate_bps) + " bps");

  const auto reaches = [&](double bw) { return guarantee_exponent(rate_bps, bw, ch) <= exponent; };
  double lo = rate_bps;
  double hi = rate_bps;
  if (reaches(hi)) {
    while (reaches(lo)) {
      hi = lo;
      lo *= 0.5;
    }
  } else {
    constexpr double kLargestBandwidth = 1e250;
    while (!reaches(hi)) {
      lo = hi;
      hi *= 2.0;
      if (hi > kLargestBandwidth)
        throw UnattainableGuarantee("guarantee too close to its supremum to resolve");
    }
  }
  return numeric::bisect_threshold_log(reaches, lo, hi, 1e-14).above;
}

}  // namespace pricing::channel
