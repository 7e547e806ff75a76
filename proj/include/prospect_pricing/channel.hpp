#pragma once

// Per-user radio link: simplified path loss with log-normal shadowing, and the
// Rayleigh-outage service guarantee
//
//   P(B > b | BW) = exp(-(2^{b/BW} - 1) / (P_r / (N0 * BW)))
//
// which is strictly increasing in BW, strictly decreasing in b, and bounded
// above by exp(-b ln2 N0 / P_r) as BW grows without limit.

#include <stdexcept>

namespace pricing::channel {

/// The requested guarantee cannot be reached at this rate with any bandwidth.
class UnattainableGuarantee : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double db_to_linear(double db);
double linear_to_db(double linear);
double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

struct LinkBudget {
  double tx_power_dbm = 40.0;
  double antenna_constant_db = -64.5;
  double pathloss_exponent = 4.0;
  double distance_m = 20.0;
  double reference_distance_m = 20.0;
  double shadowing_db = 0.0;
  double noise_psd_dbm_per_hz = -174.0;

  /// Throws std::invalid_argument when distance < d0, d0 <= 0 or gamma <= 0.
  void validate() const;
};

/// P_t + K - 10 gamma log10(d / d0) + shadowing, in dBm.
double received_power_dbm(const LinkBudget& link);

class UserChannel {
 public:
  UserChannel(double received_power_w, double noise_psd_w_per_hz);

  static UserChannel from_link_budget(const LinkBudget& link);

  double received_power_w() const { return received_power_w_; }
  double noise_psd_w_per_hz() const { return noise_psd_w_per_hz_; }
  /// P_r / N0, in Hz: the bandwidth at which the SNR would be 0 dB.
  double snr_bandwidth_hz() const { return received_power_w_ / noise_psd_w_per_hz_; }

 private:
  double received_power_w_;
  double noise_psd_w_per_hz_;
};

/// Probability that the delivered rate exceeds `rate_bps` given `bandwidth_hz`.
/// Returns 1 at zero rate. Throws std::domain_error if bandwidth <= 0 or
/// rate < 0.
double service_guarantee(double rate_bps, double bandwidth_hz, const UserChannel& ch);

/// -ln service_guarantee, finite where the guarantee itself underflows.
double guarantee_exponent(double rate_bps, double bandwidth_hz, const UserChannel& ch);

/// Least upper bound of service_guarantee over bandwidth at a fixed rate.
double guarantee_supremum(double rate_bps, const UserChannel& ch);

/// The bandwidth at which service_guarantee(rate, bw) equals `target`.
/// Throws UnattainableGuarantee when target >= guarantee_supremum(rate) and
/// std::domain_error for rate <= 0 or target <= 0.
double min_bandwidth(double rate_bps, double target, const UserChannel& ch);

/// As min_bandwidth, with the target given as its exponent -ln target.
double min_bandwidth_for_exponent(double rate_bps, double exponent, const UserChannel& ch);

}  // namespace pricing::channel
