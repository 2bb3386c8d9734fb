#ifndef D2D_METRICS_HPP
#define D2D_METRICS_HPP

#include <cmath>

#include "d2d/fading.hpp"
#include "d2d/linkmodel.hpp"
#include "d2d/powerctl.hpp"

namespace d2d {

enum class DecodeMode { fixed, computed };

struct AnnouncerConfig {
  double duration_s = 0.005;
  double payload_bytes = 100.0;
  DecodeMode mode = DecodeMode::fixed;
  double fixed_probability = 0.99;

  void validate() const {
    if (!(duration_s > 0.0)) throw DomainError("announcement duration must be positive");
    if (!(payload_bytes > 0.0)) throw DomainError("payload must be positive");
    if (mode == DecodeMode::fixed && !(fixed_probability > 0.0 && fixed_probability < 1.0))
      throw DomainError("fixed announcer decode probability must lie in (0, 1)");
  }
};

struct MetricsReport {
  double sum_rate_bps = 0.0;
  double energy_per_bit_j = 0.0;
  double outage_probability = 0.0;
  double announcer_decode_probability = 0.0;
  double expected_power_w = 0.0;
};

/// Payload spread over the announcement slot: rho_A = 8 * payload / (W * T_A).
inline SpectralEfficiency payload_to_rate(const AnnouncerConfig& cfg, double bandwidth_hz) {
  cfg.validate();
  if (!(bandwidth_hz > 0.0)) throw DomainError("bandwidth must be positive");
  return SpectralEfficiency(cfg.payload_bytes * 8.0 / (bandwidth_hz * cfg.duration_s));
}

inline double rate_to_payload(SpectralEfficiency rho_a, double bandwidth_hz, double duration_s) {
  return rho_a.value() * bandwidth_hz * duration_s / 8.0;
}

/// Pr{gamma_A >= Gamma_A}: the configured constant, or the Rayleigh tail
/// exp(-Gamma_A / mean_snr) for the budget's mean announcer SNR.
inline double announcer_decode_probability(const AnnouncerConfig& cfg, const LinkBudget& budget,
                                           const FadingModel& model, SnrThreshold target_a) {
  if (cfg.mode == DecodeMode::fixed) return cfg.fixed_probability;
  return std::exp(-target_a.value() / budget.announcer_mean_snr(model.mean_gain));
}

/// Expected delivered rate per used resource block, in bits/s. The
/// orthogonal scheme spends a second block on the announcement.
inline double sum_rate(SpectralEfficiency rho_b, SpectralEfficiency rho_a, double bandwidth_hz,
                       double downlink_success, double announcer_success, Scheme scheme) {
  const auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!in_unit(downlink_success) || !in_unit(announcer_success))
    throw DomainError("success probabilities must lie in [0, 1]");
  const double delivered =
      bandwidth_hz * (rho_b.value() * downlink_success + rho_a.value() * announcer_success);
  return scheme == Scheme::underlay ? delivered : delivered / 2.0;
}

/// Energy per delivered bit, E[P_B] / S.
inline double energy_per_bit(double expected_power_w, double sum_rate_bps) {
  if (!(sum_rate_bps > 0.0)) throw DomainError("energy per bit needs a positive sum-rate");
  return expected_power_w / sum_rate_bps;
}

}  // namespace d2d

#endif  // D2D_METRICS_HPP
