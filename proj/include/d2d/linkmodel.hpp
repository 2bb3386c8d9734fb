#ifndef D2D_LINKMODEL_HPP
#define D2D_LINKMODEL_HPP

#include <algorithm>
#include <cmath>

#include "d2d/numerics.hpp"

namespace d2d {

/// Rate per unit bandwidth, rho = R / W, in bits/s/Hz.
class SpectralEfficiency {
public:
  constexpr SpectralEfficiency() = default;
  explicit SpectralEfficiency(double bits_per_s_per_hz) : value_(bits_per_s_per_hz) {
    if (!(value_ >= 0.0)) throw DomainError("spectral efficiency must be nonnegative");
  }
  constexpr double value() const noexcept { return value_; }

private:
  double value_ = 0.0;
};

/// Linear (not dB) signal-to-noise ratio.
class SnrThreshold {
public:
  constexpr SnrThreshold() = default;
  explicit SnrThreshold(double linear) : value_(linear) {
    if (!(value_ >= 0.0)) throw DomainError("SNR must be nonnegative");
  }
  constexpr double value() const noexcept { return value_; }

private:
  double value_ = 0.0;
};

/// Relative slack applied when comparing a rate against a capacity. Channel
/// inversion lands exactly on the capacity boundary, where rounding in the
/// power and SNR arithmetic is otherwise indistinguishable from an outage.
inline constexpr double kRateSlack = 1e-12;

inline bool rate_fits(double rate, double capacity) noexcept {
  return rate <= capacity + kRateSlack * std::max(1.0, std::abs(capacity));
}

/// Shannon capacity per hertz, log2(1 + snr).
inline SpectralEfficiency capacity(SnrThreshold snr) {
  return SpectralEfficiency(std::log1p(snr.value()) / std::log(2.0));
}

/// SNR needed to sustain a rate, 2^rho - 1.
inline SnrThreshold snr_threshold(SpectralEfficiency rate) {
  return SnrThreshold(std::expm1(rate.value() * std::log(2.0)));
}

struct MacDecision {
  bool joint_decodable = false;
  bool downlink_treating_announcer_as_noise = false;
  bool announcer_alone = false;

  /// Downlink recovered by either receiver strategy.
  bool downlink_decoded() const noexcept {
    return joint_decodable || downlink_treating_announcer_as_noise;
  }
  /// Announcer recovered jointly, or after the downlink is cancelled.
  bool announcer_decoded() const noexcept {
    return joint_decodable || (downlink_treating_announcer_as_noise && announcer_alone);
  }
};

/// Two-user Gaussian MAC at a monitor: announcer A at rho_A, downlink B at rho_B.
inline MacDecision mac_region_check(SpectralEfficiency rho_a, SpectralEfficiency rho_b,
                                    SnrThreshold gamma_a, SnrThreshold gamma_b) {
  const double ra = rho_a.value();
  const double rb = rho_b.value();
  const double ga = gamma_a.value();
  const double gb = gamma_b.value();
  const double cap_a = capacity(gamma_a).value();
  const double cap_b = capacity(gamma_b).value();
  const double cap_sum = capacity(SnrThreshold(ga + gb)).value();

  MacDecision d;
  d.announcer_alone = rate_fits(ra, cap_a);
  d.joint_decodable = d.announcer_alone && rate_fits(rb, cap_b) && rate_fits(ra + rb, cap_sum);
  d.downlink_treating_announcer_as_noise =
      rate_fits(rb, capacity(SnrThreshold(gb / (1.0 + ga))).value());
  return d;
}

/// Downlink SNR margin that is decodable whatever the announcer SNR turns
/// out to be: gamma_B / (1 + Gamma_A).
inline SnrThreshold zero_outage_downlink_snr(SnrThreshold gamma_b, SnrThreshold target_a) {
  return SnrThreshold(gamma_b.value() / (1.0 + target_a.value()));
}

/// Checks a downlink sent at C(gamma_B / (1 + Gamma_A)) against one announcer
/// realization. Below Gamma_A the announcer is treated as noise; at or above
/// it both signals are decoded jointly.
inline bool downlink_always_decodable(SnrThreshold gamma_b, SnrThreshold target_a,
                                      SnrThreshold gamma_a) {
  const auto rho_b = capacity(zero_outage_downlink_snr(gamma_b, target_a));
  const auto rho_a = capacity(target_a);
  const auto d = mac_region_check(rho_a, rho_b, gamma_a, gamma_b);
  return gamma_a.value() < target_a.value() ? d.downlink_treating_announcer_as_noise
                                            : d.joint_decodable;
}

/// Under the zero-outage downlink rate, the announcer is decodable exactly when gamma_A >= Gamma_A.
inline bool announcer_decodable(SnrThreshold gamma_a, SnrThreshold target_a) noexcept {
  return gamma_a.value() >= target_a.value();
}

}  // namespace d2d

#endif  // D2D_LINKMODEL_HPP
