#ifndef D2D_POWERCTL_HPP
#define D2D_POWERCTL_HPP

#include <cmath>
#include <optional>
#include <string_view>

#include "d2d/fading.hpp"
#include "d2d/linkmodel.hpp"
#include "d2d/numerics.hpp"

namespace d2d {

/// Physical link parameters, all in SI units (watts, meters, hertz).
struct LinkBudget {
  double noise_w = 0.0;
  double base_distance_m = 0.0;
  double announcer_distance_m = 0.0;
  double path_loss_exponent = 0.0;
  double announcer_power_w = 0.0;
  double bandwidth_hz = 0.0;

  void validate() const {
    if (!(noise_w > 0.0)) throw DomainError("noise power must be positive");
    if (!(base_distance_m > 0.0)) throw DomainError("base-station distance must be positive");
    if (!(announcer_distance_m > 0.0)) throw DomainError("announcer distance must be positive");
    if (!(path_loss_exponent >= 2.0)) throw DomainError("path-loss exponent must be >= 2");
    if (!(announcer_power_w > 0.0)) throw DomainError("announcer power must be positive");
    if (!(bandwidth_hz > 0.0)) throw DomainError("bandwidth must be positive");
  }

  /// d_B^-alpha
  double base_path_gain() const { return std::pow(base_distance_m, -path_loss_exponent); }
  double announcer_path_gain() const { return std::pow(announcer_distance_m, -path_loss_exponent); }

  /// Mean announcer-to-monitor SNR for unit-mean fading scaled by `mean_gain`.
  double announcer_mean_snr(double mean_gain = 1.0) const {
    return mean_gain * announcer_power_w * announcer_path_gain() / noise_w;
  }
};

enum class Scheme { underlay, orthogonal };

/// Which gain the base station inverts.
///  - single_monitor: the one monitor's gain g.
///  - multi_monitor: the worst of N monitors on a single channel.
///  - multi_channel: u_max, the best of N channels ranked by their worst monitor.
enum class Topology { single_monitor, multi_monitor, multi_channel };

inline constexpr std::string_view to_string(Scheme s) noexcept {
  return s == Scheme::underlay ? "underlay" : "orthogonal";
}

inline constexpr std::string_view to_string(Topology t) noexcept {
  switch (t) {
    case Topology::single_monitor: return "single_monitor";
    case Topology::multi_monitor: return "multi_monitor";
    case Topology::multi_channel: return "multi_channel";
  }
  return "unknown";
}

struct PowerPolicy {
  double inversion_constant_w = 0.0;
  double cutoff = 0.0;
  double target_outage = 0.0;
  int n = 1;
  Scheme scheme = Scheme::underlay;
  Topology topology = Topology::multi_channel;

  void validate() const {
    if (!(inversion_constant_w > 0.0)) throw DomainError("inversion constant must be positive");
    if (!(cutoff > 0.0)) throw DomainError("cutoff must be positive");
    if (!(target_outage > 0.0 && target_outage < 1.0))
      throw DomainError("target outage must lie in (0, 1)");
    if (n < 1) throw DomainError("policy needs n >= 1");
  }
};

/// K such that P_B = K / g holds the downlink at rho_B. The underlay scheme
/// pays the (1 + Gamma_A) margin; the orthogonal scheme does not.
inline double inversion_constant(const LinkBudget& budget, SpectralEfficiency rho_b,
                                 SnrThreshold target_a, Scheme scheme) {
  budget.validate();
  const double margin = scheme == Scheme::underlay ? 1.0 + target_a.value() : 1.0;
  return budget.noise_w * margin * snr_threshold(rho_b).value() / budget.base_path_gain();
}

/// Inverted power K / gain, or nullopt when the gain is below the cutoff.
inline std::optional<double> instantaneous_power(const PowerPolicy& policy, double effective_gain) {
  if (!(effective_gain >= 0.0)) throw DomainError("effective gain must be nonnegative");
  if (effective_gain < policy.cutoff) return std::nullopt;
  return policy.inversion_constant_w / effective_gain;
}

/// Gain cutoff mu that truncates transmission with probability `target_outage`.
inline double cutoff(const FadingModel& model, Topology topology, int n, double target_outage) {
  model.validate();
  if (!(target_outage > 0.0 && target_outage < 1.0))
    throw DomainError("target outage must lie in (0, 1)");
  if (n < 1) throw DomainError("cutoff needs n >= 1");
  const double g = model.mean_gain;
  switch (topology) {
    case Topology::single_monitor: return -g * std::log1p(-target_outage);
    case Topology::multi_monitor: return -(g / n) * std::log1p(-target_outage);
    case Topology::multi_channel: return -(g / n) * std::log1p(-std::pow(target_outage, 1.0 / n));
  }
  throw DomainError("unknown topology");
}

/// Density of the inverted gain for a topology.
inline double effective_gain_pdf(const FadingModel& model, Topology topology, int n, double x) {
  switch (topology) {
    case Topology::single_monitor: return pdf_gain(model, x);
    case Topology::multi_monitor: return pdf_min_of_n(model, n, x);
    case Topology::multi_channel: return pdf_max_of_mins(model, n, x);
  }
  throw DomainError("unknown topology");
}

/// Pr{effective gain < mu}.
inline double outage_probability(const FadingModel& model, Topology topology, int n, double mu) {
  switch (topology) {
    case Topology::single_monitor: return cdf_min_of_n(model, 1, mu);
    case Topology::multi_monitor: return cdf_min_of_n(model, n, mu);
    case Topology::multi_channel: return cdf_max_of_mins(model, n, mu);
  }
  throw DomainError("unknown topology");
}

/// K * int_mu^inf f(x) / x dx evaluated numerically for any topology.
inline double expected_power_by_quadrature(const PowerPolicy& policy, const FadingModel& model,
                                           const QuadratureSpec& quad = {}) {
  policy.validate();
  const auto integrand = [&](double x) {
    return effective_gain_pdf(model, policy.topology, policy.n, x) / x;
  };
  return policy.inversion_constant_w * integrate_tail(integrand, policy.cutoff, quad);
}

/// Mean transmit power E[P_B], counting truncated epochs as zero power.
/// Single and multi-monitor policies use the E1 closed forms; the
/// multi-channel policy integrates the u_max density.
inline double expected_power(const PowerPolicy& policy, const FadingModel& model,
                             const QuadratureSpec& quad = {}) {
  policy.validate();
  model.validate();
  const double k = policy.inversion_constant_w;
  const double g = model.mean_gain;
  switch (policy.topology) {
    case Topology::single_monitor: return exp_integral_e1(policy.cutoff / g) * k / g;
    case Topology::multi_monitor:
      return exp_integral_e1(policy.n * policy.cutoff / g) * policy.n * k / g;
    case Topology::multi_channel: return expected_power_by_quadrature(policy, model, quad);
  }
  throw DomainError("unknown topology");
}

struct PowerReport {
  double cutoff = 0.0;
  double inversion_constant_w = 0.0;
  double expected_power_w = 0.0;
  double outage_probability = 0.0;
};

inline PowerPolicy make_policy(const LinkBudget& budget, const FadingModel& model,
                               SpectralEfficiency rho_b, SnrThreshold target_a, Scheme scheme,
                               Topology topology, int n, double target_outage) {
  PowerPolicy p;
  p.inversion_constant_w = inversion_constant(budget, rho_b, target_a, scheme);
  p.cutoff = cutoff(model, topology, n, target_outage);
  p.target_outage = target_outage;
  p.n = n;
  p.scheme = scheme;
  p.topology = topology;
  p.validate();
  return p;
}

inline PowerReport evaluate_power(const PowerPolicy& policy, const FadingModel& model,
                                  const QuadratureSpec& quad = {}) {
  return {policy.cutoff, policy.inversion_constant_w, expected_power(policy, model, quad),
          outage_probability(model, policy.topology, policy.n, policy.cutoff)};
}

}  // namespace d2d

#endif  // D2D_POWERCTL_HPP
