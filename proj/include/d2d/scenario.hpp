#ifndef D2D_SCENARIO_HPP
#define D2D_SCENARIO_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "d2d/fading.hpp"
#include "d2d/linkmodel.hpp"
#include "d2d/metrics.hpp"
#include "d2d/powerctl.hpp"

namespace d2d {

/// A configuration field failed validation; `field()` names the config key.
class ValidationError : public std::invalid_argument {
public:
  ValidationError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

inline double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w * 1e3); }

/// Everything a sweep needs. Defaults reproduce the reference scenario:
/// one 180 kHz resource block, 5 ms announcements, base station at 200 m,
/// announcer at 20 m and 20 dBm, -97 dBm noise, alpha = 4, 20 monitors,
/// 5 bits/s/Hz downlink and 0.99 success targets.
struct ScenarioConfig {
  double bandwidth_hz = 180e3;
  double announce_duration_s = 5e-3;
  double base_distance_m = 200.0;
  double announcer_distance_m = 20.0;
  double announcer_power_dbm = 20.0;
  double noise_dbm = -97.0;
  double path_loss_exponent = 4.0;
  double mean_gain = 1.0;
  int monitors = 20;
  Topology topology = Topology::multi_channel;
  double downlink_rate_bps_per_hz = 5.0;
  double downlink_success_target = 0.99;
  DecodeMode announcer_decode_mode = DecodeMode::fixed;
  double announcer_decode_prob = 0.99;
  std::vector<double> payload_bytes = {100, 200, 300, 400, 500, 600, 700, 800, 900, 1000, 1100};
  std::uint64_t seed = 1;
  std::uint64_t trials = 1'000'000;
  std::vector<Scheme> schemes = {Scheme::underlay, Scheme::orthogonal};
  bool analytic = true;
  bool monte_carlo = true;

  void validate() const {
    const auto positive = [](const char* field, double v) {
      if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(field, "must be positive");
    };
    const auto open_unit = [](const char* field, double v) {
      if (!(v > 0.0 && v < 1.0)) throw ValidationError(field, "must lie in (0, 1)");
    };
    positive("bandwidth_hz", bandwidth_hz);
    positive("announce_duration_s", announce_duration_s);
    positive("base_distance_m", base_distance_m);
    positive("announcer_distance_m", announcer_distance_m);
    if (!std::isfinite(announcer_power_dbm)) throw ValidationError("announcer_power_dbm", "must be finite");
    if (!std::isfinite(noise_dbm)) throw ValidationError("noise_dbm", "must be finite");
    if (!(path_loss_exponent >= 2.0) || !std::isfinite(path_loss_exponent))
      throw ValidationError("path_loss_exponent", "must be >= 2");
    positive("mean_gain", mean_gain);
    if (monitors < 1) throw ValidationError("monitors", "must be >= 1");
    positive("downlink_rate_bps_per_hz", downlink_rate_bps_per_hz);
    open_unit("downlink_success_target", downlink_success_target);
    if (announcer_decode_mode == DecodeMode::fixed) open_unit("announcer_decode_prob", announcer_decode_prob);
    if (payload_bytes.empty()) throw ValidationError("payload_bytes", "sweep must not be empty");
    for (double p : payload_bytes) positive("payload_bytes", p);
    if (!std::is_sorted(payload_bytes.begin(), payload_bytes.end()))
      throw ValidationError("payload_bytes", "sweep must be sorted ascending");
    if (trials < 1) throw ValidationError("trials", "must be >= 1");
    if (schemes.empty()) throw ValidationError("schemes", "at least one scheme is required");
    if (!analytic && !monte_carlo) throw ValidationError("analytic", "no evaluation mode enabled");
  }

  LinkBudget budget() const {
    LinkBudget b;
    b.noise_w = dbm_to_watts(noise_dbm);
    b.base_distance_m = base_distance_m;
    b.announcer_distance_m = announcer_distance_m;
    b.path_loss_exponent = path_loss_exponent;
    b.announcer_power_w = dbm_to_watts(announcer_power_dbm);
    b.bandwidth_hz = bandwidth_hz;
    return b;
  }

  FadingModel fading() const { return FadingModel{mean_gain}; }

  AnnouncerConfig announcer(double payload) const {
    return AnnouncerConfig{announce_duration_s, payload, announcer_decode_mode, announcer_decode_prob};
  }
};

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Canonical key = value rendering; equal configs render identically.
inline std::string canonical_text(const ScenarioConfig& c) {
  std::string out;
  const auto line = [&out](const char* key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };
  line("bandwidth_hz", format_double(c.bandwidth_hz));
  line("announce_duration_s", format_double(c.announce_duration_s));
  line("base_distance_m", format_double(c.base_distance_m));
  line("announcer_distance_m", format_double(c.announcer_distance_m));
  line("announcer_power_dbm", format_double(c.announcer_power_dbm));
  line("noise_dbm", format_double(c.noise_dbm));
  line("path_loss_exponent", format_double(c.path_loss_exponent));
  line("mean_gain", format_double(c.mean_gain));
  line("monitors", std::to_string(c.monitors));
  line("topology", std::string(to_string(c.topology)));
  line("downlink_rate_bps_per_hz", format_double(c.downlink_rate_bps_per_hz));
  line("downlink_success_target", format_double(c.downlink_success_target));
  line("announcer_decode_mode", c.announcer_decode_mode == DecodeMode::fixed ? "fixed" : "computed");
  line("announcer_decode_prob", format_double(c.announcer_decode_prob));
  std::string payloads;
  for (std::size_t i = 0; i < c.payload_bytes.size(); ++i) {
    if (i) payloads += ", ";
    payloads += format_double(c.payload_bytes[i]);
  }
  line("payload_bytes", payloads);
  line("seed", std::to_string(c.seed));
  line("trials", std::to_string(c.trials));
  std::string schemes;
  for (std::size_t i = 0; i < c.schemes.size(); ++i) {
    if (i) schemes += ", ";
    schemes += to_string(c.schemes[i]);
  }
  line("schemes", schemes);
  line("analytic", c.analytic ? "true" : "false");
  line("monte_carlo", c.monte_carlo ? "true" : "false");
  return out;
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string config_hash(const ScenarioConfig& c) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical_text(c))));
  return buf;
}

/// One payload point of a scenario with every derived quantity resolved.
struct OperatingPoint {
  std::string scenario_id;
  double payload_bytes = 0.0;
  LinkBudget budget;
  FadingModel fading;
  Topology topology = Topology::multi_channel;
  int n = 1;
  SpectralEfficiency rho_a;
  SpectralEfficiency rho_b;
  SnrThreshold target_a;
  double target_outage = 0.01;
  DecodeMode decode_mode = DecodeMode::fixed;
  double announcer_decode_probability = 0.0;
  /// Mean of the exponential announcer SNR the simulator draws from.
  double announcer_mean_snr = 0.0;
  PowerPolicy underlay;
  PowerPolicy orthogonal;

  std::size_t monitors() const { return topology == Topology::single_monitor ? 1 : static_cast<std::size_t>(n); }
  std::size_t channels() const { return topology == Topology::multi_channel ? static_cast<std::size_t>(n) : 1; }
  const PowerPolicy& policy(Scheme s) const { return s == Scheme::underlay ? underlay : orthogonal; }
};

/// Resolves a payload point. In fixed decode mode the announcer's mean SNR
/// is chosen so that Pr{gamma_A >= Gamma_A} equals the configured value; in
/// computed mode it follows from the link budget.
inline OperatingPoint make_operating_point(const ScenarioConfig& cfg, double payload_bytes) {
  cfg.validate();
  OperatingPoint p;
  p.payload_bytes = payload_bytes;
  p.budget = cfg.budget();
  p.budget.validate();
  p.fading = cfg.fading();
  p.topology = cfg.topology;
  p.n = cfg.topology == Topology::single_monitor ? 1 : cfg.monitors;
  const auto announcer = cfg.announcer(payload_bytes);
  p.rho_a = payload_to_rate(announcer, cfg.bandwidth_hz);
  p.rho_b = SpectralEfficiency(cfg.downlink_rate_bps_per_hz);
  p.target_a = snr_threshold(p.rho_a);
  p.target_outage = 1.0 - cfg.downlink_success_target;
  p.decode_mode = cfg.announcer_decode_mode;
  p.announcer_decode_probability = announcer_decode_probability(announcer, p.budget, p.fading, p.target_a);
  p.announcer_mean_snr = cfg.announcer_decode_mode == DecodeMode::fixed
                             ? p.target_a.value() / -std::log(cfg.announcer_decode_prob)
                             : p.budget.announcer_mean_snr(p.fading.mean_gain);
  p.underlay = make_policy(p.budget, p.fading, p.rho_b, p.target_a, Scheme::underlay, p.topology, p.n,
                           p.target_outage);
  p.orthogonal = make_policy(p.budget, p.fading, p.rho_b, p.target_a, Scheme::orthogonal, p.topology,
                             p.n, p.target_outage);
  p.scenario_id = config_hash(cfg) + "/" + format_double(payload_bytes) + "B/" + std::string(to_string(p.topology));
  return p;
}

/// Closed-form and quadrature results for one scheme at one operating point.
struct AnalyticReport {
  std::string scenario_id;
  Scheme scheme = Scheme::underlay;
  PowerReport power;
  MetricsReport metrics;
};

inline AnalyticReport evaluate_analytic(const OperatingPoint& p, Scheme scheme,
                                        const QuadratureSpec& quad = {}) {
  AnalyticReport r;
  r.scenario_id = p.scenario_id;
  r.scheme = scheme;
  r.power = evaluate_power(p.policy(scheme), p.fading, quad);
  MetricsReport& m = r.metrics;
  m.expected_power_w = r.power.expected_power_w;
  m.outage_probability = r.power.outage_probability;
  m.announcer_decode_probability = p.announcer_decode_probability;
  m.sum_rate_bps = sum_rate(p.rho_b, p.rho_a, p.budget.bandwidth_hz, 1.0 - m.outage_probability,
                            m.announcer_decode_probability, scheme);
  m.energy_per_bit_j = energy_per_bit(m.expected_power_w, m.sum_rate_bps);
  return r;
}

}  // namespace d2d

#endif  // D2D_SCENARIO_HPP
