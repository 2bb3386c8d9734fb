#ifndef D2D_MONTECARLO_HPP
#define D2D_MONTECARLO_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "d2d/fading.hpp"
#include "d2d/linkmodel.hpp"
#include "d2d/numerics.hpp"
#include "d2d/powerctl.hpp"
#include "d2d/scenario.hpp"

namespace d2d {

struct Estimate {
  double value = 0.0;
  double standard_error = 0.0;
  bool operator==(const Estimate&) const = default;
};

struct TrialBatch {
  const OperatingPoint& point;
  std::uint64_t seed = 1;
  std::uint64_t trials = 1;
  /// Worker threads; results do not depend on this value.
  unsigned threads = 1;
};

struct EmpiricalReport {
  std::string scenario_id;
  Scheme scheme = Scheme::underlay;
  std::uint64_t trials = 0;
  std::uint64_t truncations = 0;
  Estimate outage;
  Estimate mean_power_w;
  /// Trials where some monitor on the selected channel could not decode the downlink.
  std::uint64_t downlink_decode_failures = 0;
  std::uint64_t announcer_decodes = 0;
  Estimate announcer_decode_rate;
  /// Monitor decodes where "announcer decoded" disagreed with gamma_A >= Gamma_A.
  std::uint64_t announcer_rule_mismatches = 0;
  // empirical minus analytic
  double outage_delta = 0.0;
  double power_delta_w = 0.0;
  double announcer_delta = 0.0;

  bool operator==(const EmpiricalReport&) const = default;
};

struct PairedReport {
  EmpiricalReport underlay;
  EmpiricalReport orthogonal;
  /// Largest |P_underlay / P_orthogonal - (1 + Gamma_A)| / (1 + Gamma_A) over transmitting trials.
  double max_ratio_deviation = 0.0;
};

namespace detail {

inline constexpr std::uint64_t kTrialsPerBatch = 8192;

/// Gain matrix held as the uniforms that generate it. Gains are increasing
/// in their uniform, so column minima and the channel selection are found on
/// the uniforms and only the needed entries are transformed. Values are
/// bit-identical to sample_realization on the same stream.
class LazyRealization {
public:
  LazyRealization(std::size_t monitors, std::size_t channels, double mean_gain)
      : monitors_(monitors), channels_(channels), mean_gain_(mean_gain), uniforms_(monitors * channels),
        column_worst_(channels) {}

  void draw(CounterRng& rng, double announcer_mean_snr) {
    for (double& u : uniforms_) u = rng.uniform();
    announcer_snr_ = sample_exponential(announcer_mean_snr, rng);
    selected_ = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < channels_; ++i) {
      std::size_t worst = 0;
      double worst_u = uniforms_[i];
      for (std::size_t n = 1; n < monitors_; ++n) {
        const double u = uniforms_[n * channels_ + i];
        if (u < worst_u) {
          worst_u = u;
          worst = n;
        }
      }
      column_worst_[i] = worst;
      if (worst_u > best) {
        best = worst_u;
        selected_ = i;
      }
    }
  }

  std::size_t monitors() const noexcept { return monitors_; }
  std::size_t selected_channel() const noexcept { return selected_; }
  std::size_t worst_monitor() const noexcept { return column_worst_[selected_]; }
  double announcer_snr() const noexcept { return announcer_snr_; }
  double gain(std::size_t monitor, std::size_t channel) const noexcept {
    return exponential_from_uniform(mean_gain_, uniforms_[monitor * channels_ + channel]);
  }
  double max_of_mins() const noexcept { return gain(worst_monitor(), selected_); }

private:
  std::size_t monitors_;
  std::size_t channels_;
  double mean_gain_;
  std::vector<double> uniforms_;
  std::vector<std::size_t> column_worst_;
  std::size_t selected_ = 0;
  double announcer_snr_ = 0.0;
};

struct Tally {
  std::uint64_t trials = 0;
  std::uint64_t truncations = 0;
  std::uint64_t failures = 0;
  std::uint64_t announcer_decodes = 0;
  std::uint64_t mismatches = 0;
  double power_sum = 0.0;
  double power_sq = 0.0;

  void merge(const Tally& o) {
    trials += o.trials;
    truncations += o.truncations;
    failures += o.failures;
    announcer_decodes += o.announcer_decodes;
    mismatches += o.mismatches;
    power_sum += o.power_sum;
    power_sq += o.power_sq;
  }
};

struct PairedTally {
  Tally underlay;
  Tally orthogonal;
  double max_ratio_deviation = 0.0;

  void merge(const PairedTally& o) {
    underlay.merge(o.underlay);
    orthogonal.merge(o.orthogonal);
    max_ratio_deviation = std::max(max_ratio_deviation, o.max_ratio_deviation);
  }
};

/// Evaluates one realization under one scheme; returns the transmit power (0 when truncated).
inline double evaluate_trial(const OperatingPoint& p, Scheme scheme, const LazyRealization& r, Tally& t) {
  const PowerPolicy& policy = p.policy(scheme);
  const SnrThreshold gamma_a(r.announcer_snr());
  const bool predicted = announcer_decodable(gamma_a, p.target_a);
  const double rho_a = p.rho_a.value();
  const double rho_b = p.rho_b.value();
  ++t.trials;

  const auto power = instantaneous_power(policy, r.max_of_mins());
  if (!power) {
    // Downlink silent; the announcement still goes out on its own.
    ++t.truncations;
    const bool decoded = rate_fits(rho_a, capacity(gamma_a).value());
    t.announcer_decodes += decoded;
    t.mismatches += decoded != predicted;
    return 0.0;
  }

  const double pb = *power;
  t.power_sum += pb;
  t.power_sq += pb * pb;
  const double snr_per_gain = pb * p.budget.base_path_gain() / p.budget.noise_w;
  const std::size_t k = r.selected_channel();
  bool failed = false;
  bool worst_decoded_announcer = false;
  for (std::size_t n = 0; n < r.monitors(); ++n) {
    const SnrThreshold gamma_b(snr_per_gain * r.gain(n, k));
    bool downlink_ok = false;
    bool announcer_ok = false;
    if (scheme == Scheme::underlay) {
      const MacDecision d = mac_region_check(p.rho_a, p.rho_b, gamma_a, gamma_b);
      downlink_ok = d.downlink_decoded();
      announcer_ok = d.announcer_decoded();
    } else {
      downlink_ok = rate_fits(rho_b, capacity(gamma_b).value());
      announcer_ok = rate_fits(rho_a, capacity(gamma_a).value());
    }
    failed |= !downlink_ok;
    t.mismatches += announcer_ok != predicted;
    if (n == r.worst_monitor()) worst_decoded_announcer = announcer_ok;
  }
  t.failures += failed;
  t.announcer_decodes += worst_decoded_announcer;
  return pb;
}

template <class TallyT, class Body>
TallyT run_batches(const TrialBatch& batch, Body body) {
  const OperatingPoint& p = batch.point;
  const std::uint64_t batches = (batch.trials + kTrialsPerBatch - 1) / kTrialsPerBatch;
  std::vector<TallyT> tallies(batches);
  const auto work = [&](std::uint64_t first, std::uint64_t stride) {
    LazyRealization r(p.monitors(), p.channels(), p.fading.mean_gain);
    for (std::uint64_t b = first; b < batches; b += stride) {
      CounterRng rng = CounterRng::substream(batch.seed, b);
      const std::uint64_t count = std::min(kTrialsPerBatch, batch.trials - b * kTrialsPerBatch);
      for (std::uint64_t i = 0; i < count; ++i) {
        r.draw(rng, p.announcer_mean_snr);
        body(r, tallies[b]);
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(batch.threads, static_cast<unsigned>(batches)));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w, threads);
  }
  TallyT total;
  for (const auto& t : tallies) total.merge(t);
  return total;
}

inline Estimate proportion(std::uint64_t hits, std::uint64_t n) {
  const double p = static_cast<double>(hits) / n;
  return {p, std::sqrt(p * (1.0 - p) / n)};
}

inline EmpiricalReport make_report(const OperatingPoint& p, Scheme scheme, const Tally& t) {
  EmpiricalReport r;
  r.scenario_id = p.scenario_id;
  r.scheme = scheme;
  r.trials = t.trials;
  r.truncations = t.truncations;
  r.outage = proportion(t.truncations, t.trials);
  const double n = static_cast<double>(t.trials);
  const double mean = t.power_sum / n;
  const double var = t.trials > 1 ? std::max(0.0, (t.power_sq - n * mean * mean) / (n - 1.0)) : 0.0;
  r.mean_power_w = {mean, std::sqrt(var / n)};
  r.downlink_decode_failures = t.failures;
  r.announcer_decodes = t.announcer_decodes;
  r.announcer_decode_rate = proportion(t.announcer_decodes, t.trials);
  r.announcer_rule_mismatches = t.mismatches;
  const AnalyticReport a = evaluate_analytic(p, scheme);
  r.outage_delta = r.outage.value - a.power.outage_probability;
  r.power_delta_w = r.mean_power_w.value - a.power.expected_power_w;
  r.announcer_delta = r.announcer_decode_rate.value - a.metrics.announcer_decode_probability;
  return r;
}

inline void check_batch(const TrialBatch& batch) {
  if (batch.trials < 1) throw std::invalid_argument("trial batch needs at least one trial");
}

}  // namespace detail

/// Simulates the underlay scheme: per trial, the channel with the best
/// worst-monitor gain is inverted (or truncated), and every monitor on it
/// decodes the downlink and announcement through the two-user MAC.
inline EmpiricalReport run_underlay(const TrialBatch& batch) {
  detail::check_batch(batch);
  const auto t = detail::run_batches<detail::Tally>(
      batch, [&](const detail::LazyRealization& r, detail::Tally& tally) {
        detail::evaluate_trial(batch.point, Scheme::underlay, r, tally);
      });
  return detail::make_report(batch.point, Scheme::underlay, t);
}

/// Same sampling as run_underlay, with the announcement on its own resource.
inline EmpiricalReport run_orthogonal(const TrialBatch& batch) {
  detail::check_batch(batch);
  const auto t = detail::run_batches<detail::Tally>(
      batch, [&](const detail::LazyRealization& r, detail::Tally& tally) {
        detail::evaluate_trial(batch.point, Scheme::orthogonal, r, tally);
      });
  return detail::make_report(batch.point, Scheme::orthogonal, t);
}

/// Both schemes on shared realizations. Equal to calling run_underlay and
/// run_orthogonal with the same batch, at the cost of one sampling pass.
inline PairedReport run_paired(const TrialBatch& batch) {
  detail::check_batch(batch);
  const double margin = 1.0 + batch.point.target_a.value();
  const auto t = detail::run_batches<detail::PairedTally>(
      batch, [&](const detail::LazyRealization& r, detail::PairedTally& tally) {
        const double pu = detail::evaluate_trial(batch.point, Scheme::underlay, r, tally.underlay);
        const double po = detail::evaluate_trial(batch.point, Scheme::orthogonal, r, tally.orthogonal);
        if (po > 0.0) {
          const double dev = std::abs(pu / po - margin) / margin;
          tally.max_ratio_deviation = std::max(tally.max_ratio_deviation, dev);
        } else if (pu > 0.0) {
          tally.max_ratio_deviation = std::numeric_limits<double>::infinity();
        }
      });
  return {detail::make_report(batch.point, Scheme::underlay, t.underlay),
          detail::make_report(batch.point, Scheme::orthogonal, t.orthogonal), t.max_ratio_deviation};
}

class ScenarioMismatch : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct QuantityCheck {
  std::string name;
  double analytic = 0.0;
  double empirical = 0.0;
  double standard_error = 0.0;
  double z = 0.0;
  bool pass = false;
};

struct ComparisonReport {
  std::string scenario_id;
  std::vector<QuantityCheck> checks;

  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const QuantityCheck& c) { return c.pass; });
  }
};

/// Flags quantities whose |analytic - empirical| exceeds
/// tolerance_multiplier standard errors. Proportions use the binomial error
/// at the analytic probability, so a run with no observed misses still
/// yields a usable scale. Decode failures and announcer-rule mismatches must be
/// exactly zero.
inline ComparisonReport compare(const AnalyticReport& analytic, const EmpiricalReport& empirical,
                                double tolerance_multiplier) {
  if (analytic.scenario_id != empirical.scenario_id || analytic.scheme != empirical.scheme)
    throw ScenarioMismatch("cannot compare " + analytic.scenario_id + " (" +
                           std::string(to_string(analytic.scheme)) + ") with " + empirical.scenario_id +
                           " (" + std::string(to_string(empirical.scheme)) + ")");
  ComparisonReport out;
  out.scenario_id = analytic.scenario_id;
  const double n = static_cast<double>(empirical.trials);
  const auto statistical = [&](std::string name, double a, double e, double se) {
    QuantityCheck c{std::move(name), a, e, se, 0.0, false};
    const double delta = e - a;
    if (se > 0.0) c.z = delta / se;
    else c.z = delta == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), delta);
    c.pass = std::abs(c.z) <= tolerance_multiplier;
    out.checks.push_back(c);
  };
  const auto binomial_se = [n](double p, double empirical_se) {
    return std::max(std::sqrt(p * (1.0 - p) / n), empirical_se);
  };
  const auto exact_zero = [&](std::string name, std::uint64_t count) {
    const auto v = static_cast<double>(count);
    out.checks.push_back({std::move(name), 0.0, v, 0.0, count == 0 ? 0.0 : std::numeric_limits<double>::infinity(),
                          count == 0});
  };

  const double p_out = analytic.power.outage_probability;
  statistical("outage", p_out, empirical.outage.value, binomial_se(p_out, empirical.outage.standard_error));
  statistical("expected_power_w", analytic.power.expected_power_w, empirical.mean_power_w.value,
              empirical.mean_power_w.standard_error);
  const double p_ann = analytic.metrics.announcer_decode_probability;
  statistical("announcer_decode_probability", p_ann, empirical.announcer_decode_rate.value,
              binomial_se(p_ann, empirical.announcer_decode_rate.standard_error));
  exact_zero("downlink_decode_failures", empirical.downlink_decode_failures);
  exact_zero("announcer_rule_mismatches", empirical.announcer_rule_mismatches);
  return out;
}

}  // namespace d2d

#endif  // D2D_MONTECARLO_HPP
