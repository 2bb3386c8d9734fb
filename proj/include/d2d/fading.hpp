#ifndef D2D_FADING_HPP
#define D2D_FADING_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "d2d/numerics.hpp"

namespace d2d {

/// Rayleigh block fading: power gains g = |h|^2 are exponential with mean `mean_gain`.
struct FadingModel {
  double mean_gain = 1.0;

  void validate() const {
    if (!(mean_gain > 0.0)) throw DomainError("fading mean gain must be positive");
  }
};

namespace detail {
inline void check_gain_args(const FadingModel& model, int n, double x) {
  model.validate();
  if (n < 1) throw DomainError("order statistic needs n >= 1");
  if (!(x >= 0.0)) throw DomainError("gain must be nonnegative");
}
}  // namespace detail

inline double pdf_gain(const FadingModel& model, double x) {
  detail::check_gain_args(model, 1, x);
  return std::exp(-x / model.mean_gain) / model.mean_gain;
}

/// Density of the minimum of n iid gains: exponential with mean g/n.
inline double pdf_min_of_n(const FadingModel& model, int n, double x) {
  detail::check_gain_args(model, n, x);
  const double rate = n / model.mean_gain;
  return rate * std::exp(-rate * x);
}

inline double cdf_min_of_n(const FadingModel& model, int n, double x) {
  detail::check_gain_args(model, n, x);
  return -std::expm1(-n * x / model.mean_gain);
}

/// Density of u_max, the maximum over n channels of the worst gain among n monitors.
inline double pdf_max_of_mins(const FadingModel& model, int n, double x) {
  detail::check_gain_args(model, n, x);
  const double f1 = pdf_min_of_n(model, n, x);
  const double F1 = cdf_min_of_n(model, n, x);
  return n == 1 ? f1 : n * f1 * std::pow(F1, n - 1);
}

/// CDF of u_max, [1 - exp(-n x / g)]^n.
inline double cdf_max_of_mins(const FadingModel& model, int n, double x) {
  detail::check_gain_args(model, n, x);
  return std::pow(cdf_min_of_n(model, n, x), n);
}

/// One block-fading draw: gains[monitor][channel] plus the announcer-link SNR.
class GainRealization {
public:
  GainRealization(std::size_t monitors, std::size_t channels)
      : monitors_(monitors), channels_(channels), gains_(monitors * channels, 0.0) {}

  std::size_t monitors() const noexcept { return monitors_; }
  std::size_t channels() const noexcept { return channels_; }

  double gain(std::size_t monitor, std::size_t channel) const {
    return gains_[monitor * channels_ + channel];
  }
  double& gain(std::size_t monitor, std::size_t channel) {
    return gains_[monitor * channels_ + channel];
  }

  double announcer_snr = 0.0;

  /// Worst monitor gain on a channel.
  double column_min(std::size_t channel) const {
    double m = gain(0, channel);
    for (std::size_t n = 1; n < monitors_; ++n) m = std::min(m, gain(n, channel));
    return m;
  }

  /// Channel whose worst-monitor gain is largest (first such channel on ties).
  std::size_t selected_channel() const {
    std::size_t best = 0;
    double best_gain = column_min(0);
    for (std::size_t i = 1; i < channels_; ++i) {
      const double u = column_min(i);
      if (u > best_gain) {
        best_gain = u;
        best = i;
      }
    }
    return best;
  }

  double max_of_mins() const { return column_min(selected_channel()); }

private:
  std::size_t monitors_;
  std::size_t channels_;
  std::vector<double> gains_;
};

/// Draws a monitors x channels gain matrix in row-major order, then the
/// announcer SNR. Every entry consumes exactly one generator output.
inline GainRealization sample_realization(const FadingModel& model, std::size_t monitors,
                                          std::size_t channels, double announcer_mean_snr,
                                          CounterRng& rng) {
  model.validate();
  if (monitors < 1 || channels < 1) throw DomainError("realization needs n >= 1");
  if (!(announcer_mean_snr > 0.0)) throw DomainError("announcer mean SNR must be positive");
  GainRealization r(monitors, channels);
  for (std::size_t n = 0; n < monitors; ++n)
    for (std::size_t i = 0; i < channels; ++i) r.gain(n, i) = sample_exponential(model.mean_gain, rng);
  r.announcer_snr = sample_exponential(announcer_mean_snr, rng);
  return r;
}

/// Square n x n realization: one dedicated downlink channel per monitor.
inline GainRealization sample_realization(const FadingModel& model, int n, double announcer_mean_snr,
                                          CounterRng& rng) {
  if (n < 1) throw DomainError("realization needs n >= 1");
  const auto size = static_cast<std::size_t>(n);
  return sample_realization(model, size, size, announcer_mean_snr, rng);
}

}  // namespace d2d

#endif  // D2D_FADING_HPP
