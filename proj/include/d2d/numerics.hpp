#ifndef D2D_NUMERICS_HPP
#define D2D_NUMERICS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace d2d {

/// Raised when an argument lies outside the mathematical domain of a function.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
class QuadratureError : public std::runtime_error {
public:
  QuadratureError(std::size_t subdivisions, double error_estimate)
      : std::runtime_error("quadrature failed to converge after " + std::to_string(subdivisions) +
                           " subdivisions (error estimate " + std::to_string(error_estimate) + ")"),
        subdivisions_(subdivisions),
        error_estimate_(error_estimate) {}

  std::size_t subdivisions() const noexcept { return subdivisions_; }
  double error_estimate() const noexcept { return error_estimate_; }

private:
  std::size_t subdivisions_;
  double error_estimate_;
};

struct QuadratureSpec {
  double relative_tolerance = 1e-11;
  double absolute_tolerance = 1e-15;
  std::size_t max_subdivisions = 2000;

  void validate() const {
    if (!(relative_tolerance > 0.0) || !(absolute_tolerance > 0.0))
      throw DomainError("quadrature tolerances must be strictly positive");
    if (max_subdivisions < 1) throw DomainError("quadrature needs at least one subdivision");
  }
};

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

/// Exponential integral E1(x) = int_x^inf e^-t / t dt for x > 0.
///
/// For x <= 1 the convergent power series
///   E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
/// is summed until the terms drop below machine epsilon. For x > 1 the
/// continued fraction of e^x E1(x) is evaluated with the modified Lentz
/// algorithm. The switch at x = 1 keeps the series cancellation below one
/// decimal digit and the continued fraction within a few dozen iterations.
inline double exp_integral_e1(double x) {
  if (!(x > 0.0) || std::isnan(x)) throw DomainError("exp_integral_e1 requires x > 0");
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (x <= 1.0) {
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k < 200; ++k) {
      term *= -x / k;
      const double contribution = term / k;
      sum += contribution;
      if (std::abs(contribution) < eps * std::abs(sum) * 0.25) break;
    }
    return -kEulerGamma - std::log(x) - sum;
  }
  if (x > 740.0) return 0.0;  // e^-x underflows
  constexpr double tiny = std::numeric_limits<double>::min() / eps;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) <= eps) break;
  }
  return h * std::exp(-x);
}

namespace detail {

// 15-point Gauss-Kronrod abscissae and weights on [-1, 1]; the embedded
// 7-point Gauss rule uses the odd-indexed abscissae.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
};

template <class F>
Segment gauss_kronrod_15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[j] * pair;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod quadrature of f over the finite [a, b].
template <class F>
double integrate_finite(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
  spec.validate();
  constexpr std::size_t initial_pieces = 8;
  std::vector<detail::Segment> segments;
  segments.reserve(spec.max_subdivisions + initial_pieces);
  const double width = (b - a) / initial_pieces;
  for (std::size_t i = 0; i < initial_pieces; ++i) {
    const double lo = a + width * i;
    const double hi = (i + 1 == initial_pieces) ? b : a + width * (i + 1);
    segments.push_back(detail::gauss_kronrod_15(f, lo, hi));
  }
  const auto by_error = [](const detail::Segment& l, const detail::Segment& r) {
    return l.error < r.error;
  };
  std::make_heap(segments.begin(), segments.end(), by_error);

  std::size_t subdivisions = 0;
  for (;;) {
    double total = 0.0;
    double error = 0.0;
    for (const auto& s : segments) {
      total += s.value;
      error += s.error;
    }
    if (error <= std::max(spec.absolute_tolerance, spec.relative_tolerance * std::abs(total)))
      return total;
    if (subdivisions >= spec.max_subdivisions) throw QuadratureError(subdivisions, error);

    std::pop_heap(segments.begin(), segments.end(), by_error);
    const detail::Segment worst = segments.back();
    segments.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    segments.push_back(detail::gauss_kronrod_15(f, worst.a, mid));
    std::push_heap(segments.begin(), segments.end(), by_error);
    segments.push_back(detail::gauss_kronrod_15(f, mid, worst.b));
    std::push_heap(segments.begin(), segments.end(), by_error);
    ++subdivisions;
  }
}

/// int_lower^inf f(x) dx via x = lower + t / (1 - t), t in [0, 1).
///
/// The Kronrod nodes are interior, so the mapped integrand is never evaluated
/// at t = 1. f must decay at least exponentially.
template <class F>
double integrate_tail(F&& f, double lower, const QuadratureSpec& spec = {}) {
  if (!(lower >= 0.0)) throw DomainError("integrate_tail requires lower >= 0");
  auto mapped = [&f, lower](double t) {
    const double one_minus = 1.0 - t;
    const double x = lower + t / one_minus;
    const double value = f(x);
    return value == 0.0 ? 0.0 : value / (one_minus * one_minus);
  };
  return integrate_finite(mapped, 0.0, 1.0, spec);
}

/// Counter-based generator: the i-th output is the SplitMix64 finalizer
/// applied to key + i * golden. Streams are keyed, so batch b of seed s is
/// reproducible independently of every other batch.
class CounterRng {
public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

  /// Independent stream number `stream` derived from a user seed.
  static CounterRng substream(std::uint64_t seed, std::uint64_t stream) noexcept {
    return CounterRng(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL)));
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    ++counter_;
    return mix(key_ + counter_ * kGolden);
  }

  /// Uniform double on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  void discard(std::uint64_t n) noexcept { counter_ += n; }
  std::uint64_t position() const noexcept { return counter_; }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Inverse transform of a uniform draw into an exponential variate with the given mean.
inline double exponential_from_uniform(double mean, double u) noexcept {
  return -mean * std::log1p(-u);
}

inline double sample_exponential(double mean, CounterRng& rng) {
  if (!(mean > 0.0)) throw DomainError("sample_exponential requires mean > 0");
  return exponential_from_uniform(mean, rng.uniform());
}

}  // namespace d2d

#endif  // D2D_NUMERICS_HPP
