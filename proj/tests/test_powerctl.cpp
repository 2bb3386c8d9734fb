#include <cmath>

#include <gtest/gtest.h>

#include "d2d/fading.hpp"
#include "d2d/linkmodel.hpp"
#include "d2d/numerics.hpp"
#include "d2d/powerctl.hpp"
#include "d2d/scenario.hpp"

namespace d2d {
namespace {

const FadingModel kUnit{1.0};

LinkBudget reference_budget() { return ScenarioConfig{}.budget(); }

SnrThreshold gamma_a_for(double payload_bytes) {
  return snr_threshold(SpectralEfficiency(payload_bytes * 8.0 / 900.0));
}

TEST(LinkBudget, Validation) {
  LinkBudget b = reference_budget();
  EXPECT_NO_THROW(b.validate());
  b.path_loss_exponent = 1.5;
  EXPECT_THROW(b.validate(), DomainError);
  b = reference_budget();
  b.noise_w = 0.0;
  EXPECT_THROW(b.validate(), DomainError);
}

TEST(LinkBudget, AnnouncerMeanSnr) {
  // 0.1 W * 20^-4 / 10^-12.7 W
  EXPECT_NEAR(reference_budget().announcer_mean_snr(), 3132420.2101704467, 1e-6);
}

TEST(InversionConstant, ReferenceBudget) {
  const auto ta = gamma_a_for(100);
  EXPECT_NEAR(ta.value(), 0.85174942457458086, 1e-14);
  const double ku = inversion_constant(reference_budget(), SpectralEfficiency(5.0), ta, Scheme::underlay);
  const double ko = inversion_constant(reference_budget(), SpectralEfficiency(5.0), ta, Scheme::orthogonal);
  EXPECT_NEAR(ku, 0.018325840184350116, 1e-15);
  EXPECT_NEAR(ko, 0.0098965010822456590, 1e-15);
  EXPECT_NEAR(ku / ko, 1.0 + ta.value(), 1e-14);
}

TEST(InversionConstant, NoUnderlayReduction) {
  const auto b = reference_budget();
  EXPECT_DOUBLE_EQ(inversion_constant(b, SpectralEfficiency(5.0), SnrThreshold(0.0), Scheme::underlay),
                   inversion_constant(b, SpectralEfficiency(5.0), SnrThreshold(0.0), Scheme::orthogonal));
}

TEST(InstantaneousPower, InversionAndTruncation) {
  PowerPolicy p;
  p.inversion_constant_w = 2.0;
  p.cutoff = 0.1;
  p.target_outage = 0.01;
  EXPECT_DOUBLE_EQ(*instantaneous_power(p, 0.1), 20.0);
  EXPECT_DOUBLE_EQ(*instantaneous_power(p, 0.2), 10.0);
  EXPECT_FALSE(instantaneous_power(p, 0.05).has_value());
  EXPECT_THROW(instantaneous_power(p, -1.0), DomainError);
}

TEST(Cutoff, PerTopology) {
  EXPECT_NEAR(cutoff(kUnit, Topology::single_monitor, 1, 0.01), 0.010050335853501441, 1e-16);
  EXPECT_NEAR(cutoff(kUnit, Topology::multi_monitor, 20, 0.01), 0.00050251679267507206, 1e-17);
  EXPECT_NEAR(cutoff(kUnit, Topology::multi_channel, 20, 0.01), 0.079073687670422693, 1e-15);
  // The same formula evaluated at the success probability lands on 0.379807.
  EXPECT_NEAR(cutoff(kUnit, Topology::multi_channel, 20, 0.99), 0.37980663741025558, 1e-14);
}

TEST(Cutoff, OutageRoundTrip) {
  for (auto t : {Topology::single_monitor, Topology::multi_monitor, Topology::multi_channel}) {
    for (int n : {1, 4, 20}) {
      for (double p : {1e-4, 0.01, 0.3}) {
        const double mu = cutoff(kUnit, t, n, p);
        EXPECT_NEAR(outage_probability(kUnit, t, n, mu), p, 1e-12 * std::max(1.0, p));
      }
    }
  }
}

TEST(Cutoff, RejectsBadTargets) {
  EXPECT_THROW(cutoff(kUnit, Topology::single_monitor, 1, 0.0), DomainError);
  EXPECT_THROW(cutoff(kUnit, Topology::single_monitor, 1, 1.0), DomainError);
  EXPECT_THROW(cutoff(kUnit, Topology::multi_channel, 0, 0.5), DomainError);
}

PowerPolicy policy(Topology t, int n, double k = 1.0, Scheme s = Scheme::underlay) {
  PowerPolicy p;
  p.inversion_constant_w = k;
  p.target_outage = 0.01;
  p.n = n;
  p.topology = t;
  p.scheme = s;
  p.cutoff = cutoff(kUnit, t, n, 0.01);
  return p;
}

TEST(ExpectedPower, ClosedForms) {
  EXPECT_NEAR(expected_power(policy(Topology::single_monitor, 1), kUnit), 4.0329587017084637, 1e-12);
  EXPECT_NEAR(expected_power(policy(Topology::multi_monitor, 20), kUnit), 80.659174034169274, 1e-10);
}

TEST(ExpectedPower, MultiChannelQuadratureReference) {
  // mpmath quad of f_N(x)/x over [mu, inf), 40 digits
  EXPECT_NEAR(expected_power(policy(Topology::multi_channel, 20), kUnit), 6.0830390352053625, 1e-9);
  EXPECT_NEAR(expected_power(policy(Topology::multi_channel, 5), kUnit), 2.7860584792584075, 1e-9);
}

TEST(ExpectedPower, MultiChannelSingleEqualsClosedForm) {
  const double quad = expected_power(policy(Topology::multi_channel, 1, 3.0), kUnit);
  const double closed = expected_power(policy(Topology::single_monitor, 1, 3.0), kUnit);
  EXPECT_NEAR(quad, closed, 1e-6 * closed);
}

TEST(ExpectedPower, ClosedFormMatchesQuadrature) {
  for (int n : {1, 2, 5, 20, 50}) {
    const auto p = policy(Topology::multi_monitor, n, 0.7);
    const double closed = expected_power(p, kUnit);
    const double quad = expected_power_by_quadrature(p, kUnit);
    EXPECT_NEAR(closed, quad, 1e-6 * closed) << n;
  }
  const FadingModel wide{2.5};
  PowerPolicy p = policy(Topology::single_monitor, 1, 1.3);
  p.cutoff = cutoff(wide, Topology::single_monitor, 1, 0.05);
  EXPECT_NEAR(expected_power(p, wide), expected_power_by_quadrature(p, wide), 1e-6 * expected_power(p, wide));
}

TEST(ExpectedPower, UnderlayToOrthogonalRatio) {
  const auto b = reference_budget();
  for (double payload : {1.0, 100.0, 600.0, 1100.0}) {
    const auto ta = gamma_a_for(payload);
    for (auto t : {Topology::single_monitor, Topology::multi_monitor, Topology::multi_channel}) {
      const int n = t == Topology::single_monitor ? 1 : 20;
      const auto pu = make_policy(b, kUnit, SpectralEfficiency(5.0), ta, Scheme::underlay, t, n, 0.01);
      const auto po = make_policy(b, kUnit, SpectralEfficiency(5.0), ta, Scheme::orthogonal, t, n, 0.01);
      const double ratio = expected_power(pu, kUnit) / expected_power(po, kUnit);
      EXPECT_NEAR(ratio, 1.0 + ta.value(), 1e-12 * (1.0 + ta.value())) << payload;
    }
  }
}

TEST(ExpectedPower, Monotonicity) {
  const auto b = reference_budget();
  double prev = 0.0;
  for (double payload = 10.0; payload <= 1100.0; payload += 10.0) {
    const auto p = make_policy(b, kUnit, SpectralEfficiency(5.0), gamma_a_for(payload), Scheme::underlay,
                               Topology::multi_channel, 20, 0.01);
    const double e = expected_power(p, kUnit);
    EXPECT_GT(e, prev) << payload;
    prev = e;
  }
  prev = 0.0;
  for (double rb = 0.5; rb <= 8.0; rb += 0.5) {
    const auto p = make_policy(b, kUnit, SpectralEfficiency(rb), gamma_a_for(100), Scheme::underlay,
                               Topology::multi_channel, 20, 0.01);
    const double e = expected_power(p, kUnit);
    EXPECT_GT(e, prev) << rb;
    prev = e;
  }
  prev = 0.0;
  for (int n = 1; n <= 40; ++n) {
    const double e = expected_power(policy(Topology::multi_monitor, n), kUnit);
    EXPECT_GT(e, prev) << n;
    prev = e;
  }
}

TEST(ExpectedPower, SelectedChannelNeverCostsMore) {
  CounterRng rng = CounterRng::substream(2, 2);
  const double k = 1.0;
  for (int r = 0; r < 2000; ++r) {
    const auto g = sample_realization(kUnit, 20, 1.0, rng);
    const double chosen = k / g.max_of_mins();
    for (std::size_t i = 0; i < g.channels(); ++i) ASSERT_LE(chosen, k / g.column_min(i));
  }
}

TEST(ExpectedPower, TruncationRateMatchesTargetPerTopology) {
  constexpr int kTrials = 1'000'000;
  for (auto t : {Topology::single_monitor, Topology::multi_monitor, Topology::multi_channel}) {
    const int n = t == Topology::single_monitor ? 1 : 20;
    const auto p = policy(t, n);
    const std::size_t monitors = t == Topology::single_monitor ? 1 : n;
    const std::size_t channels = t == Topology::multi_channel ? n : 1;
    CounterRng rng = CounterRng::substream(1234, static_cast<std::uint64_t>(t));
    int silent = 0;
    for (int i = 0; i < kTrials; ++i) {
      const auto g = sample_realization(kUnit, monitors, channels, 1.0, rng);
      silent += !instantaneous_power(p, g.max_of_mins()).has_value();
    }
    const double se = std::sqrt(0.01 * 0.99 / kTrials);
    EXPECT_NEAR(static_cast<double>(silent) / kTrials, 0.01, 3 * se) << to_string(t);
  }
}

}  // namespace
}  // namespace d2d
