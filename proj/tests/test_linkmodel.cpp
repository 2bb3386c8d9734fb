#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "d2d/linkmodel.hpp"
#include "d2d/numerics.hpp"

namespace d2d {
namespace {

SpectralEfficiency rho(double v) { return SpectralEfficiency(v); }
SnrThreshold snr(double v) { return SnrThreshold(v); }

TEST(Capacity, DirectValues) {
  EXPECT_DOUBLE_EQ(capacity(snr(1.0)).value(), 1.0);
  EXPECT_DOUBLE_EQ(capacity(snr(3.0)).value(), 2.0);
  EXPECT_EQ(capacity(snr(0.0)).value(), 0.0);
  EXPECT_THROW(SnrThreshold(-1.0), DomainError);
}

TEST(SnrThreshold, DirectValues) {
  EXPECT_DOUBLE_EQ(snr_threshold(rho(1.0)).value(), 1.0);
  EXPECT_DOUBLE_EQ(snr_threshold(rho(5.0)).value(), 31.0);
  EXPECT_EQ(snr_threshold(rho(0.0)).value(), 0.0);
  EXPECT_THROW(SpectralEfficiency(-0.5), DomainError);
}

TEST(Capacity, InverseOfThresholdOverWideRange) {
  for (double g = 1e-6; g <= 1e6; g *= 1.31) {
    EXPECT_NEAR(snr_threshold(capacity(snr(g))).value(), g, 1e-12 * g) << g;
  }
}

TEST(MacRegion, SumConstraintViolated) {
  const auto d = mac_region_check(rho(1.0), rho(1.0), snr(1.0), snr(1.0));
  EXPECT_FALSE(d.joint_decodable);
  EXPECT_TRUE(d.announcer_alone);
  EXPECT_FALSE(d.downlink_treating_announcer_as_noise);  // log2(1 + 1/2) < 1
}

TEST(MacRegion, SumConstraintTight) {
  const auto d = mac_region_check(rho(1.0), rho(std::log2(3.0) - 1.0), snr(1.0), snr(1.0));
  EXPECT_TRUE(d.joint_decodable);
}

TEST(MacRegion, SingleUserReduction) {
  for (double rb : {0.0, 0.5, 1.0}) {
    const auto d = mac_region_check(rho(0.0), rho(rb), snr(0.0), snr(1.0));
    EXPECT_TRUE(d.joint_decodable) << rb;
  }
  EXPECT_FALSE(mac_region_check(rho(0.0), rho(1.01), snr(0.0), snr(1.0)).joint_decodable);
}

TEST(ZeroOutageSnr, DirectValues) {
  EXPECT_DOUBLE_EQ(zero_outage_downlink_snr(snr(3.0), snr(1.0)).value(), 1.5);
  EXPECT_DOUBLE_EQ(zero_outage_downlink_snr(snr(7.0), snr(0.0)).value(), 7.0);
  EXPECT_DOUBLE_EQ(zero_outage_downlink_snr(snr(31.0), snr(31.0)).value(), 31.0 / 32.0);
}

TEST(DownlinkAlwaysDecodable, ChosenPoints) {
  EXPECT_TRUE(downlink_always_decodable(snr(3.0), snr(1.0), snr(0.999)));
  EXPECT_TRUE(downlink_always_decodable(snr(3.0), snr(1.0), snr(1.0)));
  EXPECT_TRUE(downlink_always_decodable(snr(3.0), snr(1.0), snr(1e6)));
}

TEST(DownlinkAlwaysDecodable, TreatAsNoiseBranchBelowThreshold) {
  const double gb = 3.0;
  const double ta = 1.0;
  const double rb = capacity(zero_outage_downlink_snr(snr(gb), snr(ta))).value();
  const double ra = capacity(snr(ta)).value();
  const auto d = mac_region_check(rho(ra), rho(rb), snr(0.999), snr(gb));
  EXPECT_TRUE(d.downlink_treating_announcer_as_noise);
  EXPECT_FALSE(d.announcer_alone);
  // sum-rate identity behind the joint branch at the switching point
  EXPECT_NEAR(ra + rb, capacity(snr(gb + ta)).value(), 1e-14);
}

TEST(DownlinkAlwaysDecodable, ZeroOutageSweep) {
  std::vector<double> grid;
  for (double v = 1e-4; v <= 1e5; v *= 3.7) grid.push_back(v);
  int checked = 0;
  for (double gb : grid) {
    for (double ta : grid) {
      std::vector<double> probes = {0.0, ta, ta * (1 - 1e-9), ta * (1 + 1e-9), std::nextafter(ta, 0.0),
                                    std::nextafter(ta, 1e300)};
      for (double ga : grid) probes.push_back(ga);
      for (double ga : probes) {
        ASSERT_TRUE(downlink_always_decodable(snr(gb), snr(ta), snr(ga)))
            << "gamma_B=" << gb << " Gamma_A=" << ta << " gamma_A=" << ga;
        ++checked;
      }
    }
  }
  EXPECT_EQ(checked, 16 * 16 * 22);
}

TEST(SumRateIdentity, HoldsAcrossGrid) {
  for (double ta = 1e-3; ta < 1e4; ta *= 2.9) {
    for (double gb = 1e-3; gb < 1e5; gb *= 3.3) {
      const double lhs = capacity(snr(ta)).value() + capacity(zero_outage_downlink_snr(snr(gb), snr(ta))).value();
      const double rhs = capacity(snr(gb + ta)).value();
      EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, rhs)) << ta << " " << gb;
    }
  }
}

TEST(AnnouncerDecodable, BoundaryAndZero) {
  EXPECT_TRUE(announcer_decodable(snr(0.85), snr(0.85)));
  EXPECT_FALSE(announcer_decodable(snr(0.0), snr(0.85)));
  EXPECT_TRUE(announcer_decodable(snr(0.0), snr(0.0)));
}

TEST(AnnouncerDecodable, AgreesWithMacUnderZeroOutagePolicy) {
  for (double ta = 1e-3; ta < 1e3; ta *= 3.1) {
    const double gb = 40.0;
    const auto ra = capacity(snr(ta));
    const auto rb = capacity(zero_outage_downlink_snr(snr(gb), snr(ta)));
    for (double ga = 1e-4; ga < 1e4; ga *= 1.9) {
      const auto d = mac_region_check(ra, rb, snr(ga), snr(gb));
      EXPECT_EQ(d.announcer_decoded(), announcer_decodable(snr(ga), snr(ta))) << ta << " " << ga;
      EXPECT_EQ(d.announcer_alone, announcer_decodable(snr(ga), snr(ta))) << ta << " " << ga;
      EXPECT_TRUE(d.downlink_decoded());
    }
  }
}

TEST(AnnouncerDecodable, MonteCarloDecodeRate) {
  CounterRng rng = CounterRng::substream(21, 0);
  constexpr int kTrials = 1'000'000;
  const double ta = 0.8517;
  const double mean = 12.0;
  int hits = 0;
  for (int i = 0; i < kTrials; ++i) hits += announcer_decodable(snr(sample_exponential(mean, rng)), snr(ta));
  const double p = std::exp(-ta / mean);
  EXPECT_NEAR(static_cast<double>(hits) / kTrials, p, 3 * std::sqrt(p * (1 - p) / kTrials));
}

}  // namespace
}  // namespace d2d
