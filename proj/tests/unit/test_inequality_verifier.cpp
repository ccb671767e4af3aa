#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "peup/inequality_verifier.hpp"

using namespace peup;

namespace {

constexpr double kPi = std::numbers::pi;

WaveFunction single(const StateKind& kind, const PeriodicDomain& domain, std::uint64_t seed = 0) {
  return make_state(EnsembleSpec{kind, 1, seed}, domain).front();
}

}  // namespace

TEST(EupFactor, TwelveOverTwoPiSquaredIsThreeOverPiSquared) {
  // the angular form of the denominator: 12 / (2 pi)^2 = 3 / pi^2
  const double dphi_sq = 1.234;
  EXPECT_NEAR(eup_factor(dphi_sq, 2.0 * kPi), 1.0 - 3.0 * dphi_sq / (kPi * kPi), 1e-15);
  EXPECT_EQ(eup_factor(1.0 / 12.0, 1.0), 0.0);
}

TEST(Report, EigenstateSaturatesBothSides) {
  const PeriodicDomain d(1.0, 64);
  for (int n : {-8, 0, 1, 5}) {
    const auto psi = single(MomentumEigenstate{n}, d);
    const auto r = make_report(psi, 64);
    EXPECT_EQ(r.delta_p, 0.0);
    EXPECT_NEAR(r.delta_x_sq, 1.0 / 12.0, 1e-14);
    EXPECT_NEAR(r.eup_factor, 0.0, 1e-13);
    EXPECT_NEAR(r.eup_rhs(1.0), 0.0, 1e-13);
    EXPECT_TRUE(r.saturated);
    EXPECT_FALSE(r.ratio.has_value());
    EXPECT_NEAR(r.pointwise_min_margin, 0.0, 1e-13);
    EXPECT_TRUE(r.exact_bounds_ok());
    EXPECT_TRUE(r.heisenberg_violated);
    EXPECT_NEAR(verify_eup(psi, minimize_V(psi, 64), 1.0).margin, 0.0, 1e-13);
  }
}

TEST(Report, GaussianHasPositiveMargins) {
  const PeriodicDomain d(1.0, 256);
  const auto psi = single(WrappedGaussian{0.05, 0.05}, d);
  const auto profile = minimize_V(psi, 256);
  EXPECT_GT(verify_pointwise_bound(psi, profile), 1e-6);
  const auto check = verify_eup(psi, profile, 0.3);
  EXPECT_GT(check.margin, 0.0);
  EXPECT_FALSE(check.heisenberg_violated);
  const auto r = make_report(psi, profile);
  EXPECT_FALSE(r.saturated);
  ASSERT_TRUE(r.ratio.has_value());
  EXPECT_NEAR(*r.ratio, r.product / (0.5 * r.eup_factor), 1e-15);
  EXPECT_GT(*r.ratio, 1.0);
  EXPECT_THROW(verify_eup(psi, profile, 0.0), std::invalid_argument);
}

TEST(Report, PointwiseMarginMatchesQuadratureOracle) {
  const PeriodicDomain d(1.0, 128);
  const auto psi = single(WrappedGaussian{0.0, 0.05}, d);
  const auto profile = minimize_V(psi, 128);
  const oracle::Modes m{{psi.spectrum().begin(), psi.spectrum().end()}, psi.min_mode(), 1.0};
  const double dp2 = oracle::delta_p_sq(m);
  double expected = INFINITY;
  for (std::size_t i = 0; i < profile.gamma.size(); i += 8) {
    const double g = profile.gamma[i];
    const double gap = 1.0 - oracle::density(m, 0.5 + g);
    expected = std::min(expected, dp2 * oracle::V(m, g) - 0.25 * gap * gap);
  }
  double got = INFINITY;
  for (std::size_t i = 0; i < profile.gamma.size(); i += 8) {
    const double gap = 1.0 - density_at(psi, 0.5 + profile.gamma[i]);
    got = std::min(got, momentum_stats(psi).delta_p_sq * profile.V[i] - 0.25 * gap * gap);
  }
  EXPECT_NEAR(got, expected, 1e-10);
}

TEST(Report, RandomStatesRespectExactBounds) {
  const PeriodicDomain d(1.0, 128);
  const auto states = make_state(EnsembleSpec{BandLimitedRandom{16}, 50, 99}, d);
  for (const auto& psi : states) {
    const auto r = make_report(psi, 128);
    EXPECT_TRUE(r.exact_bounds_ok());
    EXPECT_EQ(r.structural.bound_violations, 0);
    EXPECT_GT(r.eup_margin(1.0), 0.0);
  }
}

TEST(Report, ScaleCovariance) {
  oracle::Generator gen(31);
  for (int trial = 0; trial < 10; ++trial) {
    const auto c = gen.coefficients(6);
    const double s = gen.uniform(0.1, 10.0);
    const auto a = make_report(WaveFunction::from_modes(PeriodicDomain(1.0, 64), c, -6), 64);
    const auto b = make_report(WaveFunction::from_modes(PeriodicDomain(s, 64), c, -6), 64);
    EXPECT_NEAR(b.delta_x / (s * a.delta_x), 1.0, 1e-10);
    EXPECT_NEAR(b.delta_p * s / a.delta_p, 1.0, 1e-10);
    EXPECT_NEAR(b.product / a.product, 1.0, 1e-10);
    EXPECT_NEAR(*b.ratio / *a.ratio, 1.0, 1e-10);
  }
}

TEST(Report, GaussianRatioGrowsWithWidth) {
  const PeriodicDomain d(1.0, 512);
  double previous = 0.0;
  for (double sigma = 0.01; sigma <= 0.125 + 1e-12; sigma += 0.005) {
    const auto r = make_report(single(WrappedGaussian{0.0, sigma}, d), 512);
    EXPECT_GE(*r.ratio, previous);
    previous = *r.ratio;
  }
  EXPECT_NEAR(*make_report(single(WrappedGaussian{0.0, 0.01}, d), 512).ratio, 1.0, 2e-3);
}

TEST(Structural, CountsViolations) {
  VarianceProfile p;
  p.length = 1.0;
  p.gamma = {-0.5, 0.0};
  p.V = {1.0 / 12.0, 1.0 / 12.0};
  p.Vp = {0.0, 0.0};
  p.Vpp = {0.0, 0.0};
  EXPECT_TRUE(check_structural_bounds(p).ok());
  p.V[1] = 0.3;
  p.Vp[0] = 1.5;
  p.Vpp[1] = 2.1;
  const auto s = check_structural_bounds(p);
  EXPECT_EQ(s.bound_violations, 3);
  EXPECT_GT(s.period_average_rel_error, 1e-9);
  EXPECT_FALSE(s.ok());
}

TEST(Angular, EigenstateIsConsistent) {
  const PeriodicDomain d(2.0 * kPi, 64);
  const auto r = angular_case_report(single(MomentumEigenstate{2}, d));
  EXPECT_EQ(r.delta_lz, 0.0);
  EXPECT_NEAR(r.delta_phi, kPi / std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(r.judge_rhs, 0.0, 1e-12);
  EXPECT_NEAR(r.judge_margin, 0.0, 1e-12);
  EXPECT_EQ(r.eta, 0.15);
}

TEST(Angular, PeakedStateHasPositiveMargin) {
  const PeriodicDomain d(2.0 * kPi, 128);
  // von Mises amplitude exp(kappa cos(phi) / 2)
  std::vector<Complex> amps(128);
  for (int j = 0; j < 128; ++j) amps[static_cast<std::size_t>(j)] = std::exp(2.0 * std::cos(d.node(j)));
  const auto r = angular_case_report(WaveFunction::from_amplitudes(d, amps));
  EXPECT_GT(r.judge_margin, 0.0);
  EXPECT_NEAR(r.judge_rhs, 0.15 * (1.0 - 3.0 * r.delta_phi * r.delta_phi / (kPi * kPi)), 1e-15);
}

TEST(Angular, RejectsOtherLengths) {
  const PeriodicDomain d(6.0, 64);
  EXPECT_THROW(angular_case_report(single(MomentumEigenstate{0}, d)), std::invalid_argument);
}
