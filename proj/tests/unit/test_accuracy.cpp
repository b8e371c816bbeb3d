#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "tmr/accuracy.hpp"

using namespace tmr;

TEST(Predict, RealInfidelityExample) {
  const auto p = predict({1e4, 200, 1.0});
  EXPECT_NEAR(p.infidelity_real(), 0.015, 1e-15);
}

TEST(Predict, VacuumDeviationExample) {
  const auto p = predict({1e6, 100, 0.0});
  EXPECT_NEAR(p.vacuum_dn, 0.01, 1e-15);
  EXPECT_FALSE(p.mean_infidelity_real);
  EXPECT_FALSE(p.complex_bounds);
  EXPECT_THROW(p.infidelity_real(), DomainError);
  EXPECT_THROW(p.bounds(), DomainError);
  EXPECT_TRUE(std::isinf(p.regime_ratio));
  EXPECT_EQ(p.tier, RegimeTier::breakdown);
}

TEST(Predict, ComplexBoundsExample) {
  const auto p = predict({1e6, 100, 1.1});
  EXPECT_NEAR(p.bounds().lower, 1.736e-4, 1e-7);
  EXPECT_NEAR(p.bounds().upper, 9.091e-3, 1e-6);
  // Direct substitution, independent of the implementation's grouping.
  EXPECT_NEAR(p.bounds().lower, 5e-5 * (2.0 / 1.1) * (1.0 + 1.0 / 1.1), 1e-18);
  EXPECT_NEAR(p.bounds().upper, 0.01 / 1.1, 1e-17);
}

TEST(Predict, DeviationAndStd) {
  const auto p = predict({1e4, 200, 1.0});
  EXPECT_NEAR(*p.std_infidelity_real, 0.015 / std::sqrt(100.0), 1e-15);
  EXPECT_NEAR(*p.mean_dn, 100.0 / 1e4 * 1.5, 1e-15);
}

TEST(Predict, RegimeTiers) {
  EXPECT_EQ(predict({1e6, 100, 1.0}).tier, RegimeTier::ok);       // ratio 0.01
  EXPECT_EQ(predict({1e4, 100, 0.5}).tier, RegimeTier::warning);  // ratio 0.2
  EXPECT_EQ(predict({1e4, 100, 0.1}).tier, RegimeTier::breakdown);
  EXPECT_TRUE(predict({1e4, 100, 1.0}).regime_ok);  // ratio exactly 0.1
}

TEST(Predict, ValidityEnvelope) {
  EXPECT_FALSE(predict({1e4, 100, 1.0}).extrapolated);
  EXPECT_TRUE(predict({50, 100, 1.0}).extrapolated);
  EXPECT_TRUE(predict({1e4, 10, 1.0}).extrapolated);
  EXPECT_TRUE(predict({1e4, 100, 500.0}).extrapolated);
}

TEST(Predict, InputValidation) {
  EXPECT_THROW(predict({0.5, 100, 1.0}), InvalidArgument);
  EXPECT_THROW(predict({1e4, 0.0, 1.0}), InvalidArgument);
  EXPECT_THROW(predict({1e4, 100, -1.0}), InvalidArgument);
  EXPECT_THROW(predict({1e4, 100, std::nan("")}), InvalidArgument);
}

TEST(Predict, StdToMeanRatio) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> lw(2, 7), lm(std::log10(20.0), std::log10(500.0)), ln(-3, 2);
  for (int i = 0; i < 200; ++i) {
    const double n_mode = std::pow(10.0, lm(rng));
    const auto p = predict({std::pow(10.0, lw(rng)), n_mode, std::pow(10.0, ln(rng))});
    EXPECT_NEAR(*p.std_infidelity_real / *p.mean_infidelity_real, 1.0 / std::sqrt(n_mode / 2.0), 1e-14);
  }
}

TEST(Predict, Monotonicity) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> lw(2, 7), lm(std::log10(20.0), std::log10(500.0)), ln(-3, 2), up(1.01, 3.0);
  for (int i = 0; i < 500; ++i) {
    const AccuracyInputs base{std::pow(10.0, lw(rng)), std::pow(10.0, lm(rng)), std::pow(10.0, ln(rng))};
    const auto p = predict(base);
    const double s = up(rng);
    const auto more_wf = predict({base.n_wf * s, base.n_mode, base.n});
    const auto more_n = predict({base.n_wf, base.n_mode, base.n * s});
    const auto more_mode = predict({base.n_wf, base.n_mode * s, base.n});
    EXPECT_LE(*more_wf.mean_infidelity_real, *p.mean_infidelity_real);
    EXPECT_LE(*more_n.mean_infidelity_real, *p.mean_infidelity_real);
    EXPECT_GE(*more_mode.mean_infidelity_real, *p.mean_infidelity_real);
    EXPECT_LE(more_wf.vacuum_dn, p.vacuum_dn);
    EXPECT_GE(more_mode.vacuum_dn, p.vacuum_dn);
    EXPECT_LE(more_wf.bounds().upper, p.bounds().upper);
    EXPECT_LE(more_n.bounds().upper, p.bounds().upper);
    EXPECT_GE(more_mode.bounds().upper, p.bounds().upper);
    EXPECT_LE(more_wf.bounds().lower, p.bounds().lower);
    EXPECT_LE(more_n.bounds().lower, p.bounds().lower);
    EXPECT_GE(more_mode.bounds().lower, p.bounds().lower);
  }
}

TEST(Predict, BalancedCaseLiesBetweenBounds) {
  // The ordering needs sqrt(N_mode/N_wf)(1 + 1/n) <= 1, which the regime
  // condition ratio <= 0.1 guarantees for n <= 9.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> lw(2, 7), lm(std::log10(20.0), std::log10(500.0)), ln(-3, std::log10(9.0));
  int checked = 0;
  for (int i = 0; i < 2000; ++i) {
    const AccuracyInputs in{std::pow(10.0, lw(rng)), std::pow(10.0, lm(rng)), std::pow(10.0, ln(rng))};
    const auto p = predict(in);
    if (!p.regime_ok) continue;
    ++checked;
    const double balanced = mean_infidelity_real(in.n_wf, in.n_mode, in.n / 2.0);
    EXPECT_LE(p.bounds().lower, balanced * (1.0 + 1e-12));
    EXPECT_LE(balanced, p.bounds().upper);
    EXPECT_LE(p.bounds().lower, p.bounds().upper);
  }
  EXPECT_GT(checked, 100);
}

TEST(RequiredWaveforms, RealExample) {
  EXPECT_EQ(required_waveforms(0.015, 200, 1.0, AccuracyRegime::real), 10000u);
}

TEST(RequiredWaveforms, ComplexUpperExample) {
  EXPECT_EQ(required_waveforms(0.01 / 1.1, 100, 1.1, AccuracyRegime::complex_upper), 1000000u);
  const auto rounded = required_waveforms(9.091e-3, 100, 1.1, AccuracyRegime::complex_upper);
  EXPECT_NEAR(static_cast<double>(rounded), 1e6, 1e2);
}

TEST(RequiredWaveforms, UnitTargetIsBreakdownThreshold) {
  for (double n : {0.015, 0.1, 1.0, 3.0}) {
    const auto nw = required_waveforms(1.0, 100, n, AccuracyRegime::real);
    EXPECT_LE(mean_infidelity_real(static_cast<double>(nw), 100, n), 1.0 + 1e-12);
    if (nw > 1) EXPECT_GT(mean_infidelity_real(static_cast<double>(nw - 1), 100, n), 1.0);
  }
}

TEST(RequiredWaveforms, IsSmallestSatisfyingCount) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> lt(-4, -1), lm(std::log10(20.0), std::log10(500.0)), ln(-1, 1);
  for (int i = 0; i < 200; ++i) {
    const double target = std::pow(10.0, lt(rng)), n_mode = std::pow(10.0, lm(rng)), n = std::pow(10.0, ln(rng));
    for (auto regime : {AccuracyRegime::real, AccuracyRegime::complex_upper}) {
      const auto nw = static_cast<double>(required_waveforms(target, n_mode, n, regime));
      auto pred = [&](double w) {
        return regime == AccuracyRegime::real ? mean_infidelity_real(w, n_mode, n) : complex_upper_bound(w, n_mode, n);
      };
      EXPECT_LE(pred(nw), target * (1.0 + 1e-12));
      if (nw > 1) EXPECT_GT(pred(nw - 1), target * (1.0 + 1e-12));
    }
  }
}

TEST(RequiredWaveforms, Errors) {
  EXPECT_THROW(required_waveforms(0.0, 100, 1.0, AccuracyRegime::real), InvalidArgument);
  EXPECT_THROW(required_waveforms(-0.1, 100, 1.0, AccuracyRegime::real), InvalidArgument);
  EXPECT_THROW(required_waveforms(1.5, 100, 1.0, AccuracyRegime::real), InvalidArgument);
  EXPECT_THROW(required_waveforms(0.01, 100, 0.0, AccuracyRegime::real), DomainError);
  EXPECT_THROW(required_waveforms(1e-300, 100, 1.0, AccuracyRegime::complex_upper), InvalidArgument);
}
