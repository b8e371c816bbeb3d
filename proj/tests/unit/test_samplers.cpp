#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/distributions/chi_squared.hpp>

#include "tmr/rng.hpp"
#include "tmr/samplers.hpp"

using namespace tmr;

namespace {

constexpr std::size_t kDraws = 1'000'000;

struct Moments {
  double mean = 0, var = 0, excess_kurtosis = 0;
};

template <class Draw>
Moments moments(Draw draw, std::size_t n) {
  // Two-pass over stored draws to keep the fourth moment accurate.
  std::vector<double> x(n);
  for (auto& v : x) v = draw();
  double m = 0;
  for (double v : x) m += v;
  m /= static_cast<double>(n);
  double m2 = 0, m4 = 0;
  for (double v : x) {
    const double d = (v - m) * (v - m);
    m2 += d;
    m4 += d * d;
  }
  m2 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);
  return {m, m2, m4 / (m2 * m2) - 3.0};
}

// Bin edges for the 20 x 20 joint histogram: 19 interior edges evenly over
// [-2.7, 2.7], outer bins open to infinity.
std::array<double, 21> edges() {
  std::array<double, 21> e{};
  e[0] = -INFINITY;
  e[20] = INFINITY;
  for (int k = 1; k < 20; ++k) e[k] = -2.7 + 5.4 * (k - 1) / 18.0;
  return e;
}

int bin_of(double x, const std::array<double, 21>& e) {
  int b = static_cast<int>(std::upper_bound(e.begin(), e.end(), x) - e.begin()) - 1;
  return std::clamp(b, 0, 19);
}

// Exact cell probabilities of the joint density
//   eta (t^2 P1(x) P0(y) + r^2 P0(x) P1(y)) + (1 - eta) P0(x) P0(y).
std::vector<double> expected_cells(double t, double r, double eta) {
  const auto e = edges();
  std::vector<double> p(400);
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      const double v0x = vacuum_cdf(e[i + 1]) - vacuum_cdf(e[i]);
      const double v1x = single_photon_cdf(e[i + 1]) - single_photon_cdf(e[i]);
      const double v0y = vacuum_cdf(e[j + 1]) - vacuum_cdf(e[j]);
      const double v1y = single_photon_cdf(e[j + 1]) - single_photon_cdf(e[j]);
      p[i * 20 + j] = eta * (t * t * v1x * v0y + r * r * v0x * v1y) + (1.0 - eta) * v0x * v0y;
    }
  return p;
}

double goodness_of_fit_p(const std::vector<double>& counts, const std::vector<double>& prob) {
  double n = 0, stat = 0;
  for (double c : counts) n += c;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const double ex = n * prob[k];
    stat += (counts[k] - ex) * (counts[k] - ex) / ex;
  }
  boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

// Inverse CDF by bisection.
template <class Cdf>
double invert(Cdf cdf, double u) {
  double lo = -12.0, hi = 12.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < u ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Sequential construction: x_r from the marginal of the joint density,
// then x_i from the conditional density given x_r.
std::pair<double, double> marginal_then_conditional(CounterStream& rng, double t, double r, double eta) {
  const double a = eta * t * t;
  auto marginal_cdf = [&](double x) { return a * single_photon_cdf(x) + (1.0 - a) * vacuum_cdf(x); };
  const double xr = invert(marginal_cdf, rng.uniform());
  const double p0 = std::exp(-0.5 * xr * xr) / std::sqrt(2.0 * std::numbers::pi);
  const double p1 = single_photon_pdf(xr);
  const double marginal = a * p1 + (1.0 - a) * p0;
  // P(x_i | x_r) = w1 P1(x_i) + (1 - w1) P0(x_i).
  const double w1 = eta * r * r * p0 / marginal;
  auto cond_cdf = [&](double y) { return w1 * single_photon_cdf(y) + (1.0 - w1) * vacuum_cdf(y); };
  return {xr, invert(cond_cdf, rng.uniform())};
}

}  // namespace

TEST(Vacuum, Moments) {
  CounterStream rng(101);
  const auto m = moments([&] { return sample_vacuum(rng); }, kDraws);
  EXPECT_NEAR(m.mean, 0.0, 5e-3);
  EXPECT_NEAR(m.var, 1.0, 0.01);
  EXPECT_NEAR(m.excess_kurtosis, 0.0, 0.05);
}

TEST(SinglePhoton, Moments) {
  CounterStream rng(202);
  std::size_t near_zero = 0;
  const auto m = moments(
      [&] {
        const double x = sample_single_photon(rng);
        if (std::abs(x) < 0.01) ++near_zero;
        return x;
      },
      kDraws);
  EXPECT_NEAR(m.var, 3.0, 0.03);
  EXPECT_NEAR(m.mean, 0.0, 1e-2);
  EXPECT_LT(static_cast<double>(near_zero) / kDraws, 1e-5);
}

TEST(SinglePhoton, DensityMatchesChiSquare) {
  CounterStream rng(303);
  const auto e = edges();
  std::vector<double> counts(20, 0.0), prob(20);
  for (std::size_t i = 0; i < kDraws; ++i) counts[bin_of(sample_single_photon(rng), e)] += 1.0;
  for (int k = 0; k < 20; ++k) prob[k] = single_photon_cdf(e[k + 1]) - single_photon_cdf(e[k]);
  EXPECT_GT(goodness_of_fit_p(counts, prob), 1e-3);
}

TEST(SinglePhoton, CdfIsIntegralOfDensity) {
  // Trapezoid integration of P1 as an independent check of the closed form.
  double acc = 0.0, x = -10.0;
  const double h = 1e-4;
  while (x < 1.3) {
    acc += 0.5 * h * (single_photon_pdf(x) + single_photon_pdf(x + h));
    x += h;
  }
  EXPECT_NEAR(acc, single_photon_cdf(x), 1e-7);
}

TEST(PhotonPair, ArgumentChecks) {
  CounterStream rng(1);
  EXPECT_THROW(sample_complex_photon_pair(rng, 0.9, 0.9, 1.0), InvalidArgument);
  EXPECT_THROW(sample_complex_photon_pair(rng, 1.0, 0.0, 1.5), InvalidArgument);
  EXPECT_THROW(sample_complex_photon_pair(rng, 1.0, 0.0, -0.1), InvalidArgument);
}

TEST(PhotonPair, NoEfficiencyIsVacuum) {
  CounterStream rng(404);
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < kDraws; ++i) {
    const auto [x, y] = sample_complex_photon_pair(rng, 0.8, 0.6, 0.0);
    sx += x, sy += y, sxx += x * x, syy += y * y, sxy += x * y;
  }
  const double n = kDraws;
  const double cov = sxy / n - (sx / n) * (sy / n);
  EXPECT_NEAR(sxx / n, 1.0, 0.01);
  EXPECT_NEAR(syy / n, 1.0, 0.01);
  EXPECT_LT(std::abs(cov), 3.0 / std::sqrt(n));
}

TEST(PhotonPair, Variances) {
  struct Case {
    double t, r, vr, vi;
  };
  const double h = 1.0 / std::sqrt(2.0);
  for (const auto& c : {Case{1.0, 0.0, 3.0, 1.0}, Case{h, h, 2.0, 2.0}}) {
    CounterStream rng(505);
    double sxx = 0, syy = 0;
    for (std::size_t i = 0; i < kDraws; ++i) {
      const auto [x, y] = sample_complex_photon_pair(rng, c.t, c.r, 1.0);
      sxx += x * x, syy += y * y;
    }
    EXPECT_NEAR(sxx / kDraws, c.vr, 0.01 * c.vr);
    EXPECT_NEAR(syy / kDraws, c.vi, 0.01 * c.vi);
  }
}

TEST(PhotonPair, MixtureMatchesJointDensity) {
  const double t = std::cos(0.5), r = std::sin(0.5), eta = 0.8;
  const auto prob = expected_cells(t, r, eta);
  const auto e = edges();

  CounterStream rng(606);
  std::vector<double> mix(400, 0.0);
  for (std::size_t i = 0; i < kDraws; ++i) {
    const auto [x, y] = sample_complex_photon_pair(rng, t, r, eta);
    mix[bin_of(x, e) * 20 + bin_of(y, e)] += 1.0;
  }
  EXPECT_GT(goodness_of_fit_p(mix, prob), 1e-3);
}

TEST(PhotonPair, MarginalThenConditionalAgrees) {
  const double t = std::cos(0.5), r = std::sin(0.5), eta = 0.8;
  const auto prob = expected_cells(t, r, eta);
  const auto e = edges();
  constexpr std::size_t n = 200'000;  // bisection sampling is slow

  CounterStream rng_a(707), rng_b(808);
  std::vector<double> cond(400, 0.0), mix(400, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [x, y] = marginal_then_conditional(rng_a, t, r, eta);
    cond[bin_of(x, e) * 20 + bin_of(y, e)] += 1.0;
    const auto [u, v] = sample_complex_photon_pair(rng_b, t, r, eta);
    mix[bin_of(u, e) * 20 + bin_of(v, e)] += 1.0;
  }
  // The reference construction reproduces the density ...
  EXPECT_GT(goodness_of_fit_p(cond, prob), 1e-3);
  // ... and the two samplers agree with each other (two-sample chi-square).
  double stat = 0;
  int cells = 0;
  for (std::size_t k = 0; k < 400; ++k) {
    const double s = cond[k] + mix[k];
    if (s == 0) continue;
    stat += (cond[k] - mix[k]) * (cond[k] - mix[k]) / s;
    ++cells;
  }
  boost::math::chi_squared dist(cells - 1);
  EXPECT_GT(boost::math::cdf(boost::math::complement(dist, stat)), 1e-3);
}

TEST(PhotonPair, SamplerClassMatchesFreeFunction) {
  QuadratureSampler<CounterStream> s(CounterStream(9));
  double sxx = 0;
  for (std::size_t i = 0; i < kDraws; ++i) {
    const auto [x, y] = s.photon_pair(1.0, 0.0, 1.0);
    sxx += x * x;
    (void)y;
  }
  EXPECT_NEAR(sxx / kDraws, 3.0, 0.03);
}

TEST(Coherent, ZeroAmplitudeIsVacuum) {
  CounterStream a(42), b(42);
  const std::vector<std::complex<double>> ov{{0.6, 0.0}, {0.0, 0.8}, {0.0, 0.0}};
  for (int i = 0; i < 1000; ++i) {
    const auto x = sample_coherent_mode_amplitudes(a, {0.0, 0.0}, ov, 1.234);
    std::normal_distribution<double> fresh;
    for (double v : x) EXPECT_EQ(v, fresh(b));
  }
}

TEST(Coherent, FixedPhaseMean) {
  CounterStream rng(43);
  const double alpha = 1.3;
  const std::vector<std::complex<double>> ov{{1.0, 0.0}};
  double s = 0;
  constexpr std::size_t n = 100'000;
  for (std::size_t i = 0; i < n; ++i) s += sample_coherent_mode_amplitudes(rng, alpha, ov, 0.0)[0];
  EXPECT_NEAR(s / n, 2.0 * alpha, 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST(Coherent, PhaseAveragedVariance) {
  CounterStream rng(44);
  const std::complex<double> alpha{0.9, 0.4};
  const std::vector<std::complex<double>> ov{{0.8, 0.0}, {0.0, 0.6}};
  std::vector<double> s(2, 0.0), ss(2, 0.0);
  for (std::size_t i = 0; i < kDraws; ++i) {
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    const auto x = sample_coherent_mode_amplitudes(rng, alpha, ov, theta);
    for (int j = 0; j < 2; ++j) s[j] += x[j], ss[j] += x[j] * x[j];
  }
  for (int j = 0; j < 2; ++j) {
    const double mean = s[j] / kDraws, var = ss[j] / kDraws - mean * mean;
    const double expected = 2.0 * std::norm(alpha * ov[j]) + 1.0;
    EXPECT_NEAR(mean, 0.0, 5.0 * std::sqrt(expected / kDraws));
    EXPECT_NEAR(var, expected, 0.01 * expected);
  }
}

TEST(CounterStream, IndependentOfConstructionOrder) {
  CounterStream a(7, 3), b(derive_seed(7, 3));
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a(), b());
  CounterStream c(7, 4);
  EXPECT_NE(CounterStream(7, 3)(), c());
}
