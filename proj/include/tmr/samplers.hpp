#pragma once

// Quadrature samplers in vacuum units (sigma0^2 = 1, x = a e^{-i theta} + h.c.).
//
//   vacuum:        N(0, 1)
//   single photon: P1(x) = x^2 exp(-x^2/2) / sqrt(2 pi), drawn as a random
//                  sign times sqrt(chi-square with 3 degrees of freedom)
//   coherent:      N(2 Re(alpha e^{-i theta}), 1)

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "tmr/error.hpp"

namespace tmr {

/// Sampler bundle bound to one random stream. The normal generator keeps its
/// cached second variate, so a sampler must not be shared between streams.
template <class Rng>
class QuadratureSampler {
 public:
  explicit QuadratureSampler(Rng rng) : rng_(std::move(rng)) {}

  Rng& rng() noexcept { return rng_; }

  double uniform() { return std::generate_canonical<double, 53>(rng_); }
  double vacuum() { return normal_(rng_); }

  double single_photon() {
    const double a = normal_(rng_), b = normal_(rng_), c = normal_(rng_);
    const double r = std::sqrt(a * a + b * b + c * c);
    return (rng_() & 1u) ? r : -r;
  }

  /// One photon in the real carrier with probability eta*t^2, in the
  /// imaginary carrier with probability eta*r^2, otherwise vacuum in both.
  /// The cross term of the joint density vanishes for the i-phased
  /// superposition, so this mixture has exactly the joint two-carrier law.
  std::pair<double, double> photon_pair(double t_amp, double r_amp, double eta) {
    const double u = uniform();
    if (u < eta * t_amp * t_amp) return {single_photon(), vacuum()};
    if (u < eta) return {vacuum(), single_photon()};
    return {vacuum(), vacuum()};
  }

  /// Uniform LO phase in [0, 2 pi).
  double phase() { return 2.0 * std::numbers::pi * uniform(); }

 private:
  Rng rng_;
  std::normal_distribution<double> normal_;
};

inline void check_photon_pair_args(double t_amp, double r_amp, double eta) {
  if (!std::isfinite(t_amp) || !std::isfinite(r_amp) || t_amp < 0.0 || r_amp < 0.0 ||
      std::abs(t_amp * t_amp + r_amp * r_amp - 1.0) > 1e-9)
    throw InvalidArgument("photon pair amplitudes must satisfy t^2 + r^2 = 1");
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidArgument("detection efficiency must lie in [0, 1]");
}

template <class Rng>
double sample_vacuum(Rng& rng) {
  std::normal_distribution<double> normal;
  return normal(rng);
}

template <class Rng>
double sample_single_photon(Rng& rng) {
  std::normal_distribution<double> normal;
  const double a = normal(rng), b = normal(rng), c = normal(rng);
  const double r = std::sqrt(a * a + b * b + c * c);
  return (rng() & 1u) ? r : -r;
}

template <class Rng>
std::pair<double, double> sample_complex_photon_pair(Rng& rng, double t_amp, double r_amp, double eta) {
  check_photon_pair_args(t_amp, r_amp, eta);
  const double u = std::generate_canonical<double, 53>(rng);
  if (u < eta * t_amp * t_amp) {
    const double x = sample_single_photon(rng);
    return {x, sample_vacuum(rng)};
  }
  if (u < eta) {
    const double x = sample_vacuum(rng);
    return {x, sample_single_photon(rng)};
  }
  const double x = sample_vacuum(rng);
  return {x, sample_vacuum(rng)};
}

/// Per-mode quadratures of a coherent state with amplitude alpha in mode f,
/// measured at LO phase theta; basis_overlaps[j] = <f_j, f>.
template <class Rng>
std::vector<double> sample_coherent_mode_amplitudes(Rng& rng, std::complex<double> alpha,
                                                    std::span<const std::complex<double>> basis_overlaps,
                                                    double theta) {
  std::normal_distribution<double> normal;
  const std::complex<double> lo = std::polar(1.0, -theta);
  std::vector<double> x(basis_overlaps.size());
  for (std::size_t j = 0; j < x.size(); ++j)
    x[j] = 2.0 * (alpha * basis_overlaps[j] * lo).real() + normal(rng);
  return x;
}

/// Single-photon density P1(x) and its CDF Phi(x) - x phi(x).
inline double single_photon_pdf(double x) {
  return x * x * std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}
inline double vacuum_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }
inline double single_photon_cdf(double x) {
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  return vacuum_cdf(x) - x * std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace tmr
