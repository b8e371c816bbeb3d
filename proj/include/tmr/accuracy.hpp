#pragma once

// Closed-form reconstruction accuracy.
//
// With gamma = N_mode / N_wf:
//   mean infidelity, real mode     (gamma/2) (1/n) (1 + 1/(2n))
//   its standard deviation         sqrt(N_mode/2) / N_wf (1/n) (1 + 1/(2n))
//   vacuum photon-number spread    sqrt(gamma)
//   photon-number bias             (gamma/2) (1 + 1/(2n))
//   complex-mode infidelity band   [(gamma/2)(2/n)(1 + 1/n), sqrt(gamma)/n]
// The lower edge is the real formula at n/2 (a balanced complex mode splits
// its photons evenly); the upper edge is the vacuum spread relative to n.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "tmr/error.hpp"

namespace tmr {

struct AccuracyInputs {
  double n_wf = 0.0;
  double n_mode = 0.0;
  double n = 0.0;
};

enum class RegimeTier { ok, warning, breakdown };

inline const char* to_string(RegimeTier t) {
  switch (t) {
    case RegimeTier::ok: return "ok";
    case RegimeTier::warning: return "warning";
    case RegimeTier::breakdown: return "breakdown";
  }
  return "?";
}

inline constexpr double kRegimeOk = 0.1;
inline constexpr double kRegimeWarning = 0.3;

struct ComplexBounds {
  double lower = 0.0;
  double upper = 0.0;
};

struct AccuracyPrediction {
  AccuracyInputs inputs;
  std::optional<double> mean_infidelity_real;
  std::optional<double> std_infidelity_real;
  double vacuum_dn = 0.0;
  std::optional<double> mean_dn;
  std::optional<ComplexBounds> complex_bounds;
  double regime_ratio = 0.0;  ///< sqrt(n_mode / n_wf) / n, +inf at n = 0
  bool regime_ok = false;
  RegimeTier tier = RegimeTier::breakdown;
  bool extrapolated = false;  ///< outside the range the formulas were validated on

  double infidelity_real() const {
    if (!mean_infidelity_real) throw DomainError("infidelity is undefined at n = 0");
    return *mean_infidelity_real;
  }
  const ComplexBounds& bounds() const {
    if (!complex_bounds) throw DomainError("complex bounds are undefined at n = 0");
    return *complex_bounds;
  }
};

struct ValidityEnvelope {
  double n_wf_min = 1e2, n_wf_max = 1e7;
  double n_mode_min = 20, n_mode_max = 500;
  double n_min = 1e-3, n_max = 1e2;

  bool contains(const AccuracyInputs& in) const {
    return in.n_wf >= n_wf_min && in.n_wf <= n_wf_max && in.n_mode >= n_mode_min && in.n_mode <= n_mode_max &&
           in.n >= n_min && in.n <= n_max;
  }
};

inline void validate(const AccuracyInputs& in) {
  if (!(in.n_wf >= 1.0) || !std::isfinite(in.n_wf)) throw InvalidArgument("n_wf must be >= 1");
  if (!(in.n_mode >= 1.0) || !std::isfinite(in.n_mode)) throw InvalidArgument("n_mode must be >= 1");
  if (!(in.n >= 0.0) || !std::isfinite(in.n)) throw InvalidArgument("n must be >= 0");
}

inline double mean_infidelity_real(double n_wf, double n_mode, double n) {
  if (!(n > 0.0)) throw DomainError("infidelity is undefined at n = 0");
  return (n_mode / 2.0) / n_wf * (1.0 / n) * (1.0 + 1.0 / (2.0 * n));
}

inline double complex_upper_bound(double n_wf, double n_mode, double n) {
  if (!(n > 0.0)) throw DomainError("infidelity is undefined at n = 0");
  return std::sqrt(n_mode / n_wf) / n;
}

inline AccuracyPrediction predict(const AccuracyInputs& in) {
  validate(in);
  AccuracyPrediction p;
  p.inputs = in;
  const double gamma = in.n_mode / in.n_wf;
  p.vacuum_dn = std::sqrt(gamma);
  if (in.n > 0.0) {
    const double factor = (1.0 / in.n) * (1.0 + 1.0 / (2.0 * in.n));
    p.mean_infidelity_real = (in.n_mode / 2.0) / in.n_wf * factor;
    p.std_infidelity_real = std::sqrt(in.n_mode / 2.0) / in.n_wf * factor;
    p.mean_dn = (in.n_mode / 2.0) / in.n_wf * (1.0 + 1.0 / (2.0 * in.n));
    p.complex_bounds = ComplexBounds{(in.n_mode / 2.0) / in.n_wf * (2.0 / in.n) * (1.0 + 1.0 / in.n),
                                     (1.0 / in.n) * std::sqrt(gamma)};
    p.regime_ratio = std::sqrt(gamma) / in.n;
  } else {
    p.regime_ratio = std::numeric_limits<double>::infinity();
  }
  p.regime_ok = p.regime_ratio <= kRegimeOk;
  p.tier = p.regime_ok                          ? RegimeTier::ok
           : p.regime_ratio <= kRegimeWarning ? RegimeTier::warning
                                                : RegimeTier::breakdown;
  p.extrapolated = !ValidityEnvelope{}.contains(in);
  return p;
}

enum class AccuracyRegime { real, complex_upper };

/// Smallest integer N_wf whose predicted infidelity does not exceed the target.
inline std::uint64_t required_waveforms(double target, double n_mode, double n, AccuracyRegime regime) {
  if (!(target > 0.0)) throw InvalidArgument("target infidelity must be positive");
  if (target > 1.0) throw InvalidArgument("target infidelity must not exceed 1");
  if (!(n > 0.0)) throw DomainError("required waveforms are undefined at n = 0");
  if (!(n_mode >= 1.0)) throw InvalidArgument("n_mode must be >= 1");
  // Both predictors are c / N_wf^p; invert, then fix up rounding so the
  // answer is exact for the predicate evaluated in floating point.
  auto predictor = [&](double n_wf) {
    return regime == AccuracyRegime::real ? mean_infidelity_real(n_wf, n_mode, n)
                                          : complex_upper_bound(n_wf, n_mode, n);
  };
  const double raw = regime == AccuracyRegime::real
                         ? (n_mode / 2.0) * (1.0 / n) * (1.0 + 1.0 / (2.0 * n)) / target
                         : n_mode / ((n * target) * (n * target));
  if (!std::isfinite(raw) || raw > 9.0e18) throw InvalidArgument("target infidelity is unattainable");
  const double slack = 1.0 + 1e-12;
  auto fits = [&](double n_wf) { return predictor(n_wf) <= target * slack; };
  auto count = static_cast<std::uint64_t>(std::max(1.0, std::ceil(raw)));
  while (count > 1 && fits(static_cast<double>(count - 1))) --count;
  while (!fits(static_cast<double>(count))) ++count;
  return count;
}

}  // namespace tmr
