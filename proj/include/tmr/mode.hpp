#pragma once

// Sampled complex temporal modes, orthonormal real bases and the fidelity
// metric. Modes use the discrete norm sum_k |f_k|^2 = 1, i.e. the sample
// spacing is absorbed into the samples, so kernel eigenvectors compare to
// modes without rescaling.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "tmr/error.hpp"

namespace tmr {

using cplx = std::complex<double>;

class TimeGrid {
 public:
  TimeGrid(std::size_t n_samp, double dt) : n_samp_(n_samp), dt_(dt) {
    if (n_samp < 2) throw DimensionError("time grid needs at least 2 samples");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("time grid dt must be positive");
  }

  std::size_t n_samp() const noexcept { return n_samp_; }
  double dt() const noexcept { return dt_; }
  double time(std::size_t k) const noexcept { return static_cast<double>(k) * dt_; }
  double duration() const noexcept { return static_cast<double>(n_samp_ - 1) * dt_; }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  std::size_t n_samp_;
  double dt_;
};

inline void require_same_grid(const TimeGrid& a, const TimeGrid& b, const char* what) {
  if (!(a == b)) {
    throw DimensionError(std::string(what) + ": grids differ (" + std::to_string(a.n_samp()) +
                         " vs " + std::to_string(b.n_samp()) + " samples)");
  }
}

/// Unit-norm complex mode on a time grid. Immutable once built.
class TemporalMode {
 public:
  /// Wraps samples that are already unit norm (checked to 1e-12).
  static TemporalMode from_unit(TimeGrid grid, std::vector<cplx> samples) {
    if (samples.size() != grid.n_samp()) throw DimensionError("mode length does not match grid");
    double norm = 0.0;
    for (const auto& s : samples) norm += std::norm(s);
    if (std::abs(norm - 1.0) > 1e-12) throw InvalidArgument("mode samples are not unit norm");
    return TemporalMode(grid, std::move(samples));
  }

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return samples_.size(); }
  std::span<const cplx> samples() const noexcept { return samples_; }
  cplx operator[](std::size_t k) const noexcept { return samples_[k]; }

  double amplitude(std::size_t k) const { return std::abs(samples_[k]); }
  double phase(std::size_t k) const { return std::arg(samples_[k]); }

  std::vector<double> real_part() const {
    std::vector<double> out(samples_.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = samples_[k].real();
    return out;
  }
  std::vector<double> imag_part() const {
    std::vector<double> out(samples_.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = samples_[k].imag();
    return out;
  }

  bool is_real(double tol = 0.0) const {
    for (const auto& s : samples_)
      if (std::abs(s.imag()) > tol) return false;
    return true;
  }

  TemporalMode conjugate() const {
    std::vector<cplx> c(samples_.size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = std::conj(samples_[k]);
    return TemporalMode(grid_, std::move(c));
  }

  /// Multiplies every sample by exp(i*alpha).
  TemporalMode rotated(double alpha) const {
    const cplx p = std::polar(1.0, alpha);
    std::vector<cplx> c(samples_.size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = samples_[k] * p;
    return TemporalMode(grid_, std::move(c));
  }

 private:
  friend TemporalMode normalize(std::span<const cplx>, const TimeGrid&);
  TemporalMode(TimeGrid grid, std::vector<cplx> samples)
      : grid_(grid), samples_(std::move(samples)) {}

  TimeGrid grid_;
  std::vector<cplx> samples_;
};

/// Scales samples to unit discrete norm; direction is unchanged.
inline TemporalMode normalize(std::span<const cplx> samples, const TimeGrid& grid) {
  if (samples.size() != grid.n_samp()) throw DimensionError("mode length does not match grid");
  double norm = 0.0;
  for (const auto& s : samples) {
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
      throw InvalidArgument("mode samples must be finite");
    norm += std::norm(s);
  }
  if (!(norm > 0.0)) throw DegenerateModeError("cannot normalize an all-zero mode");
  const double scale = 1.0 / std::sqrt(norm);
  std::vector<cplx> out(samples.begin(), samples.end());
  for (auto& s : out) s *= scale;
  return TemporalMode(grid, std::move(out));
}

inline TemporalMode normalize(std::span<const double> samples, const TimeGrid& grid) {
  std::vector<cplx> c(samples.begin(), samples.end());
  return normalize(std::span<const cplx>(c), grid);
}

/// <g, h> = sum_k conj(g_k) h_k.
inline cplx overlap(const TemporalMode& g, const TemporalMode& h) {
  require_same_grid(g.grid(), h.grid(), "overlap");
  cplx acc{0.0, 0.0};
  for (std::size_t k = 0; k < g.size(); ++k) acc += std::conj(g[k]) * h[k];
  return acc;
}

/// |<target, measured>|^2.
inline double fidelity(const TemporalMode& target, const TemporalMode& measured) {
  return std::norm(overlap(target, measured));
}

/// Ordered set of mutually orthonormal modes on one grid.
class ModeBasis {
 public:
  ModeBasis(TimeGrid grid, std::vector<TemporalMode> modes) : grid_(grid), modes_(std::move(modes)) {
    for (const auto& m : modes_) require_same_grid(grid_, m.grid(), "mode basis");
  }

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return modes_.size(); }
  const TemporalMode& operator[](std::size_t j) const { return modes_.at(j); }
  const std::vector<TemporalMode>& modes() const noexcept { return modes_; }

  /// Largest |<f_j, f_k> - delta_jk| over all pairs.
  double orthonormality_error() const {
    double worst = 0.0;
    for (std::size_t j = 0; j < modes_.size(); ++j)
      for (std::size_t k = j; k < modes_.size(); ++k) {
        const cplx g = overlap(modes_[j], modes_[k]);
        worst = std::max(worst, std::abs(g - cplx(j == k ? 1.0 : 0.0, 0.0)));
      }
    return worst;
  }

 private:
  TimeGrid grid_;
  std::vector<TemporalMode> modes_;
};

/// Decomposition e^{i phi0} f = t_amp * real_carrier + i r_amp * imag_carrier
/// with orthonormal real carriers and t_amp >= r_amp >= 0, t^2 + r^2 = 1.
/// For a real mode (r_amp below kRealTolerance) only the real carrier is set.
struct ModeCarriers {
  static constexpr double kRealTolerance = 1e-10;

  double phase_offset = 0.0;
  double t_amp = 1.0;
  double r_amp = 0.0;
  std::vector<double> real_carrier;
  std::vector<double> imag_carrier;  // empty for a real mode

  bool is_complex() const noexcept { return !imag_carrier.empty(); }
};

inline ModeCarriers split_carriers(const TemporalMode& f) {
  const std::size_t n = f.size();
  double aa = 0.0, bb = 0.0, ab = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = f[k].real(), b = f[k].imag();
    aa += a * a;
    bb += b * b;
    ab += a * b;
  }
  // Rotation that makes Re and Im orthogonal with |Re| >= |Im|.
  const double two_phi = std::atan2(-2.0 * ab, aa - bb);
  const double phi = 0.5 * two_phi;
  const double c = std::cos(phi), s = std::sin(phi);
  std::vector<double> ra(n), rb(n);
  double na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = f[k].real(), b = f[k].imag();
    ra[k] = a * c - b * s;
    rb[k] = a * s + b * c;
    na += ra[k] * ra[k];
    nb += rb[k] * rb[k];
  }
  ModeCarriers out;
  out.phase_offset = phi;
  out.t_amp = std::sqrt(na);
  out.r_amp = std::sqrt(nb);
  for (auto& v : ra) v /= out.t_amp;
  out.real_carrier = std::move(ra);
  if (out.r_amp > ModeCarriers::kRealTolerance) {
    for (auto& v : rb) v /= out.r_amp;
    out.imag_carrier = std::move(rb);
  } else {
    out.t_amp = 1.0;
    out.r_amp = 0.0;
  }
  return out;
}

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

/// Two passes of modified Gram-Schmidt against `accepted`; returns the
/// residual norm before renormalization.
inline double orthogonalize(std::vector<double>& v, const std::vector<std::vector<double>>& accepted) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& q : accepted) {
      const double p = dot(q, v);
      for (std::size_t k = 0; k < v.size(); ++k) v[k] -= p * q[k];
    }
  const double norm = std::sqrt(dot(v, v));
  if (norm > 0.0)
    for (auto& x : v) x /= norm;
  return norm;
}

}  // namespace detail

/// Residual norm below which a completion candidate is rejected and redrawn.
inline constexpr double kCompletionRejectNorm = 1e-8;
inline constexpr std::uint64_t kDefaultBasisSeed = 0x5eed0001ULL;

/// Orthonormal real basis of n_total vectors whose leading members span
/// `leading` (in order, linearly dependent members dropped), completed with
/// re-orthogonalized random directions.
inline std::vector<std::vector<double>> orthonormal_completion(
    const std::vector<std::vector<double>>& leading, std::size_t n_samp, std::size_t n_total,
    std::uint64_t seed = kDefaultBasisSeed) {
  if (n_total > n_samp) throw DimensionError("basis size exceeds the number of samples");
  std::vector<std::vector<double>> accepted;
  accepted.reserve(n_total);
  for (const auto& v0 : leading) {
    if (v0.size() != n_samp) throw DimensionError("carrier length does not match grid");
    if (accepted.size() == n_total) throw DimensionError("basis too small for the requested carriers");
    std::vector<double> v = v0;
    const double in_norm = std::sqrt(detail::dot(v0, v0));
    if (in_norm == 0.0) continue;
    if (detail::orthogonalize(v, accepted) > kCompletionRejectNorm * in_norm) accepted.push_back(std::move(v));
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  while (accepted.size() < n_total) {
    std::vector<double> v(n_samp);
    for (auto& x : v) x = normal(rng);
    const double in_norm = std::sqrt(detail::dot(v, v));
    if (detail::orthogonalize(v, accepted) > kCompletionRejectNorm * in_norm) accepted.push_back(std::move(v));
  }
  return accepted;
}

/// Orthonormal basis of n_total real modes whose first member (real f) or
/// first two members (complex f, split into its orthogonal carriers) span f.
inline ModeBasis extend_basis(const TemporalMode& f, std::size_t n_total,
                              std::uint64_t seed = kDefaultBasisSeed) {
  const auto& grid = f.grid();
  if (n_total > grid.n_samp()) throw DimensionError("basis size exceeds the number of samples");
  const ModeCarriers car = split_carriers(f);
  std::vector<std::vector<double>> leading{car.real_carrier};
  if (car.is_complex()) {
    if (n_total < 2) throw DimensionError("a complex mode needs two real carrier modes (n_total >= 2)");
    leading.push_back(car.imag_carrier);
  }
  if (n_total < 1) throw DimensionError("basis must contain the mode");
  auto vecs = orthonormal_completion(leading, grid.n_samp(), n_total, seed);
  std::vector<TemporalMode> modes;
  modes.reserve(vecs.size());
  for (const auto& v : vecs) modes.push_back(normalize(std::span<const double>(v), grid));
  return ModeBasis(grid, std::move(modes));
}

}  // namespace tmr
