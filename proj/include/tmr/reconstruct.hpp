#pragma once

// Mode reconstruction from a kernel spectrum.
//
// For a pure single mode f with n photons the kernel is
//   K = I + 2n Re[f f^dagger] = I + 2 n1 f1 f1^T + 2 n2 f2 f2^T,
// where f1, f2 are the normalized real and imaginary carriers of f (after a
// global phase making them orthogonal) and n1 + n2 = n. Hence
//   f = (sqrt(n1) f1 + i sqrt(n2) f2) / sqrt(n1 + n2)
// up to a global phase and complex conjugation: a single LO frequency cannot
// tell which eigenvector is the real part, so both conjugate candidates are
// always reported.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tmr/kernel.hpp"
#include "tmr/spectrum.hpp"

namespace tmr {

enum class PurityCase { real_single_mode, complex_or_two_mode, multimode };

inline const char* to_string(PurityCase c) {
  switch (c) {
    case PurityCase::real_single_mode: return "real_single_mode";
    case PurityCase::complex_or_two_mode: return "complex_or_two_mode";
    case PurityCase::multimode: return "multimode";
  }
  return "?";
}

inline PurityCase purity_case_from_string(const std::string& s) {
  if (s == "real_single_mode") return PurityCase::real_single_mode;
  if (s == "complex_or_two_mode") return PurityCase::complex_or_two_mode;
  if (s == "multimode") return PurityCase::multimode;
  throw FormatError("unknown verdict \"" + s + "\"");
}

struct PurityVerdict {
  PurityCase kind = PurityCase::real_single_mode;
  std::size_t above_vacuum_count = 0;
  double threshold = 0.0;

  /// Nothing rose above the vacuum band; reported as real_single_mode.
  bool vacuum_only() const noexcept { return above_vacuum_count == 0; }
};

/// Statistical spread of vacuum photon numbers, sqrt(N_mode / N_wf).
inline double vacuum_band(std::size_t n_wf, double n_mode_eff) {
  if (n_wf < 1 || !(n_mode_eff > 0.0)) throw InvalidArgument("vacuum band needs n_wf >= 1 and n_mode > 0");
  return std::sqrt(n_mode_eff / static_cast<double>(n_wf));
}

inline PurityVerdict classify_with_threshold(const EigenSpectrum& spectrum, double threshold) {
  PurityVerdict v;
  v.threshold = threshold;
  for (double n : spectrum.photon_numbers())
    if (n > threshold) ++v.above_vacuum_count;
  v.kind = v.above_vacuum_count <= 1   ? PurityCase::real_single_mode
           : v.above_vacuum_count == 2 ? PurityCase::complex_or_two_mode
                                       : PurityCase::multimode;
  return v;
}

/// Counts modes with n_i > z sqrt(N_mode_eff / N_wf).
inline PurityVerdict classify_spectrum(const EigenSpectrum& spectrum, std::size_t n_wf, double n_mode_eff,
                                       double z = 3.0) {
  if (!(z > 0.0)) throw InvalidArgument("threshold multiplier z must be positive");
  return classify_with_threshold(spectrum, z * vacuum_band(n_wf, n_mode_eff));
}

struct FidelityRecord {
  double best = 0.0;
  double plus = 0.0;
  double minus = 0.0;
  bool subspace_optimal = false;  ///< scored over rotations within a degenerate eigenplane
};

struct ReconstructionResult {
  TemporalMode candidate_plus;
  TemporalMode candidate_minus;  ///< complex conjugate of candidate_plus
  double n1 = 0.0;
  double n2 = 0.0;
  double n_total = 0.0;
  std::size_t modes_used = 1;
  std::size_t above_vacuum_count = 0;
  double threshold_used = 0.0;
  PurityCase verdict = PurityCase::real_single_mode;
  bool degenerate = false;  ///< |n1 - n2| within the threshold
  std::vector<double> f1, f2;
  std::optional<FidelityRecord> fidelity;
  std::optional<bool> verified;  ///< unset: single-mode assumption not checked
};

/// Builds the reconstruction from the top `modes_used` (1 or 2) eigenpairs.
inline ReconstructionResult reconstruct_from_pairs(const EigenSpectrum& spectrum, std::size_t modes_used,
                                                   double threshold) {
  if (modes_used != 1 && modes_used != 2) throw InvalidArgument("reconstruction uses one or two eigenmodes");
  if (spectrum.size() < modes_used) throw DimensionError("spectrum too small");
  const auto& n = spectrum.photon_numbers();
  for (std::size_t i = 0; i < modes_used; ++i)
    if (n[i] < 0.0)
      throw StatisticalFloorError("estimated photon number n" + std::to_string(i + 1) + " = " + std::to_string(n[i]) +
                                  " is negative; the data cannot resolve this mode, use more waveforms");
  const auto& grid = spectrum.grid();
  auto v1 = spectrum.eigenvector(0);
  std::vector<cplx> plus(v1.begin(), v1.end());
  std::vector<double> v2;
  double n1 = n[0], n2 = 0.0;
  if (modes_used == 2) {
    v2 = spectrum.eigenvector(1);
    n2 = n[1];
    const double total = n1 + n2;
    if (!(total > 0.0)) throw StatisticalFloorError("no photons in the two leading eigenmodes");
    const double a = std::sqrt(n1 / total), b = std::sqrt(n2 / total);
    for (std::size_t k = 0; k < plus.size(); ++k) plus[k] = cplx(a * v1[k], b * v2[k]);
  }
  auto cand_plus = normalize(std::span<const cplx>(plus), grid);
  ReconstructionResult r{cand_plus, cand_plus.conjugate()};
  r.n1 = n1;
  r.n2 = n2;
  r.n_total = n1 + n2;
  r.modes_used = modes_used;
  r.threshold_used = threshold;
  r.degenerate = modes_used == 2 && std::abs(n1 - n2) <= threshold;
  r.f1 = std::move(v1);
  r.f2 = std::move(v2);
  return r;
}

/// Reconstruction per the verdict: one eigenmode for a real single mode,
/// two for the complex case. A vacuum-only verdict still returns the top
/// eigenmode, flagged by above_vacuum_count == 0.
inline ReconstructionResult reconstruct_mode(const EigenSpectrum& spectrum, const PurityVerdict& verdict) {
  if (verdict.kind == PurityCase::multimode)
    throw UnsupportedMultimodeError(std::to_string(verdict.above_vacuum_count) +
                                    " modes above vacuum; only one or two can be reconstructed");
  const std::size_t used = verdict.kind == PurityCase::complex_or_two_mode ? 2 : 1;
  auto r = reconstruct_from_pairs(spectrum, used, verdict.threshold);
  r.above_vacuum_count = verdict.above_vacuum_count;
  r.verdict = verdict.kind;
  return r;
}

namespace detail {

inline cplx project(const TemporalMode& target, const std::vector<double>& v) {
  cplx acc{0.0, 0.0};
  for (std::size_t k = 0; k < v.size(); ++k) acc += std::conj(target[k]) * v[k];
  return acc;
}

/// max over in-plane rotations psi of |<T, f(psi)>|^2 with
/// f(psi) = (a (c v1 + s v2) + i b (-s v1 + c v2)) / sqrt(a^2 + b^2).
inline double best_in_plane(cplx p, cplx q, double a, double b) {
  const cplx i1{0.0, 1.0};
  const cplx x = a * p + i1 * b * q;
  const cplx y = a * q - i1 * b * p;
  const double xx = std::norm(x), yy = std::norm(y);
  const double xy = (std::conj(x) * y).real();
  const double best = 0.5 * (xx + yy) + std::sqrt(0.25 * (xx - yy) * (xx - yy) + xy * xy);
  return best / (a * a + b * b);
}

}  // namespace detail

/// Fidelities of both conjugate candidates against a target. Under
/// eigenvalue degeneracy the eigenvectors are only defined up to a rotation
/// in their plane, and the best such rotation is scored.
inline FidelityRecord score_against(const ReconstructionResult& r, const TemporalMode& target) {
  require_same_grid(target.grid(), r.candidate_plus.grid(), "fidelity");
  FidelityRecord out;
  out.plus = fidelity(target, r.candidate_plus);
  out.minus = fidelity(target, r.candidate_minus);
  if (r.modes_used == 2 && r.degenerate) {
    const cplx p = detail::project(target, r.f1), q = detail::project(target, r.f2);
    const double a = std::sqrt(std::max(r.n1, 0.0)), b = std::sqrt(std::max(r.n2, 0.0));
    out.plus = std::max(out.plus, detail::best_in_plane(p, q, a, b));
    out.minus = std::max(out.minus, detail::best_in_plane(p, q, a, -b));
    out.subspace_optimal = true;
  }
  out.plus = std::min(out.plus, 1.0);
  out.minus = std::min(out.minus, 1.0);
  out.best = std::max(out.plus, out.minus);
  return out;
}

inline void attach_fidelity(ReconstructionResult& r, const TemporalMode& target) { r.fidelity = score_against(r, target); }

/// Multiplies f by exp(-i arg(reference)) sample by sample, the effect of
/// driving the LO with the reconstructed phase.
inline TemporalMode compensate_phase(const TemporalMode& f, const TemporalMode& reference) {
  require_same_grid(f.grid(), reference.grid(), "phase compensation");
  std::vector<cplx> out(f.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const cplx c = reference[k];
    const double mag = std::abs(c);
    out[k] = mag > 0.0 ? f[k] * std::conj(c) / mag : f[k];
  }
  return normalize(std::span<const cplx>(out), f.grid());
}

struct VerifyOptions {
  double n_mode_eff = 0.0;  ///< 0: use the source's n_mode
  double z = 3.0;
  unsigned threads = default_threads();
};

struct Verification {
  PurityVerdict verdict;
  std::string compensation;  ///< "plus", "minus", "none" or "data"
  std::vector<PurityVerdict> attempts;

  bool single_mode_confirmed() const noexcept {
    return verdict.kind == PurityCase::real_single_mode && verdict.above_vacuum_count == 1;
  }
};

/// Re-simulates the source with the LO phase compensated by the
/// reconstructed phase and reclassifies. A pure single mode becomes real and
/// shows one eigenvalue above the band; a mixture or two-mode state keeps
/// two. The conjugate candidate is tried when the first does not make the
/// mode real, since only one of them carries the right sign of the phase.
inline Verification verify_single_mode(const SimulationConfig& source, const ReconstructionResult& result,
                                       const VerifyOptions& opt = {}) {
  const double n_mode_eff = opt.n_mode_eff > 0.0 ? opt.n_mode_eff : static_cast<double>(source.n_mode);
  auto rerun = [&](const TemporalMode* reference, std::uint64_t salt) {
    SimulationConfig cfg = source;
    cfg.seed = derive_seed(source.seed, 0x7e41f1ULL, salt);
    if (reference && cfg.state.kind != StateKind::vacuum) {
      cfg.state.mode = compensate_phase(*cfg.state.mode, *reference);
      if (cfg.state.second_mode) cfg.state.second_mode = compensate_phase(*cfg.state.second_mode, *reference);
    }
    const auto spec = eigendecompose(kernel_from_simulation(cfg, opt.threads));
    return classify_spectrum(spec, cfg.n_wf, n_mode_eff, opt.z);
  };
  Verification out;
  if (source.state.kind == StateKind::vacuum) {
    out.verdict = rerun(nullptr, 0);
    out.compensation = "none";
    out.attempts.push_back(out.verdict);
    return out;
  }
  out.attempts.push_back(rerun(&result.candidate_plus, 1));
  out.verdict = out.attempts.back();
  out.compensation = "plus";
  const bool plus_ok = out.verdict.kind == PurityCase::real_single_mode && out.verdict.above_vacuum_count == 1;
  if (!plus_ok && result.modes_used == 2) {
    out.attempts.push_back(rerun(&result.candidate_minus, 2));
    const auto& alt = out.attempts.back();
    if (alt.above_vacuum_count >= 1 && alt.above_vacuum_count < out.verdict.above_vacuum_count) {
      out.verdict = alt;
      out.compensation = "minus";
    }
  }
  return out;
}

/// Recorded-data path: `compensated` was acquired with the LO phase already
/// compensated.
inline Verification verify_single_mode(const WaveformBatch& compensated, const VerifyOptions& opt) {
  if (!(opt.n_mode_eff > 0.0)) throw InvalidArgument("recorded verification needs the effective mode count");
  KernelOptions ko;
  ko.threads = opt.threads;
  const auto spec = eigendecompose(estimate_kernel(compensated, ko));
  Verification out;
  out.verdict = classify_spectrum(spec, compensated.n_wf(), opt.n_mode_eff, opt.z);
  out.compensation = "data";
  out.attempts.push_back(out.verdict);
  return out;
}

}  // namespace tmr
