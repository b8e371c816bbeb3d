#pragma once

// Synthetic homodyne waveforms. Each waveform is x(t_k) = sum_j x_j f_j(t_k)
// over a real orthonormal basis {f_j} whose leading members carry the
// occupied mode; every other basis mode holds vacuum. Waveform w draws all
// of its randomness from CounterStream(seed, w), so batches are identical
// however the work is split across threads.

#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "tmr/error.hpp"
#include "tmr/filter.hpp"
#include "tmr/mode.hpp"
#include "tmr/parallel.hpp"
#include "tmr/rng.hpp"
#include "tmr/samplers.hpp"

namespace tmr {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Waveforms are generated and reduced in blocks of this many rows. The block
/// size fixes the kernel summation tree, so it is part of the reproducibility
/// contract.
inline constexpr std::size_t kChunkRows = 4096;

enum class StateKind { vacuum, single_photon, coherent, photon_mixture };

inline const char* to_string(StateKind k) {
  switch (k) {
    case StateKind::vacuum: return "vacuum";
    case StateKind::single_photon: return "single_photon";
    case StateKind::coherent: return "coherent";
    case StateKind::photon_mixture: return "photon_mixture";
  }
  return "?";
}

inline StateKind state_kind_from_string(const std::string& s) {
  if (s == "vacuum") return StateKind::vacuum;
  if (s == "single_photon" || s == "single") return StateKind::single_photon;
  if (s == "coherent") return StateKind::coherent;
  if (s == "photon_mixture" || s == "mixture") return StateKind::photon_mixture;
  throw InvalidArgument("unknown state kind \"" + s + "\"");
}

/// State occupying a temporal mode.
///   single_photon:  mean_photons is the detection efficiency eta (<= 1)
///   coherent:       mean_photons is |alpha|^2 after losses
///   photon_mixture: one photon (efficiency eta = mean_photons) found in
///                   `mode` with probability mixture_weight, else in
///                   `second_mode`; the two modes must be orthogonal
struct StateSpec {
  StateKind kind = StateKind::vacuum;
  double mean_photons = 0.0;
  std::optional<TemporalMode> mode;
  std::optional<TemporalMode> second_mode;
  double mixture_weight = 0.5;

  static StateSpec vacuum() { return {}; }
  static StateSpec single_photon(TemporalMode m, double eta) {
    return {StateKind::single_photon, eta, std::move(m), std::nullopt, 1.0};
  }
  static StateSpec coherent(TemporalMode m, double n) {
    return {StateKind::coherent, n, std::move(m), std::nullopt, 1.0};
  }
  static StateSpec photon_mixture(TemporalMode a, TemporalMode b, double eta, double weight_a) {
    return {StateKind::photon_mixture, eta, std::move(a), std::move(b), weight_a};
  }

  void validate(const TimeGrid& grid) const {
    if (!(mean_photons >= 0.0) || !std::isfinite(mean_photons))
      throw InvalidArgument("mean photon number must be finite and >= 0");
    if (kind == StateKind::vacuum) return;
    if (!mode) throw InvalidArgument(std::string(to_string(kind)) + " state needs a mode");
    require_same_grid(grid, mode->grid(), "state mode");
    if ((kind == StateKind::single_photon || kind == StateKind::photon_mixture) && mean_photons > 1.0)
      throw InvalidArgument("single-photon efficiency must be <= 1");
    if (kind == StateKind::photon_mixture) {
      if (!second_mode) throw InvalidArgument("photon mixture needs a second mode");
      require_same_grid(grid, second_mode->grid(), "state second mode");
      if (!(mixture_weight >= 0.0 && mixture_weight <= 1.0))
        throw InvalidArgument("mixture weight must lie in [0, 1]");
      if (std::abs(overlap(*mode, *second_mode)) > 1e-9)
        throw InvalidArgument("mixture modes must be orthogonal");
    }
  }
};

struct SimulationConfig {
  StateSpec state;
  TimeGrid grid;
  std::size_t n_wf = 1;
  std::size_t n_mode = 0;  ///< synthesized basis modes; must be <= n_samp
  std::uint64_t seed = 0;
  std::optional<FilterSpec> filter;

  void validate() const {
    if (n_wf < 1) throw InvalidArgument("n_wf must be >= 1");
    if (n_mode < 1 || n_mode > grid.n_samp()) throw DimensionError("n_mode must lie in [1, n_samp]");
    state.validate(grid);
  }
};

struct IngestRecord {
  std::string path;
  std::string format;
};

using Provenance = std::variant<std::monostate, SimulationConfig, IngestRecord>;

/// n_wf quadrature waveforms of n_samp samples, row-major (waveform-major).
/// sigma0_sq is the vacuum variance of the stored samples (1 for simulated
/// data; the calibration value for ingested raw data).
class WaveformBatch {
 public:
  WaveformBatch(TimeGrid grid, std::size_t n_wf, std::vector<double> data, Provenance provenance = {},
                double sigma0_sq = 1.0)
      : grid_(grid), n_wf_(n_wf), data_(std::move(data)), provenance_(std::move(provenance)), sigma0_sq_(sigma0_sq) {
    if (data_.size() != n_wf_ * grid_.n_samp())
      throw DimensionError("batch payload does not match n_wf x n_samp");
    if (!(sigma0_sq_ > 0.0) || !std::isfinite(sigma0_sq_))
      throw InvalidArgument("vacuum variance must be positive");
    for (double v : data_)
      if (!std::isfinite(v)) throw FormatError("batch contains non-finite samples");
  }

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t n_wf() const noexcept { return n_wf_; }
  std::size_t n_samp() const noexcept { return grid_.n_samp(); }
  std::span<const double> data() const noexcept { return data_; }
  std::span<const double> row(std::size_t w) const {
    return std::span<const double>(data_).subspan(w * n_samp(), n_samp());
  }
  double sigma0_sq() const noexcept { return sigma0_sq_; }
  const Provenance& provenance() const noexcept { return provenance_; }

  void set_sigma0_sq(double s) {
    if (!(s > 0.0) || !std::isfinite(s)) throw InvalidArgument("vacuum variance must be positive");
    sigma0_sq_ = s;
  }

 private:
  TimeGrid grid_;
  std::size_t n_wf_;
  std::vector<double> data_;
  Provenance provenance_;
  double sigma0_sq_;
};

/// Precomputed synthesis plan for one configuration; fills any block of
/// waveforms independently.
class Synthesizer {
 public:
  explicit Synthesizer(const SimulationConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    const std::size_t n_samp = cfg_.grid.n_samp();
    if (cfg_.filter) {
      filter_.emplace(*cfg_.filter, cfg_.grid.dt());
      guard_ = filter_->guard();
    }
    n_ext_ = n_samp + 2 * guard_;
    n_mode_ext_ = cfg_.n_mode == n_samp
                      ? n_ext_
                      : std::min(n_ext_, (cfg_.n_mode * n_ext_ + n_samp - 1) / n_samp);

    const auto& st = cfg_.state;
    std::vector<std::vector<double>> leading;
    std::optional<ModeCarriers> car_a, car_b;
    if (st.kind != StateKind::vacuum) {
      car_a = split_carriers(*st.mode);
      leading.push_back(embed(car_a->real_carrier));
      if (car_a->is_complex()) leading.push_back(embed(car_a->imag_carrier));
    }
    if (st.kind == StateKind::photon_mixture) {
      car_b = split_carriers(*st.second_mode);
      leading.push_back(embed(car_b->real_carrier));
      if (car_b->is_complex()) leading.push_back(embed(car_b->imag_carrier));
    }
    if (leading.size() > n_mode_ext_)
      throw DimensionError("n_mode is too small for the occupied carriers (a complex mode needs 2)");
    const auto vecs = orthonormal_completion(leading, n_ext_, n_mode_ext_, derive_seed(cfg_.seed, 0xba5e));
    basis_.resize(static_cast<Eigen::Index>(n_mode_ext_), static_cast<Eigen::Index>(n_ext_));
    for (std::size_t j = 0; j < vecs.size(); ++j)
      for (std::size_t k = 0; k < n_ext_; ++k) basis_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = vecs[j][k];

    if (car_a) branch_a_ = make_branch(*car_a, 0);
    if (car_b) branch_b_ = make_branch(*car_b, std::nullopt);
    if (st.kind == StateKind::coherent) {
      // alpha_j = alpha <f_j, f>, nonzero only on the carrier modes.
      const double alpha = std::sqrt(st.mean_photons);
      const std::size_t nc = car_a->is_complex() ? 2 : 1;
      coherent_amps_.resize(nc);
      for (std::size_t j = 0; j < nc; ++j) {
        cplx acc{0.0, 0.0};
        for (std::size_t k = 0; k < n_samp; ++k)
          acc += basis_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k + guard_)) * (*st.mode)[k];
        coherent_amps_[j] = alpha * acc;
      }
    }
  }

  const SimulationConfig& config() const noexcept { return cfg_; }
  std::size_t n_wf() const noexcept { return cfg_.n_wf; }
  std::size_t n_samp() const noexcept { return cfg_.grid.n_samp(); }
  std::size_t n_basis() const noexcept { return n_mode_ext_; }

  /// Basis row j restricted to the output window.
  std::vector<double> basis_row(std::size_t j) const {
    std::vector<double> out(n_samp());
    for (std::size_t k = 0; k < out.size(); ++k)
      out[k] = basis_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k + guard_));
    return out;
  }

  /// Writes waveforms [first, first + out.rows()) into `out` (rows x n_samp).
  void fill(std::size_t first, Eigen::Ref<RowMatrix> out) const {
    const auto count = out.rows();
    const auto nb = static_cast<Eigen::Index>(n_mode_ext_);
    RowMatrix coeffs(count, nb);
    for (Eigen::Index r = 0; r < count; ++r) draw_coefficients(first + static_cast<std::size_t>(r), coeffs.row(r));
    if (!filter_) {
      out.noalias() = coeffs * basis_;
      return;
    }
    RowMatrix ext = coeffs * basis_;
    std::vector<double> filtered(n_ext_);
    for (Eigen::Index r = 0; r < count; ++r) {
      filter_->apply(std::span<const double>(ext.row(r).data(), n_ext_), filtered);
      for (std::size_t k = 0; k < n_samp(); ++k) out(r, static_cast<Eigen::Index>(k)) = filtered[k + guard_];
    }
  }

 private:
  struct PhotonBranch {
    double t_amp = 1.0, r_amp = 0.0;
    // Either aligned with basis rows (index_r, index_i) or given by
    // coordinate vectors in coefficient space.
    bool aligned = false;
    std::size_t index_r = 0, index_i = 1;
    Eigen::VectorXd u, v;
    bool complex = false;
  };

  std::vector<double> embed(const std::vector<double>& v) const {
    std::vector<double> out(n_ext_, 0.0);
    std::copy(v.begin(), v.end(), out.begin() + static_cast<std::ptrdiff_t>(guard_));
    return out;
  }

  PhotonBranch make_branch(const ModeCarriers& car, std::optional<std::size_t> aligned_at) const {
    PhotonBranch b;
    b.t_amp = car.t_amp;
    b.r_amp = car.r_amp;
    b.complex = car.is_complex();
    if (aligned_at) {
      b.aligned = true;
      b.index_r = *aligned_at;
      b.index_i = *aligned_at + 1;
      return b;
    }
    auto coords = [&](const std::vector<double>& c) {
      const auto e = embed(c);
      Eigen::Map<const Eigen::VectorXd> ev(e.data(), static_cast<Eigen::Index>(e.size()));
      Eigen::VectorXd x = basis_ * ev;
      return Eigen::VectorXd(x / x.norm());
    };
    b.u = coords(car.real_carrier);
    if (b.complex) {
      b.v = coords(car.imag_carrier);
      b.v -= b.u.dot(b.v) * b.u;
      b.v.normalize();
    }
    return b;
  }

  template <class Row>
  void place_photon(const PhotonBranch& b, double eta, QuadratureSampler<CounterStream>& s, Row&& z) const {
    const auto [y_r, y_i] = s.photon_pair(b.t_amp, b.r_amp, eta);
    if (b.aligned) {
      z(static_cast<Eigen::Index>(b.index_r)) = y_r;
      if (b.complex) z(static_cast<Eigen::Index>(b.index_i)) = y_i;
      return;
    }
    const double pu = z.dot(b.u.transpose());
    z += (y_r - pu) * b.u.transpose();
    if (b.complex) {
      const double pv = z.dot(b.v.transpose());
      z += (y_i - pv) * b.v.transpose();
    }
  }

  template <class Row>
  void draw_coefficients(std::size_t w, Row&& z) const {
    QuadratureSampler<CounterStream> s(CounterStream(cfg_.seed, w));
    const auto& st = cfg_.state;
    double theta = 0.0;
    if (st.kind == StateKind::coherent) theta = s.phase();
    for (Eigen::Index j = 0; j < z.size(); ++j) z(j) = s.vacuum();
    switch (st.kind) {
      case StateKind::vacuum: break;
      case StateKind::single_photon: place_photon(*branch_a_, st.mean_photons, s, z); break;
      case StateKind::photon_mixture: {
        const bool in_a = s.uniform() < st.mixture_weight;
        place_photon(in_a ? *branch_a_ : *branch_b_, st.mean_photons, s, z);
        break;
      }
      case StateKind::coherent: {
        const cplx lo = std::polar(1.0, -theta);
        for (std::size_t j = 0; j < coherent_amps_.size(); ++j)
          z(static_cast<Eigen::Index>(j)) += 2.0 * (coherent_amps_[j] * lo).real();
        break;
      }
    }
  }

  SimulationConfig cfg_;
  std::optional<FirFilter> filter_;
  std::size_t guard_ = 0;
  std::size_t n_ext_ = 0;
  std::size_t n_mode_ext_ = 0;
  RowMatrix basis_;
  std::optional<PhotonBranch> branch_a_, branch_b_;
  std::vector<cplx> coherent_amps_;
};

inline std::size_t chunk_count(std::size_t n_wf) { return (n_wf + kChunkRows - 1) / kChunkRows; }

inline WaveformBatch synthesize_batch(const SimulationConfig& cfg, unsigned threads = default_threads()) {
  const Synthesizer synth(cfg);
  const std::size_t n_samp = cfg.grid.n_samp();
  std::vector<double> data(cfg.n_wf * n_samp);
  parallel_for(chunk_count(cfg.n_wf), threads, [&](std::size_t c) {
    const std::size_t first = c * kChunkRows;
    const std::size_t rows = std::min(kChunkRows, cfg.n_wf - first);
    Eigen::Map<RowMatrix> block(data.data() + first * n_samp, static_cast<Eigen::Index>(rows),
                                static_cast<Eigen::Index>(n_samp));
    synth.fill(first, block);
  });
  return WaveformBatch(cfg.grid, cfg.n_wf, std::move(data), cfg);
}

}  // namespace tmr
