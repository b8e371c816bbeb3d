#pragma once

// Empirical autocorrelation kernel K_ij = (1/N_wf) sum_w x_w(t_i) x_w(t_j) / sigma0^2.
//
// Waveforms are reduced in blocks of kChunkRows; block Gram matrices are
// combined by a pairwise tree whose shape depends only on the block index,
// so the result is bit-identical for any thread count and identical between
// a materialized batch and on-the-fly synthesis.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tmr/error.hpp"
#include "tmr/mode.hpp"
#include "tmr/parallel.hpp"
#include "tmr/simulate.hpp"

namespace tmr {

class Kernel {
 public:
  Kernel(TimeGrid grid, Eigen::MatrixXd matrix, std::size_t n_wf_used)
      : grid_(grid), matrix_(std::move(matrix)), n_wf_used_(n_wf_used) {
    const auto n = static_cast<Eigen::Index>(grid_.n_samp());
    if (matrix_.rows() != n || matrix_.cols() != n) throw DimensionError("kernel size does not match grid");
    if (!matrix_.allFinite()) throw FormatError("kernel has non-finite entries");
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < i; ++j)
        if (matrix_(i, j) != matrix_(j, i)) throw InvalidArgument("kernel must be exactly symmetric");
  }

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t n_samp() const noexcept { return grid_.n_samp(); }
  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  std::size_t n_wf_used() const noexcept { return n_wf_used_; }
  double trace() const { return matrix_.trace(); }

  /// Quadratic form v^T K v for a real vector.
  double quadratic(std::span<const double> v) const {
    Eigen::Map<const Eigen::VectorXd> x(v.data(), static_cast<Eigen::Index>(v.size()));
    return x.dot(matrix_ * x);
  }

 private:
  TimeGrid grid_;
  Eigen::MatrixXd matrix_;
  std::size_t n_wf_used_;
};

struct KernelOptions {
  bool subtract_mean = false;
  unsigned threads = default_threads();
};

namespace detail {

/// Binary-counter pairwise summation over an index-ordered stream of terms.
class PairwiseSum {
 public:
  void push(Eigen::MatrixXd term) {
    std::size_t level = 0;
    while (!stack_.empty() && stack_.back().first == level) {
      term = stack_.back().second + term;
      stack_.pop_back();
      ++level;
    }
    stack_.emplace_back(level, std::move(term));
  }

  Eigen::MatrixXd finish() {
    if (stack_.empty()) throw InvalidArgument("empty sum");
    Eigen::MatrixXd acc = std::move(stack_.back().second);
    stack_.pop_back();
    while (!stack_.empty()) {
      acc = stack_.back().second + acc;
      stack_.pop_back();
    }
    return acc;
  }

 private:
  std::vector<std::pair<std::size_t, Eigen::MatrixXd>> stack_;
};

/// Sum over all waveforms of x x^T, with `fill(first, block)` producing the
/// rows of block starting at waveform `first`.
inline Eigen::MatrixXd accumulate_gram(std::size_t n_wf, std::size_t n_samp,
                                       const std::function<void(std::size_t, Eigen::Ref<RowMatrix>)>& fill,
                                       unsigned threads) {
  if (n_wf == 0) throw InvalidArgument("no waveforms to accumulate");
  const std::size_t n_chunks = chunk_count(n_wf);
  const std::size_t window = std::max<std::size_t>(16, 4 * std::max(1u, threads));
  const auto ns = static_cast<Eigen::Index>(n_samp);
  PairwiseSum sum;
  std::vector<Eigen::MatrixXd> partial;
  for (std::size_t base = 0; base < n_chunks; base += window) {
    const std::size_t count = std::min(window, n_chunks - base);
    partial.assign(count, Eigen::MatrixXd());
    parallel_for(count, threads, [&](std::size_t i) {
      const std::size_t first = (base + i) * kChunkRows;
      const std::size_t rows = std::min(kChunkRows, n_wf - first);
      RowMatrix block(static_cast<Eigen::Index>(rows), ns);
      fill(first, block);
      Eigen::MatrixXd g = Eigen::MatrixXd::Zero(ns, ns);
      g.selfadjointView<Eigen::Lower>().rankUpdate(block.transpose());
      partial[i] = std::move(g);
    });
    for (auto& p : partial) sum.push(std::move(p));
  }
  Eigen::MatrixXd lower = sum.finish();
  Eigen::MatrixXd full = lower.selfadjointView<Eigen::Lower>();
  return full;
}

inline Kernel finish_kernel(const TimeGrid& grid, Eigen::MatrixXd gram, std::size_t n_wf, double sigma0_sq) {
  if (!gram.allFinite()) throw FormatError("non-finite kernel accumulation");
  gram /= static_cast<double>(n_wf) * sigma0_sq;
  return Kernel(grid, std::move(gram), n_wf);
}

}  // namespace detail

inline Kernel estimate_kernel(const WaveformBatch& batch, const KernelOptions& opt = {}) {
  if (batch.n_wf() < 1) throw InvalidArgument("empty batch");
  const std::size_t n_samp = batch.n_samp();
  std::vector<double> mean(n_samp, 0.0);
  if (opt.subtract_mean) {
    for (std::size_t w = 0; w < batch.n_wf(); ++w) {
      const auto r = batch.row(w);
      for (std::size_t k = 0; k < n_samp; ++k) mean[k] += r[k];
    }
    for (auto& m : mean) m /= static_cast<double>(batch.n_wf());
  }
  auto fill = [&](std::size_t first, Eigen::Ref<RowMatrix> block) {
    for (Eigen::Index r = 0; r < block.rows(); ++r) {
      const auto src = batch.row(first + static_cast<std::size_t>(r));
      for (std::size_t k = 0; k < n_samp; ++k) block(r, static_cast<Eigen::Index>(k)) = src[k] - mean[k];
    }
  };
  auto gram = detail::accumulate_gram(batch.n_wf(), n_samp, fill, opt.threads);
  return detail::finish_kernel(batch.grid(), std::move(gram), batch.n_wf(), batch.sigma0_sq());
}

/// Kernel of the batch synthesize_batch(cfg) would produce, without
/// materializing it.
inline Kernel kernel_from_simulation(const SimulationConfig& cfg, unsigned threads = default_threads()) {
  const Synthesizer synth(cfg);
  auto fill = [&](std::size_t first, Eigen::Ref<RowMatrix> block) { synth.fill(first, block); };
  auto gram = detail::accumulate_gram(cfg.n_wf, cfg.grid.n_samp(), fill, threads);
  return detail::finish_kernel(cfg.grid, std::move(gram), cfg.n_wf, 1.0);
}

/// Exact model kernel I + sum_m 2 n_m Re[f_m f_m^dagger].
inline Kernel analytic_kernel(const std::vector<std::pair<TemporalMode, double>>& occupied, const TimeGrid& grid) {
  const auto n = static_cast<Eigen::Index>(grid.n_samp());
  Eigen::MatrixXd k = Eigen::MatrixXd::Identity(n, n);
  for (const auto& [f, photons] : occupied) {
    require_same_grid(grid, f.grid(), "analytic kernel");
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        const cplx a = f[static_cast<std::size_t>(i)], b = f[static_cast<std::size_t>(j)];
        k(i, j) += 2.0 * photons * (a.real() * b.real() + a.imag() * b.imag());
      }
  }
  return Kernel(grid, std::move(k), 0);
}

inline Kernel analytic_kernel(const TemporalMode& f, double n) { return analytic_kernel({{f, n}}, f.grid()); }

}  // namespace tmr
