#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>

#include "tmr/kernel.hpp"

namespace tmr {

/// Photon number of a kernel eigenvalue, kappa = 2n + 1.
constexpr double photon_number(double kappa) noexcept { return 0.5 * (kappa - 1.0); }

/// Eigenpairs in descending eigenvalue order. Each eigenvector's entry of
/// largest magnitude is positive (ties: earliest index).
class EigenSpectrum {
 public:
  EigenSpectrum(TimeGrid grid, std::vector<double> eigenvalues, Eigen::MatrixXd eigenvectors)
      : grid_(grid), eigenvalues_(std::move(eigenvalues)), vectors_(std::move(eigenvectors)) {
    const auto n = static_cast<Eigen::Index>(grid_.n_samp());
    if (vectors_.rows() != n || vectors_.cols() != static_cast<Eigen::Index>(eigenvalues_.size()))
      throw DimensionError("eigenvector matrix does not match spectrum");
    if (!std::is_sorted(eigenvalues_.begin(), eigenvalues_.end(), std::greater<>()))
      throw InvalidArgument("eigenvalues must be sorted in descending order");
    photons_.resize(eigenvalues_.size());
    for (std::size_t i = 0; i < eigenvalues_.size(); ++i) photons_[i] = photon_number(eigenvalues_[i]);
  }

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return eigenvalues_.size(); }
  const std::vector<double>& eigenvalues() const noexcept { return eigenvalues_; }
  const std::vector<double>& photon_numbers() const noexcept { return photons_; }
  const Eigen::MatrixXd& eigenvectors() const noexcept { return vectors_; }

  std::vector<double> eigenvector(std::size_t i) const {
    std::vector<double> v(grid_.n_samp());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = vectors_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i));
    return v;
  }
  TemporalMode eigenmode(std::size_t i) const {
    const auto v = eigenvector(i);
    return normalize(std::span<const double>(v), grid_);
  }

  double max_abs_photon_number() const {
    double m = 0.0;
    for (double n : photons_) m = std::max(m, std::abs(n));
    return m;
  }

 private:
  TimeGrid grid_;
  std::vector<double> eigenvalues_;
  std::vector<double> photons_;
  Eigen::MatrixXd vectors_;
};

inline EigenSpectrum eigendecompose(const Kernel& kernel) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(kernel.matrix());
  if (solver.info() != Eigen::Success)
    throw SolverError("symmetric eigensolver did not converge");
  const auto n = kernel.matrix().rows();
  const auto& vals = solver.eigenvalues();  // ascending
  const auto& vecs = solver.eigenvectors();
  const double scale = std::max(1.0, vals.cwiseAbs().maxCoeff());
  if (vals(0) < -1e-9 * scale) throw SolverError("kernel is not positive semidefinite");
  std::vector<double> desc(static_cast<std::size_t>(n));
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index src = n - 1 - i;
    desc[static_cast<std::size_t>(i)] = vals(src);
    Eigen::VectorXd v = vecs.col(src);
    Eigen::Index arg = 0;
    for (Eigen::Index k = 1; k < n; ++k)
      if (std::abs(v(k)) > std::abs(v(arg))) arg = k;
    if (v(arg) < 0.0) v = -v;
    out.col(i) = v;
  }
  return EigenSpectrum(kernel.grid(), std::move(desc), std::move(out));
}

struct EffectiveModeCount {
  double estimate = 0.0;          ///< N_wf * (max_i n_i)^2
  double max_deviation = 0.0;     ///< max_i n_i
  std::size_t count_above_half = 0;  ///< eigenvalues with n_i > max_deviation / 2
  double count_based_estimate = 0.0;  ///< count_above_half / kSemicircleTail
};

/// Fraction of a semicircle law lying above half its edge:
/// 1/2 - (asin(1/2) + (1/2)sqrt(3/4)) / pi.
inline constexpr double kSemicircleTail = 0.5 - (std::numbers::pi / 6.0 + 0.4330127018922193) / std::numbers::pi;

/// Inverts the vacuum fluctuation law max n_i ~ sqrt(N_mode / N_wf) on a
/// spectrum measured with vacuum input.
inline EffectiveModeCount estimate_effective_mode_count(const EigenSpectrum& vacuum, std::size_t n_wf,
                                                        double contamination_z = 3.0) {
  if (n_wf < 2) throw InvalidArgument("need at least 2 waveforms");
  const auto& n = vacuum.photon_numbers();
  const double max_dev = *std::max_element(n.begin(), n.end());
  const double band = std::sqrt(static_cast<double>(vacuum.grid().n_samp()) / static_cast<double>(n_wf));
  if (max_dev > contamination_z * band)
    throw ContaminationError("vacuum spectrum has n = " + std::to_string(max_dev) +
                             ", far above the statistical band " + std::to_string(band) +
                             "; input was not vacuum");
  EffectiveModeCount out;
  out.max_deviation = max_dev;
  out.estimate = static_cast<double>(n_wf) * max_dev * max_dev;
  for (double x : n)
    if (x > 0.5 * max_dev) ++out.count_above_half;
  out.count_based_estimate = static_cast<double>(out.count_above_half) / kSemicircleTail;
  return out;
}

}  // namespace tmr
