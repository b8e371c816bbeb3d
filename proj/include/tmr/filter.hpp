#pragma once

// Linear-phase FIR high/low/band-pass filters (Hamming-windowed sinc).

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "tmr/error.hpp"

namespace tmr {

struct FilterSpec {
  std::optional<double> highpass_hz;
  std::optional<double> lowpass_hz;
  std::size_t taps = 101;  ///< per stage; odd
  /// Samples synthesized on each side and discarded after filtering.
  /// Zero selects the minimum, three filter lengths.
  std::size_t guard = 0;
};

class FirFilter {
 public:
  FirFilter(const FilterSpec& spec, double dt) {
    const double nyquist = 0.5 / dt;
    if (spec.taps < 3 || spec.taps % 2 == 0) throw InvalidArgument("filter taps must be odd and >= 3");
    if (!spec.highpass_hz && !spec.lowpass_hz) throw InvalidArgument("filter needs a high- or low-pass cutoff");
    auto check = [&](double f, const char* what) {
      if (!(f > 0.0 && f < nyquist))
        throw InvalidArgument(std::string(what) + " cutoff must lie in (0, Nyquist)");
    };
    if (spec.highpass_hz) check(*spec.highpass_hz, "high-pass");
    if (spec.lowpass_hz) check(*spec.lowpass_hz, "low-pass");
    if (spec.highpass_hz && spec.lowpass_hz && !(*spec.highpass_hz < *spec.lowpass_hz))
      throw InvalidArgument("high-pass cutoff must be below the low-pass cutoff");

    std::vector<double> h{1.0};
    if (spec.lowpass_hz) h = convolve(h, lowpass(*spec.lowpass_hz * dt, spec.taps));
    if (spec.highpass_hz) {
      auto hp = lowpass(*spec.highpass_hz * dt, spec.taps);
      for (auto& v : hp) v = -v;
      hp[spec.taps / 2] += 1.0;  // spectral inversion
      h = convolve(h, hp);
    }
    taps_ = std::move(h);
    guard_ = std::max(spec.guard, 3 * taps_.size());
  }

  std::span<const double> taps() const noexcept { return taps_; }
  std::size_t guard() const noexcept { return guard_; }

  /// Zero-phase ("same" length, centered) convolution of x into y.
  void apply(std::span<const double> x, std::span<double> y) const {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
    const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(taps_.size());
    const std::ptrdiff_t half = m / 2;
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::ptrdiff_t k = 0; k < m; ++k) {
        const std::ptrdiff_t j = i + half - k;
        if (j >= 0 && j < n) acc += taps_[k] * x[j];
      }
      y[i] = acc;
    }
  }

  /// |H(f)| at frequency f (Hz) for sample spacing dt.
  double gain(double f_hz, double dt) const {
    std::complex<double> acc{0.0, 0.0};
    const double w = 2.0 * std::numbers::pi * f_hz * dt;
    for (std::size_t k = 0; k < taps_.size(); ++k) acc += taps_[k] * std::polar(1.0, -w * static_cast<double>(k));
    return std::abs(acc);
  }

 private:
  static std::vector<double> lowpass(double fc, std::size_t taps) {
    std::vector<double> h(taps);
    const double mid = static_cast<double>(taps / 2);
    double sum = 0.0;
    for (std::size_t k = 0; k < taps; ++k) {
      const double u = static_cast<double>(k) - mid;
      const double sinc = u == 0.0 ? 2.0 * fc : std::sin(2.0 * std::numbers::pi * fc * u) / (std::numbers::pi * u);
      const double win = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(taps - 1));
      h[k] = sinc * win;
      sum += h[k];
    }
    for (auto& v : h) v /= sum;  // unit DC gain
    return h;
  }

  static std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
  }

  std::vector<double> taps_;
  std::size_t guard_ = 0;
};

}  // namespace tmr
