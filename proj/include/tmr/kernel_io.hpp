#pragma once

// TMRK (little-endian): "TMRK" | u32 version = 1 | u32 n_samp | f64 dt |
// n_samp^2 f64 entries, row-major.
// Kernel CSV: n_samp rows of n_samp values.
// Spectrum JSON: {"eigenvalues": [...], "photon_numbers": [...],
//                 "eigenvectors": [[...], ...], "dt": ..., "n_wf": ...}
// with eigenvectors listed one per entry, in eigenvalue order.

#include "tmr/spectrum.hpp"
#include "tmr/waveform_io.hpp"

namespace tmr {

inline constexpr std::uint32_t kKernelFormatVersion = 1;

inline std::string encode_tmrk(const Kernel& k) {
  std::string buf = "TMRK";
  io::put<std::uint32_t>(buf, kKernelFormatVersion);
  io::put<std::uint32_t>(buf, static_cast<std::uint32_t>(k.n_samp()));
  io::put<double>(buf, k.grid().dt());
  const auto n = static_cast<Eigen::Index>(k.n_samp());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) io::put<double>(buf, k.matrix()(i, j));
  return buf;
}

inline Kernel decode_tmrk(std::string_view bytes, const std::string& path, std::size_t n_wf_used = 0) {
  io::Reader r(bytes, path);
  r.expect_magic("TMRK");
  const auto version = r.get<std::uint32_t>();
  if (version != kKernelFormatVersion) throw FormatError(path + ": unsupported TMRK version " + std::to_string(version));
  const auto n_samp = r.get<std::uint32_t>();
  const auto dt = r.get<double>();
  if (n_samp < 2 || !(dt > 0.0)) throw FormatError(path + ": invalid grid in header");
  if (static_cast<std::size_t>(n_samp) * n_samp > bytes.size()) throw FormatError(path + ": truncated payload");
  const auto data = r.payload(static_cast<std::size_t>(n_samp) * n_samp);
  const auto n = static_cast<Eigen::Index>(n_samp);
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = data[static_cast<std::size_t>(i * n + j)];
  try {
    return Kernel(TimeGrid(n_samp, dt), std::move(m), n_wf_used);
  } catch (const InvalidArgument& e) {
    throw FormatError(path + ": " + e.what());
  }
}

inline std::string encode_kernel_csv(const Kernel& k) {
  std::string out;
  const auto n = static_cast<Eigen::Index>(k.n_samp());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j) out.push_back(',');
      io::append_double(out, k.matrix()(i, j));
    }
    out.push_back('\n');
  }
  return out;
}

inline void write_kernel(const std::string& path, const Kernel& k) {
  const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  write_text_file(path, csv ? encode_kernel_csv(k) : encode_tmrk(k));
}

inline Kernel read_kernel(const std::string& path) { return decode_tmrk(io::read_bytes(path), path); }

inline nlohmann::json spectrum_to_json(const EigenSpectrum& s, std::size_t n_wf) {
  nlohmann::json vecs = nlohmann::json::array();
  for (std::size_t i = 0; i < s.size(); ++i) vecs.push_back(s.eigenvector(i));
  return {{"eigenvalues", s.eigenvalues()},
          {"photon_numbers", s.photon_numbers()},
          {"eigenvectors", std::move(vecs)},
          {"dt", s.grid().dt()},
          {"n_wf", n_wf}};
}

struct SpectrumFile {
  EigenSpectrum spectrum;
  std::size_t n_wf = 0;
};

inline SpectrumFile spectrum_from_json(const nlohmann::json& j) {
  try {
    auto vals = j.at("eigenvalues").get<std::vector<double>>();
    const auto vecs = j.at("eigenvectors").get<std::vector<std::vector<double>>>();
    if (vecs.size() != vals.size() || vals.size() < 2) throw FormatError("spectrum JSON: inconsistent sizes");
    const std::size_t n = vecs.front().size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(vecs.size()));
    for (std::size_t i = 0; i < vecs.size(); ++i) {
      if (vecs[i].size() != n) throw FormatError("spectrum JSON: ragged eigenvectors");
      for (std::size_t k = 0; k < n; ++k) m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = vecs[i][k];
    }
    const double dt = j.value("dt", 1.0);
    return {EigenSpectrum(TimeGrid(n, dt), std::move(vals), std::move(m)), j.value("n_wf", std::size_t{0})};
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("spectrum JSON: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("spectrum JSON: ") + e.what());
  }
}

}  // namespace tmr
