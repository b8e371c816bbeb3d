#pragma once

// Waveform files.
//
// TMRW (little-endian):
//   "TMRW" | u32 version = 1 | u64 n_wf | u32 n_samp | f64 dt |
//   n_wf * n_samp f64 samples, waveform-major
//
// CSV: one waveform per line, comma-separated decimal floats.
//
// Vacuum-calibration sidecar (JSON): {"sigma0_sq_raw": <float>}, the vacuum
// variance of the raw samples; kernels are divided by it.

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>
#include <algorithm>
#include <vector>

#include "tmr/mode_io.hpp"
#include "tmr/simulate.hpp"

namespace tmr {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

namespace io {

template <class T>
void put(std::string& buf, T v) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &v, sizeof(T));
  buf.append(bytes, sizeof(T));
}

class Reader {
 public:
  Reader(std::string_view bytes, std::string path) : bytes_(bytes), path_(std::move(path)) {}

  template <class T>
  T get() {
    if (pos_ + sizeof(T) > bytes_.size()) throw FormatError(path_ + ": truncated header");
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }

  void expect_magic(std::string_view magic) {
    if (bytes_.substr(0, magic.size()) != magic)
      throw FormatError(path_ + ": bad magic (expected " + std::string(magic) + ")");
    pos_ = magic.size();
  }

  /// Reads exactly `count` doubles, which must be the rest of the file.
  std::vector<double> payload(std::size_t count) {
    const std::size_t remaining = bytes_.size() - pos_;
    if (remaining < count * sizeof(double)) throw FormatError(path_ + ": truncated payload");
    if (remaining > count * sizeof(double)) throw FormatError(path_ + ": payload longer than header declares");
    std::vector<double> out(count);
    if (count) std::memcpy(out.data(), bytes_.data() + pos_, count * sizeof(double));
    pos_ += count * sizeof(double);
    return out;
  }

 private:
  std::string_view bytes_;
  std::string path_;
  std::size_t pos_ = 0;
};

inline std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

/// Shortest decimal that round-trips exactly.
inline void append_double(std::string& out, double v) {
  std::array<char, 32> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.append(buf.data(), res.ptr);
}

inline double parse_double(std::string_view s, const std::string& where) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw FormatError(where + ": cannot parse number \"" + std::string(s) + "\"");
  return v;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace io

inline constexpr std::uint32_t kWaveformFormatVersion = 1;

inline std::string encode_tmrw(const WaveformBatch& b) {
  std::string buf = "TMRW";
  buf.reserve(4 + 4 + 8 + 4 + 8 + b.data().size() * 8);
  io::put<std::uint32_t>(buf, kWaveformFormatVersion);
  io::put<std::uint64_t>(buf, b.n_wf());
  io::put<std::uint32_t>(buf, static_cast<std::uint32_t>(b.n_samp()));
  io::put<double>(buf, b.grid().dt());
  buf.append(reinterpret_cast<const char*>(b.data().data()), b.data().size() * sizeof(double));
  return buf;
}

inline WaveformBatch decode_tmrw(std::string_view bytes, const std::string& path) {
  io::Reader r(bytes, path);
  r.expect_magic("TMRW");
  const auto version = r.get<std::uint32_t>();
  if (version != kWaveformFormatVersion)
    throw FormatError(path + ": unsupported TMRW version " + std::to_string(version));
  const auto n_wf = r.get<std::uint64_t>();
  const auto n_samp = r.get<std::uint32_t>();
  const auto dt = r.get<double>();
  if (n_samp < 2 || !(dt > 0.0)) throw FormatError(path + ": invalid grid in header");
  if (n_wf > (bytes.size() / 8) / n_samp + 1) throw FormatError(path + ": truncated payload");
  auto data = r.payload(n_wf * n_samp);
  return WaveformBatch(TimeGrid(n_samp, dt), n_wf, std::move(data), IngestRecord{path, "tmrw"});
}

inline std::string encode_csv(const WaveformBatch& b) {
  std::string out;
  for (std::size_t w = 0; w < b.n_wf(); ++w) {
    const auto row = b.row(w);
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out.push_back(',');
      io::append_double(out, row[k]);
    }
    out.push_back('\n');
  }
  return out;
}

inline WaveformBatch decode_csv(std::string_view text, const std::string& path, double dt) {
  std::vector<double> data;
  std::size_t n_samp = 0, n_wf = 0, line_no = 0;
  for (auto line : io::split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    const auto fields = io::split(line, ',');
    if (n_wf == 0) n_samp = fields.size();
    if (fields.size() != n_samp)
      throw FormatError(path + ":" + std::to_string(line_no) + ": expected " + std::to_string(n_samp) + " values");
    for (auto f : fields) data.push_back(io::parse_double(f, path + ":" + std::to_string(line_no)));
    ++n_wf;
  }
  if (n_wf == 0) throw FormatError(path + ": no waveforms");
  if (n_samp < 2) throw FormatError(path + ": waveforms need at least 2 samples");
  return WaveformBatch(TimeGrid(n_samp, dt), n_wf, std::move(data), IngestRecord{path, "csv"});
}

enum class WaveformFormat { tmrw, csv };

inline WaveformFormat format_for_path(const std::string& path) {
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) return WaveformFormat::csv;
  return WaveformFormat::tmrw;
}

inline void write_batch(const std::string& path, const WaveformBatch& b,
                        WaveformFormat fmt = WaveformFormat::tmrw) {
  write_text_file(path, fmt == WaveformFormat::tmrw ? encode_tmrw(b) : encode_csv(b));
}

/// Synthesizes straight to a file in blocks, never holding the whole batch.
/// The bytes equal write_batch(path, synthesize_batch(cfg), fmt).
inline void write_simulation(const std::string& path, const SimulationConfig& cfg, WaveformFormat fmt,
                             unsigned threads = default_threads()) {
  const Synthesizer synth(cfg);
  const std::size_t n_samp = cfg.grid.n_samp();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path);
  if (fmt == WaveformFormat::tmrw) {
    std::string head = "TMRW";
    io::put<std::uint32_t>(head, kWaveformFormatVersion);
    io::put<std::uint64_t>(head, cfg.n_wf);
    io::put<std::uint32_t>(head, static_cast<std::uint32_t>(n_samp));
    io::put<double>(head, cfg.grid.dt());
    out << head;
  }
  const std::size_t n_chunks = chunk_count(cfg.n_wf);
  const std::size_t window = std::max<std::size_t>(4, 2 * std::max(1u, threads));
  std::vector<RowMatrix> blocks;
  for (std::size_t base = 0; base < n_chunks; base += window) {
    const std::size_t count = std::min(window, n_chunks - base);
    blocks.assign(count, RowMatrix());
    parallel_for(count, threads, [&](std::size_t i) {
      const std::size_t first = (base + i) * kChunkRows;
      const std::size_t rows = std::min(kChunkRows, cfg.n_wf - first);
      blocks[i].resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(n_samp));
      synth.fill(first, blocks[i]);
    });
    for (const auto& b : blocks) {
      if (fmt == WaveformFormat::tmrw) {
        out.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size() * sizeof(double)));
      } else {
        std::string text;
        for (Eigen::Index r = 0; r < b.rows(); ++r) {
          for (Eigen::Index k = 0; k < b.cols(); ++k) {
            if (k) text.push_back(',');
            io::append_double(text, b(r, k));
          }
          text.push_back('\n');
        }
        out << text;
      }
    }
  }
  if (!out) throw FormatError("write failed: " + path);
}

/// Reads a batch; `dt` applies to CSV input only (TMRW carries its own).
inline WaveformBatch ingest_batch(const std::string& path, WaveformFormat fmt, double dt = 1.0) {
  const std::string bytes = io::read_bytes(path);
  return fmt == WaveformFormat::tmrw ? decode_tmrw(bytes, path) : decode_csv(bytes, path, dt);
}

inline double read_vacuum_calibration(const std::string& path) {
  const auto j = read_json_file(path);
  try {
    const double s = j.at("sigma0_sq_raw").get<double>();
    if (!(s > 0.0) || !std::isfinite(s)) throw FormatError(path + ": sigma0_sq_raw must be positive");
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
}

}  // namespace tmr
