#pragma once

// Mode JSON: {"dt": <float>, "samples": [[re, im], ...]}.
// Samples are stored under the discrete unit-norm convention; files holding
// dt-weighted samples (sum |f|^2 dt = 1) load identically because modes are
// renormalized on load.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tmr/mode.hpp"

namespace tmr {

inline nlohmann::json mode_to_json(const TemporalMode& m) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& s : m.samples()) samples.push_back({s.real(), s.imag()});
  return {{"dt", m.grid().dt()}, {"samples", std::move(samples)}};
}

inline TemporalMode mode_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object() || !j.contains("dt") || !j.contains("samples"))
      throw FormatError("mode JSON needs \"dt\" and \"samples\"");
    const double dt = j.at("dt").get<double>();
    const auto& arr = j.at("samples");
    if (!arr.is_array()) throw FormatError("mode \"samples\" must be an array");
    std::vector<cplx> samples;
    samples.reserve(arr.size());
    for (const auto& p : arr) {
      if (p.is_number()) {
        samples.emplace_back(p.get<double>(), 0.0);
      } else if (p.is_array() && p.size() == 2) {
        samples.emplace_back(p[0].get<double>(), p[1].get<double>());
      } else {
        throw FormatError("mode sample must be [re, im]");
      }
    }
    const TimeGrid grid(samples.size(), dt);
    // Unit-norm input is kept bit-for-bit so that files round-trip exactly.
    double norm = 0.0;
    for (const auto& s : samples) norm += std::norm(s);
    if (std::abs(norm - 1.0) <= 1e-12) return TemporalMode::from_unit(grid, std::move(samples));
    return normalize(std::span<const cplx>(samples), grid);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("mode JSON: ") + e.what());
  } catch (const Error& e) {
    if (e.error_class() == ErrorClass::data) throw;
    throw FormatError(std::string("mode JSON: ") + e.what());
  }
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path);
  out << text;
  if (!out) throw FormatError("write failed: " + path);
}

inline void write_json_file(const std::string& path, const nlohmann::json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

inline TemporalMode read_mode(const std::string& path) { return mode_from_json(read_json_file(path)); }

inline void write_mode(const std::string& path, const TemporalMode& m) {
  write_json_file(path, mode_to_json(m));
}

}  // namespace tmr
