#pragma once

// Reconstruction result JSON:
// {"n1", "n2", "n_total", "modes_used", "above_vacuum_count", "threshold",
//  "verdict", "degenerate", "candidates": {"plus": <mode>, "minus": <mode>},
//  "eigenvectors": {"f1": [...], "f2": [...]}, "fidelity": {...}?,
//  "verification": {...}, "provenance": {...}}

#include <string>

#include "tmr/mode_io.hpp"
#include "tmr/reconstruct.hpp"
#include "tmr/shapes.hpp"

namespace tmr {

inline constexpr const char* kUnverifiedLabel = "unverified single-mode assumption";

inline nlohmann::json provenance_to_json(const Provenance& p) {
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return {{"source", "unknown"}};
        } else if constexpr (std::is_same_v<T, IngestRecord>) {
          return {{"source", "file"}, {"path", v.path}, {"format", v.format}};
        } else {
          nlohmann::json j = {{"source", "simulation"},
                              {"state", to_string(v.state.kind)},
                              {"mean_photons", v.state.mean_photons},
                              {"n_wf", v.n_wf},
                              {"n_mode", v.n_mode},
                              {"n_samp", v.grid.n_samp()},
                              {"dt", v.grid.dt()},
                              {"seed", v.seed}};
          if (v.filter) {
            nlohmann::json f = {{"taps", v.filter->taps}, {"guard", v.filter->guard}};
            if (v.filter->highpass_hz) f["highpass_hz"] = *v.filter->highpass_hz;
            if (v.filter->lowpass_hz) f["lowpass_hz"] = *v.filter->lowpass_hz;
            j["filter"] = f;
          }
          return j;
        }
      },
      p);
}

inline nlohmann::json verdict_to_json(const PurityVerdict& v) {
  return {{"verdict", to_string(v.kind)},
          {"above_vacuum_count", v.above_vacuum_count},
          {"threshold", v.threshold},
          {"vacuum_only", v.vacuum_only()}};
}

inline nlohmann::json verification_to_json(const std::optional<Verification>& v) {
  if (!v) return {{"status", kUnverifiedLabel}};
  nlohmann::json attempts = nlohmann::json::array();
  for (const auto& a : v->attempts) attempts.push_back(verdict_to_json(a));
  return {{"status", v->single_mode_confirmed() ? "pure single mode" : "not a pure single mode"},
          {"compensation", v->compensation},
          {"result", verdict_to_json(v->verdict)},
          {"attempts", attempts}};
}

inline nlohmann::json result_to_json(const ReconstructionResult& r, const nlohmann::json& provenance = nullptr,
                                     const std::optional<Verification>& verification = std::nullopt) {
  nlohmann::json j = {{"n1", r.n1},
                      {"n2", r.n2},
                      {"n_total", r.n_total},
                      {"modes_used", r.modes_used},
                      {"above_vacuum_count", r.above_vacuum_count},
                      {"threshold", r.threshold_used},
                      {"verdict", to_string(r.verdict)},
                      {"degenerate", r.degenerate},
                      {"candidates", {{"plus", mode_to_json(r.candidate_plus)}, {"minus", mode_to_json(r.candidate_minus)}}},
                      {"eigenvectors", {{"f1", r.f1}, {"f2", r.f2}}}};
  if (r.fidelity)
    j["fidelity"] = {{"best", r.fidelity->best},
                     {"plus", r.fidelity->plus},
                     {"minus", r.fidelity->minus},
                     {"subspace_optimal", r.fidelity->subspace_optimal}};
  if (r.verdict == PurityCase::complex_or_two_mode || verification) j["verification"] = verification_to_json(verification);
  if (!provenance.is_null()) j["provenance"] = provenance;
  return j;
}

/// Reads the fields a result carries; verification and provenance are left
/// to the caller (they are plain JSON).
inline ReconstructionResult result_from_json(const nlohmann::json& j) {
  try {
    const auto plus = mode_from_json(j.at("candidates").at("plus"));
    const auto minus = mode_from_json(j.at("candidates").at("minus"));
    ReconstructionResult r{plus, minus};
    r.n1 = j.at("n1").get<double>();
    r.n2 = j.at("n2").get<double>();
    r.n_total = j.at("n_total").get<double>();
    r.modes_used = j.at("modes_used").get<std::size_t>();
    r.above_vacuum_count = j.at("above_vacuum_count").get<std::size_t>();
    r.threshold_used = j.at("threshold").get<double>();
    r.verdict = purity_case_from_string(j.at("verdict").get<std::string>());
    r.degenerate = j.at("degenerate").get<bool>();
    r.f1 = j.at("eigenvectors").at("f1").get<std::vector<double>>();
    r.f2 = j.at("eigenvectors").at("f2").get<std::vector<double>>();
    if (j.contains("fidelity")) {
      const auto& f = j.at("fidelity");
      r.fidelity = FidelityRecord{f.at("best").get<double>(), f.at("plus").get<double>(), f.at("minus").get<double>(),
                                  f.at("subspace_optimal").get<bool>()};
    }
    if (j.contains("verification") && j.at("verification").contains("result"))
      r.verified = j.at("verification").at("status").get<std::string>() == "pure single mode";
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("result JSON: ") + e.what());
  }
}

}  // namespace tmr
