#pragma once

// Simulation config JSON, enough to re-run a synthesis exactly:
// {"state": "coherent", "mean_photons": 1.1, "n_wf": 1000, "n_mode": 100,
//  "dt": 1.0, "seed": 7, "mode": <mode JSON>, "second_mode": <mode JSON>?,
//  "mixture_weight": 0.5, "filter": {"highpass_hz", "lowpass_hz", "taps", "guard"}?}

#include "tmr/mode_io.hpp"
#include "tmr/simulate.hpp"

namespace tmr {

inline nlohmann::json config_to_json(const SimulationConfig& c) {
  nlohmann::json j = {{"state", to_string(c.state.kind)},
                      {"mean_photons", c.state.mean_photons},
                      {"n_wf", c.n_wf},
                      {"n_mode", c.n_mode},
                      {"n_samp", c.grid.n_samp()},
                      {"dt", c.grid.dt()},
                      {"seed", c.seed},
                      {"mixture_weight", c.state.mixture_weight}};
  if (c.state.mode) j["mode"] = mode_to_json(*c.state.mode);
  if (c.state.second_mode) j["second_mode"] = mode_to_json(*c.state.second_mode);
  if (c.filter) {
    nlohmann::json f = {{"taps", c.filter->taps}, {"guard", c.filter->guard}};
    if (c.filter->highpass_hz) f["highpass_hz"] = *c.filter->highpass_hz;
    if (c.filter->lowpass_hz) f["lowpass_hz"] = *c.filter->lowpass_hz;
    j["filter"] = f;
  }
  return j;
}

inline SimulationConfig config_from_json(const nlohmann::json& j) {
  try {
    SimulationConfig c{StateSpec{}, TimeGrid(j.at("n_samp").get<std::size_t>(), j.at("dt").get<double>())};
    c.state.kind = state_kind_from_string(j.at("state").get<std::string>());
    c.state.mean_photons = j.at("mean_photons").get<double>();
    c.state.mixture_weight = j.value("mixture_weight", 0.5);
    if (j.contains("mode")) c.state.mode = mode_from_json(j.at("mode"));
    if (j.contains("second_mode")) c.state.second_mode = mode_from_json(j.at("second_mode"));
    c.n_wf = j.at("n_wf").get<std::size_t>();
    c.n_mode = j.at("n_mode").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("filter")) {
      const auto& f = j.at("filter");
      FilterSpec fs;
      if (f.contains("highpass_hz")) fs.highpass_hz = f.at("highpass_hz").get<double>();
      if (f.contains("lowpass_hz")) fs.lowpass_hz = f.at("lowpass_hz").get<double>();
      fs.taps = f.value("taps", fs.taps);
      fs.guard = f.value("guard", fs.guard);
      c.filter = fs;
    }
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("simulation config: ") + e.what());
  }
}

}  // namespace tmr
