#pragma once

// Parametric test shapes. Times are in grid units (seconds), t_k = k*dt.

#include <cmath>
#include <string>
#include <variant>

#include "tmr/mode.hpp"
#include "tmr/mode_io.hpp"

namespace tmr {

namespace shape {

/// exp(-(t-center)^2 / (2 width^2)).
struct Gaussian {
  double center = 0.0;
  double width = 1.0;
};

/// Gaussian envelope with phase chirp_rate*(t-center)^2 + carrier*(t-center).
/// `carrier` is an angular frequency (rad/s); zero gives the plain chirp.
struct ChirpedGaussian {
  double center = 0.0;
  double width = 1.0;
  double chirp_rate = 0.0;
  double carrier = 0.0;
};

/// exp(-rate*t).
struct ExpDecay {
  double rate = 1.0;
};

/// H_order(x) exp(-x^2/2), x = (t-center)/width.
struct HermiteGauss {
  unsigned order = 0;
  double center = 0.0;
  double width = 1.0;
};

/// Mode JSON file; must be sampled on the requested grid.
struct FromFile {
  std::string path;
};

}  // namespace shape

using ShapeSpec =
    std::variant<shape::Gaussian, shape::ChirpedGaussian, shape::ExpDecay, shape::HermiteGauss, shape::FromFile>;

inline TemporalMode make_shape(const ShapeSpec& spec, const TimeGrid& grid) {
  const std::size_t n = grid.n_samp();
  std::vector<cplx> s(n);
  auto check_width = [](double w) {
    if (!(w > 0.0) || !std::isfinite(w)) throw InvalidArgument("shape width must be positive");
  };
  return std::visit(
      [&](const auto& p) -> TemporalMode {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, shape::Gaussian>) {
          check_width(p.width);
          for (std::size_t k = 0; k < n; ++k) {
            const double x = (grid.time(k) - p.center) / p.width;
            s[k] = std::exp(-0.5 * x * x);
          }
        } else if constexpr (std::is_same_v<T, shape::ChirpedGaussian>) {
          check_width(p.width);
          for (std::size_t k = 0; k < n; ++k) {
            const double u = grid.time(k) - p.center;
            const double x = u / p.width;
            s[k] = std::polar(std::exp(-0.5 * x * x), p.chirp_rate * u * u + p.carrier * u);
          }
        } else if constexpr (std::is_same_v<T, shape::ExpDecay>) {
          if (!(p.rate >= 0.0) || !std::isfinite(p.rate)) throw InvalidArgument("decay rate must be >= 0");
          for (std::size_t k = 0; k < n; ++k) s[k] = std::exp(-p.rate * grid.time(k));
        } else if constexpr (std::is_same_v<T, shape::HermiteGauss>) {
          check_width(p.width);
          for (std::size_t k = 0; k < n; ++k) {
            const double x = (grid.time(k) - p.center) / p.width;
            s[k] = std::hermite(p.order, x) * std::exp(-0.5 * x * x);
          }
        } else {
          TemporalMode m = read_mode(p.path);
          if (m.size() != n) {
            throw DimensionError("shape file " + p.path + " has " + std::to_string(m.size()) +
                                 " samples, grid has " + std::to_string(n));
          }
          if (std::abs(m.grid().dt() - grid.dt()) > 1e-12 * grid.dt())
            throw DimensionError("shape file " + p.path + " dt does not match grid");
          return TemporalMode::from_unit(grid, std::vector<cplx>(m.samples().begin(), m.samples().end()));
        }
        for (const auto& v : s)
          if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw DegenerateModeError("shape evaluates to non-finite samples");
        return normalize(std::span<const cplx>(s), grid);
      },
      spec);
}

/// {"kind": "gaussian" | "chirped_gaussian" | "exp_decay" | "hermite_gauss" |
/// "from_file", ...parameters}.
inline ShapeSpec shape_from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    auto num = [&](const char* key, double def) { return j.contains(key) ? j.at(key).get<double>() : def; };
    if (kind == "gaussian") return shape::Gaussian{num("center", 0.0), num("width", 1.0)};
    if (kind == "chirped_gaussian" || kind == "chirped")
      return shape::ChirpedGaussian{num("center", 0.0), num("width", 1.0), num("chirp_rate", 0.0),
                                    num("carrier", 0.0)};
    if (kind == "exp_decay") return shape::ExpDecay{num("rate", 1.0)};
    if (kind == "hermite_gauss")
      return shape::HermiteGauss{j.value("order", 0u), num("center", 0.0), num("width", 1.0)};
    if (kind == "from_file") return shape::FromFile{j.at("path").get<std::string>()};
    throw FormatError("unknown shape kind \"" + kind + "\"");
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("shape spec: ") + e.what());
  }
}

inline nlohmann::json shape_to_json(const ShapeSpec& spec) {
  return std::visit(
      [](const auto& p) -> nlohmann::json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, shape::Gaussian>)
          return {{"kind", "gaussian"}, {"center", p.center}, {"width", p.width}};
        else if constexpr (std::is_same_v<T, shape::ChirpedGaussian>)
          return {{"kind", "chirped_gaussian"}, {"center", p.center}, {"width", p.width},
                  {"chirp_rate", p.chirp_rate}, {"carrier", p.carrier}};
        else if constexpr (std::is_same_v<T, shape::ExpDecay>)
          return {{"kind", "exp_decay"}, {"rate", p.rate}};
        else if constexpr (std::is_same_v<T, shape::HermiteGauss>)
          return {{"kind", "hermite_gauss"}, {"order", p.order}, {"center", p.center}, {"width", p.width}};
        else
          return {{"kind", "from_file"}, {"path", p.path}};
      },
      spec);
}

}  // namespace tmr
