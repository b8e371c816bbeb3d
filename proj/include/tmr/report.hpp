#pragma once

// Figures as self-contained SVG, each with a sibling CSV holding exactly the
// plotted numbers.
//
// Layout: a 640 x 400 canvas with the plot area at x in [70, 610],
// y in [30, 350]. A data point (x, y) maps to
//   px = 70 + 540 (X - X0) / (X1 - X0)
//   py = 350 - 320 (Y - Y0) / (Y1 - Y0)
// where X = x on a linear axis and X = log10(x) on a log axis (same for y).
// Numbers in the SVG are printed with two decimals, so output is stable
// across runs and platforms.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "tmr/kernel_io.hpp"
#include "tmr/result_io.hpp"
#include "tmr/sweep.hpp"

namespace tmr {

enum class FigureKind { spectrum_histogram, eigenfunctions_overlay, polar_mode, infidelity_vs_nwf };

inline FigureKind figure_kind_from_string(const std::string& s) {
  if (s == "spectrum_histogram") return FigureKind::spectrum_histogram;
  if (s == "eigenfunctions_overlay") return FigureKind::eigenfunctions_overlay;
  if (s == "polar_mode") return FigureKind::polar_mode;
  if (s == "infidelity_vs_nwf") return FigureKind::infidelity_vs_nwf;
  throw InvalidArgument("unknown figure kind \"" + s + "\"");
}

namespace svg {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  double lo = 0.0, hi = 1.0;
  bool log = false;

  double t(double v) const { return log ? std::log10(v) : v; }
  double frac(double v) const { return (t(v) - t(lo)) / (t(hi) - t(lo)); }
};

/// Axis range covering `values` with a 5% margin (a decade-aligned range on a
/// log axis). Non-finite values, and non-positive ones on a log axis, are
/// ignored.
inline Axis fit_axis(const std::vector<double>& values, bool log) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : values) {
    if (!std::isfinite(v) || (log && v <= 0.0)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!std::isfinite(lo)) return {log ? 0.1 : 0.0, log ? 10.0 : 1.0, log};
  if (log) return {std::pow(10.0, std::floor(std::log10(lo))), std::pow(10.0, std::ceil(std::log10(hi) + 1e-12)), true};
  if (hi == lo) {
    const double pad = lo == 0.0 ? 1.0 : 0.1 * std::abs(lo);
    return {lo - pad, hi + pad, false};
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad, false};
}

inline std::vector<double> ticks(const Axis& a) {
  std::vector<double> out;
  if (a.log) {
    for (double e = std::ceil(std::log10(a.lo) - 1e-9); e <= std::log10(a.hi) + 1e-9; e += 1.0)
      out.push_back(std::pow(10.0, e));
    return out;
  }
  const double raw = (a.hi - a.lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  for (double v = std::ceil(a.lo / step) * step; v <= a.hi + 1e-9 * step; v += step)
    out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  return out;
}

inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

class Plot {
 public:
  static constexpr double kWidth = 640, kHeight = 400, kLeft = 70, kTop = 30, kPlotW = 540, kPlotH = 320;

  Plot(std::string title, std::string xlabel, std::string ylabel, Axis x, Axis y)
      : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)), x_(x), y_(y) {}

  double px(double v) const { return kLeft + kPlotW * x_.frac(v); }
  double py(double v) const { return kTop + kPlotH - kPlotH * y_.frac(v); }
  bool visible(double x, double y) const {
    return std::isfinite(x) && std::isfinite(y) && (!x_.log || x > 0.0) && (!y_.log || y > 0.0);
  }

  void polyline(const std::vector<double>& xs, const std::vector<double>& ys, const std::string& color,
                double width = 1.5) {
    std::string pts;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!visible(xs[i], ys[i])) continue;
      if (!pts.empty()) pts += ' ';
      pts += num(px(xs[i])) + "," + num(py(ys[i]));
    }
    body_ += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" + num(width) + "\" points=\"" + pts +
             "\"/>\n";
  }

  void polygon(const std::vector<double>& xs, const std::vector<double>& ys, const std::string& fill,
               double opacity) {
    std::string pts;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!visible(xs[i], ys[i])) continue;
      if (!pts.empty()) pts += ' ';
      pts += num(px(xs[i])) + "," + num(py(ys[i]));
    }
    body_ += "<polygon fill=\"" + fill + "\" fill-opacity=\"" + num(opacity) + "\" stroke=\"none\" points=\"" + pts +
             "\"/>\n";
  }

  void rect(double x0, double x1, double y0, double y1, const std::string& fill, double opacity = 1.0) {
    const double a = px(x0), b = px(x1), c = py(y1), d = py(y0);
    body_ += "<rect x=\"" + num(std::min(a, b)) + "\" y=\"" + num(std::min(c, d)) + "\" width=\"" +
             num(std::abs(b - a)) + "\" height=\"" + num(std::abs(d - c)) + "\" fill=\"" + fill +
             "\" fill-opacity=\"" + num(opacity) + "\"/>\n";
  }

  void marker(double x, double y, const std::string& color) {
    if (!visible(x, y)) return;
    body_ += "<circle cx=\"" + num(px(x)) + "\" cy=\"" + num(py(y)) + "\" r=\"3.50\" fill=\"" + color + "\"/>\n";
  }

  void legend(const std::string& text, const std::string& color) {
    const double y = kTop + 14.0 + 16.0 * static_cast<double>(legend_count_++);
    body_ += "<rect x=\"" + num(kLeft + kPlotW - 150) + "\" y=\"" + num(y - 8) + "\" width=\"12\" height=\"8\" fill=\"" +
             color + "\"/>\n";
    body_ += "<text x=\"" + num(kLeft + kPlotW - 132) + "\" y=\"" + num(y) + "\" font-size=\"11\">" + escape(text) +
             "</text>\n";
  }

  std::string str() const {
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\" "
                    "font-family=\"sans-serif\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"400\" fill=\"white\"/>\n";
    s += "<text x=\"320.00\" y=\"18.00\" font-size=\"14\" text-anchor=\"middle\">" + escape(title_) + "</text>\n";
    s += "<g stroke=\"#dddddd\" stroke-width=\"0.5\">\n";
    for (double t : ticks(x_))
      s += "<line x1=\"" + num(px(t)) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(px(t)) + "\" y2=\"" +
           num(kTop + kPlotH) + "\"/>\n";
    for (double t : ticks(y_))
      s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(py(t)) + "\" x2=\"" + num(kLeft + kPlotW) + "\" y2=\"" +
           num(py(t)) + "\"/>\n";
    s += "</g>\n";
    s += "<g>\n" + body_ + "</g>\n";
    s += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(kPlotW) + "\" height=\"" + num(kPlotH) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double t : ticks(x_))
      s += "<text x=\"" + num(px(t)) + "\" y=\"" + num(kTop + kPlotH + 16) +
           "\" font-size=\"11\" text-anchor=\"middle\">" + tick_label(t) + "</text>\n";
    for (double t : ticks(y_))
      s += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(py(t) + 4) + "\" font-size=\"11\" text-anchor=\"end\">" +
           tick_label(t) + "</text>\n";
    s += "<text x=\"" + num(kLeft + kPlotW / 2) + "\" y=\"" + num(kHeight - 14) +
         "\" font-size=\"12\" text-anchor=\"middle\">" + escape(xlabel_) + "</text>\n";
    s += "<text x=\"16.00\" y=\"" + num(kTop + kPlotH / 2) + "\" font-size=\"12\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 16.00 " + num(kTop + kPlotH / 2) + ")\">" + escape(ylabel_) + "</text>\n";
    s += "</svg>\n";
    return s;
  }

 private:
  std::string title_, xlabel_, ylabel_;
  Axis x_, y_;
  std::string body_;
  int legend_count_ = 0;
};

inline const char* palette(std::size_t i) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};
  return colors[i % 6];
}

}  // namespace svg

/// CSV text with a header and rows of doubles in shortest round-trip form.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add(const std::vector<double>& row) {
    if (row.size() != columns_.size()) throw DimensionError("CSV row width mismatch");
    rows_.push_back(row);
  }
  std::size_t rows() const noexcept { return rows_.size(); }

  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < columns_.size(); ++i) out += (i ? "," : "") + columns_[i];
    out += '\n';
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i) out.push_back(',');
        io::append_double(out, r[i]);
      }
      out += '\n';
    }
    return out;
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
};

struct Figure {
  std::string svg;
  CsvTable csv;
};

struct ReportOptions {
  double n_mode_eff = 0.0;  ///< spectrum band; 0: n_samp
  double z = 3.0;
};

/// Bars of n_i = (kappa_i - 1)/2 against eigen-index with the vacuum band
/// +-z sqrt(N_mode / N_wf) shaded.
inline Figure spectrum_histogram(const SpectrumFile& in, const ReportOptions& opt = {}) {
  const auto& s = in.spectrum;
  if (in.n_wf < 1) throw FormatError("spectrum file lacks n_wf; cannot draw the vacuum band");
  const double n_mode = opt.n_mode_eff > 0.0 ? opt.n_mode_eff : static_cast<double>(s.grid().n_samp());
  const double band = opt.z * vacuum_band(in.n_wf, n_mode);
  const auto& n = s.photon_numbers();
  std::vector<double> ys(n.begin(), n.end());
  ys.push_back(band);
  ys.push_back(-band);
  const svg::Axis xa{-0.5, static_cast<double>(n.size()) - 0.5, false};
  svg::Plot plot("Photon numbers of kernel eigenmodes", "eigenmode index", "n = (kappa - 1) / 2", xa,
                 svg::fit_axis(ys, false));
  plot.rect(xa.lo, xa.hi, -band, band, "#999999", 0.3);
  CsvTable csv({"index", "eigenvalue", "photon_number", "band_lower", "band_upper"});
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double x = static_cast<double>(i);
    plot.rect(x - 0.4, x + 0.4, 0.0, n[i], n[i] > band ? svg::palette(1) : svg::palette(0));
    csv.add({x, s.eigenvalues()[i], n[i], -band, band});
  }
  plot.legend("vacuum band", "#999999");
  return {plot.str(), std::move(csv)};
}

/// The two leading eigenvectors against time.
inline Figure eigenfunctions_overlay(const TimeGrid& grid, const std::vector<double>& f1, const std::vector<double>& f2) {
  std::vector<double> t(grid.n_samp()), all(f1);
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = grid.time(k);
  all.insert(all.end(), f2.begin(), f2.end());
  svg::Plot plot("Leading kernel eigenfunctions", "t (s)", "amplitude", svg::fit_axis(t, false),
                 svg::fit_axis(all, false));
  plot.polyline(t, f1, svg::palette(0));
  plot.legend("f1", svg::palette(0));
  const bool two = !f2.empty();
  if (two) {
    plot.polyline(t, f2, svg::palette(1));
    plot.legend("f2", svg::palette(1));
  }
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  CsvTable csv({"t", "f1", "f2"});
  for (std::size_t k = 0; k < t.size(); ++k) csv.add({t[k], f1[k], two ? f2[k] : nan});
  return {plot.str(), std::move(csv)};
}

/// Parametric (Re f, Im f) curve.
inline Figure polar_mode(const TemporalMode& f) {
  const auto re = f.real_part(), im = f.imag_part();
  std::vector<double> both(re);
  both.insert(both.end(), im.begin(), im.end());
  const auto ax = svg::fit_axis(both, false);
  svg::Plot plot("Temporal mode in the complex plane", "Re f", "Im f", ax, ax);
  plot.polyline(re, im, svg::palette(0));
  CsvTable csv({"t", "re", "im"});
  for (std::size_t k = 0; k < f.size(); ++k) csv.add({f.grid().time(k), re[k], im[k]});
  return {plot.str(), std::move(csv)};
}

/// Observed mean infidelity per sweep row, the real-mode prediction and the
/// complex-mode band, grouped by photon number.
inline Figure infidelity_vs_nwf(const std::vector<SweepRow>& rows) {
  std::map<std::pair<double, std::size_t>, std::vector<const SweepRow*>> groups;
  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    if (!r.predicted.complex_bounds || std::isnan(r.mean_infidelity)) continue;
    groups[{r.point.n, r.point.n_mode}].push_back(&r);
    xs.push_back(static_cast<double>(r.point.n_wf));
    ys.insert(ys.end(), {r.mean_infidelity, r.predicted.complex_bounds->lower, r.predicted.complex_bounds->upper,
                         *r.predicted.mean_infidelity_real});
  }
  if (xs.empty()) throw InvalidArgument("sweep has no rows with a photon-carrying state");
  svg::Plot plot("Infidelity versus number of waveforms", "N_wf", "infidelity", svg::fit_axis(xs, true),
                 svg::fit_axis(ys, true));
  CsvTable csv({"n_wf", "n_mode", "n", "mean_infidelity", "std_infidelity", "pred_mean_infidelity", "band_lower",
                "band_upper"});
  std::size_t g = 0;
  for (const auto& [key, members] : groups) {
    std::vector<double> gx, lo, hi, pred;
    for (const auto* r : members) {
      gx.push_back(static_cast<double>(r->point.n_wf));
      lo.push_back(r->predicted.complex_bounds->lower);
      hi.push_back(r->predicted.complex_bounds->upper);
      pred.push_back(*r->predicted.mean_infidelity_real);
    }
    std::vector<double> px(gx), py(hi);
    px.insert(px.end(), gx.rbegin(), gx.rend());
    py.insert(py.end(), lo.rbegin(), lo.rend());
    const char* color = svg::palette(g++);
    plot.polygon(px, py, color, 0.15);
    plot.polyline(gx, pred, color, 1.0);
    for (const auto* r : members) {
      plot.marker(static_cast<double>(r->point.n_wf), r->mean_infidelity, color);
      csv.add({static_cast<double>(r->point.n_wf), static_cast<double>(r->point.n_mode), r->point.n,
               r->mean_infidelity, r->std_infidelity, *r->predicted.mean_infidelity_real,
               r->predicted.complex_bounds->lower, r->predicted.complex_bounds->upper});
    }
    std::string label = "n = " + svg::tick_label(key.first) + ", N_mode = " + std::to_string(key.second);
    plot.legend(label, color);
  }
  return {plot.str(), std::move(csv)};
}

/// Input files a report can be drawn from.
enum class ReportInput { spectrum, result, mode, sweep };

inline const char* to_string(ReportInput k) {
  switch (k) {
    case ReportInput::spectrum: return "spectrum";
    case ReportInput::result: return "result";
    case ReportInput::mode: return "mode";
    case ReportInput::sweep: return "sweep";
  }
  return "?";
}

inline std::string csv_sibling(const std::string& svg_path) {
  const auto dot = svg_path.rfind('.');
  const auto slash = svg_path.find_last_of('/');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  return (has_ext ? svg_path.substr(0, dot) : svg_path) + ".csv";
}

struct ReportFiles {
  std::string svg_path;
  std::string csv_path;
  std::size_t csv_rows = 0;
};

/// Loads `input`, draws `kind` and writes the SVG and its CSV sibling.
inline ReportFiles emit_report(FigureKind kind, const std::string& input, const std::string& svg_path,
                               const ReportOptions& opt = {}) {
  const std::string bytes = io::read_bytes(input);
  ReportInput type;
  nlohmann::json j;
  if (bytes.rfind("point,", 0) == 0) {
    type = ReportInput::sweep;
  } else {
    try {
      j = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(input + ": neither a sweep CSV nor JSON (" + e.what() + ")");
    }
    if (j.contains("eigenvalues")) type = ReportInput::spectrum;
    else if (j.contains("candidates")) type = ReportInput::result;
    else if (j.contains("samples")) type = ReportInput::mode;
    else throw FormatError(input + ": unrecognized JSON input");
  }
  auto incompatible = [&](const char* figure) {
    return InvalidArgument(std::string(figure) + " cannot be drawn from a " + to_string(type) + " file");
  };
  std::optional<Figure> fig;
  switch (kind) {
    case FigureKind::spectrum_histogram:
      if (type != ReportInput::spectrum) throw incompatible("spectrum_histogram");
      fig = spectrum_histogram(spectrum_from_json(j), opt);
      break;
    case FigureKind::eigenfunctions_overlay:
      if (type == ReportInput::spectrum) {
        const auto s = spectrum_from_json(j).spectrum;
        fig = eigenfunctions_overlay(s.grid(), s.eigenvector(0), s.eigenvector(1));
      } else if (type == ReportInput::result) {
        const auto r = result_from_json(j);
        fig = eigenfunctions_overlay(r.candidate_plus.grid(), r.f1, r.f2);
      } else {
        throw incompatible("eigenfunctions_overlay");
      }
      break;
    case FigureKind::polar_mode:
      if (type == ReportInput::result) fig = polar_mode(result_from_json(j).candidate_plus);
      else if (type == ReportInput::mode) fig = polar_mode(mode_from_json(j));
      else throw incompatible("polar_mode");
      break;
    case FigureKind::infidelity_vs_nwf:
      if (type != ReportInput::sweep) throw incompatible("infidelity_vs_nwf");
      fig = infidelity_vs_nwf(decode_sweep_csv(bytes, input));
      break;
  }
  ReportFiles out{svg_path, csv_sibling(svg_path), fig->csv.rows()};
  write_text_file(out.svg_path, fig->svg);
  write_text_file(out.csv_path, fig->csv.str());
  return out;
}

}  // namespace tmr
