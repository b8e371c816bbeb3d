#include <gtest/gtest.h>

#include <filesystem>

#include "tmr/tmr.hpp"

using namespace tmr;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "tmr_report_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    out.push_back(f);
  }
  return out;
}

SpectrumFile vacuum_spectrum(std::size_t n_samp, std::size_t n_wf, std::uint64_t seed) {
  SimulationConfig cfg{StateSpec::vacuum(), TimeGrid(n_samp, 1.0)};
  cfg.n_wf = n_wf;
  cfg.n_mode = n_samp;
  cfg.seed = seed;
  return {eigendecompose(kernel_from_simulation(cfg)), n_wf};
}

}  // namespace

TEST(Svg, IsSelfContained) {
  const auto fig = spectrum_histogram(vacuum_spectrum(20, 5000, 1));
  EXPECT_EQ(fig.svg.rfind("<svg", 0), 0u);
  EXPECT_NE(fig.svg.find("</svg>"), std::string::npos);
  EXPECT_EQ(fig.svg.find("href"), std::string::npos);
  EXPECT_EQ(fig.svg.find("<image"), std::string::npos);
  EXPECT_EQ(fig.svg.find("<script"), std::string::npos);
}

TEST(Svg, Escaping) { EXPECT_EQ(svg::escape("a<b & \"c\">"), "a&lt;b &amp; &quot;c&quot;&gt;"); }

TEST(Svg, LogAxisTicksArePowersOfTen) {
  const auto ax = svg::fit_axis({1e3, 1e5}, true);
  for (double t : svg::ticks(ax)) EXPECT_NEAR(std::log10(t), std::round(std::log10(t)), 1e-12);
}

TEST(SpectrumHistogram, VacuumBarsInsideBand) {
  const auto in = vacuum_spectrum(30, 20000, 2);
  const auto fig = spectrum_histogram(in);
  const auto rows = csv_rows(fig.csv.str());
  ASSERT_EQ(rows.size(), 31u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"index", "eigenvalue", "photon_number", "band_lower", "band_upper"}));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double n = std::stod(rows[i][2]), lo = std::stod(rows[i][3]), hi = std::stod(rows[i][4]);
    EXPECT_GE(n, lo);
    EXPECT_LE(n, hi);
  }
  EXPECT_NEAR(std::stod(rows[1][4]), 3.0 * std::sqrt(30.0 / 20000.0), 1e-15);
}

TEST(SpectrumHistogram, NeedsWaveformCount) {
  auto in = vacuum_spectrum(10, 1000, 3);
  in.n_wf = 0;
  EXPECT_THROW(spectrum_histogram(in), FormatError);
}

TEST(PolarMode, OneRowPerSampleAndExactValues) {
  const TimeGrid grid(64, 0.5);
  const auto f = make_shape(shape::ChirpedGaussian{16.0, 4.0, 0.05, 0.0}, grid);
  const auto fig = polar_mode(f);
  const auto rows = csv_rows(fig.csv.str());
  ASSERT_EQ(rows.size(), 65u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"t", "re", "im"}));
  for (std::size_t k = 0; k < 64; ++k) {
    EXPECT_EQ(std::stod(rows[k + 1][0]), grid.time(k));
    EXPECT_EQ(std::stod(rows[k + 1][1]), f[k].real());
    EXPECT_EQ(std::stod(rows[k + 1][2]), f[k].imag());
  }
  EXPECT_EQ(count(fig.svg, "<polyline"), 1u);
}

TEST(EigenfunctionsOverlay, TwoCurves) {
  const TimeGrid grid(16, 1.0);
  std::vector<double> a(16, 0.25), b(16, -0.25);
  const auto fig = eigenfunctions_overlay(grid, a, b);
  EXPECT_EQ(count(fig.svg, "<polyline"), 2u);
  EXPECT_EQ(fig.csv.rows(), 16u);
}

TEST(InfidelityVsNwf, BandsMatchModel) {
  std::vector<SweepRow> rows;
  std::size_t idx = 0;
  for (double n : {0.1, 1.0})
    for (std::size_t nw : {1000u, 10000u, 100000u}) {
      std::vector<TrialOutcome> o(8);
      for (auto& t : o) t.infidelity = 0.01 / n * 1000.0 / static_cast<double>(nw);
      rows.push_back(aggregate(idx++, {nw, 200, n}, o));
    }
  const auto fig = infidelity_vs_nwf(rows);
  EXPECT_EQ(count(fig.svg, "<circle"), rows.size());
  EXPECT_EQ(count(fig.svg, "<polygon"), 2u);
  const auto csv = csv_rows(fig.csv.str());
  ASSERT_EQ(csv.size(), rows.size() + 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto p = predict({static_cast<double>(rows[i].point.n_wf), 200.0, rows[i].point.n});
    // Rows come out grouped by n, in input order within a group.
    EXPECT_EQ(std::stod(csv[i + 1][6]), p.bounds().lower);
    EXPECT_EQ(std::stod(csv[i + 1][7]), p.bounds().upper);
    EXPECT_EQ(std::stod(csv[i + 1][5]), p.infidelity_real());
  }
}

TEST(InfidelityVsNwf, VacuumOnlySweepIsRejected) {
  std::vector<TrialOutcome> o(8);
  EXPECT_THROW(infidelity_vs_nwf({aggregate(0, {1000, 20, 0.0}, o)}), InvalidArgument);
}

TEST(EmitReport, FilesAndCompatibility) {
  const auto spec_path = scratch("spectrum.json").string();
  const auto in = vacuum_spectrum(12, 4000, 4);
  write_json_file(spec_path, spectrum_to_json(in.spectrum, in.n_wf));

  const auto svg_path = scratch("hist.svg").string();
  const auto files = emit_report(FigureKind::spectrum_histogram, spec_path, svg_path);
  EXPECT_EQ(files.csv_path, scratch("hist.csv").string());
  EXPECT_EQ(files.csv_rows, 12u);
  EXPECT_TRUE(fs::exists(files.svg_path));
  EXPECT_TRUE(fs::exists(files.csv_path));

  // Deterministic: byte-identical on a second run.
  const auto first = io::read_bytes(svg_path);
  emit_report(FigureKind::spectrum_histogram, spec_path, svg_path);
  EXPECT_EQ(io::read_bytes(svg_path), first);

  EXPECT_NO_THROW(emit_report(FigureKind::eigenfunctions_overlay, spec_path, scratch("eig.svg").string()));
  EXPECT_THROW(emit_report(FigureKind::polar_mode, spec_path, scratch("x.svg").string()), InvalidArgument);
  EXPECT_THROW(emit_report(FigureKind::infidelity_vs_nwf, spec_path, scratch("x.svg").string()), InvalidArgument);

  const auto mode_path = scratch("mode.json").string();
  write_mode(mode_path, make_shape(shape::ChirpedGaussian{6.0, 2.0, 0.1, 0.0}, TimeGrid(12, 1.0)));
  EXPECT_EQ(emit_report(FigureKind::polar_mode, mode_path, scratch("polar.svg").string()).csv_rows, 12u);
  EXPECT_THROW(emit_report(FigureKind::spectrum_histogram, mode_path, scratch("x.svg").string()), InvalidArgument);

  const auto junk = scratch("junk.txt").string();
  write_text_file(junk, "not json");
  EXPECT_THROW(emit_report(FigureKind::polar_mode, junk, scratch("x.svg").string()), FormatError);
}

TEST(EmitReport, CsvSibling) {
  EXPECT_EQ(csv_sibling("out/fig.svg"), "out/fig.csv");
  EXPECT_EQ(csv_sibling("out.d/fig"), "out.d/fig.csv");
}

TEST(FigureKind, Parsing) {
  EXPECT_EQ(figure_kind_from_string("polar_mode"), FigureKind::polar_mode);
  EXPECT_THROW(figure_kind_from_string("pie"), InvalidArgument);
}
