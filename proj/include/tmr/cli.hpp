#pragma once

// Command-line front end. Exit codes: 0 success, 2 usage, 3 data or file
// format, 4 statistical floor / regime failure. Every error is also printed
// to stderr as one line of JSON.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tmr/accuracy.hpp"
#include "tmr/config_io.hpp"
#include "tmr/kernel_io.hpp"
#include "tmr/reconstruct.hpp"
#include "tmr/report.hpp"
#include "tmr/result_io.hpp"
#include "tmr/shapes.hpp"
#include "tmr/sweep.hpp"
#include "tmr/waveform_io.hpp"

namespace tmr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitStatistical = 4;

inline int exit_code(ErrorClass c) {
  switch (c) {
    case ErrorClass::usage: return kExitUsage;
    case ErrorClass::data: return kExitData;
    case ErrorClass::statistical: return kExitStatistical;
  }
  return kExitData;
}

inline const char* class_name(ErrorClass c) {
  switch (c) {
    case ErrorClass::usage: return "usage";
    case ErrorClass::data: return "data";
    case ErrorClass::statistical: return "statistical";
  }
  return "?";
}

/// A tmr::Error carrying extra JSON fields for the error line.
class DetailedError : public Error {
 public:
  DetailedError(const Error& base, nlohmann::json details)
      : Error(base.error_class(), base.code(), base.what()), details_(std::move(details)) {}
  const nlohmann::json& details() const noexcept { return details_; }

 private:
  nlohmann::json details_;
};

inline std::size_t as_count(double v, const char* flag) {
  if (!std::isfinite(v) || v < 1.0 || v != std::floor(v) || v > 9.0e15)
    throw InvalidArgument(std::string(flag) + " must be a positive integer");
  return static_cast<std::size_t>(v);
}

inline unsigned resolve_threads(double flag) {
  if (flag == 0.0) return default_threads();
  return static_cast<unsigned>(as_count(flag, "--threads"));
}

inline bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct ShapeFlags {
  std::string kind = "gaussian";
  std::optional<double> center, width, chirp, carrier, rate;
  unsigned order = 0;
  std::string file;

  void attach(CLI::App* app) {
    app->add_option("--shape", kind, "gaussian | chirped | exp_decay | hermite_gauss")
        ->check(CLI::IsMember({"gaussian", "chirped", "chirped_gaussian", "exp_decay", "hermite_gauss"}));
    app->add_option("--mode", file, "mode JSON file (overrides --shape)");
    app->add_option("--center", center, "shape center in seconds (default: window middle)");
    app->add_option("--width", width, "shape width in seconds (default: window / 10)");
    app->add_option("--chirp", chirp, "chirp rate, rad/s^2 (default: 0.5 / width^2)");
    app->add_option("--carrier", carrier, "linear phase slope, rad/s (default 0)");
    app->add_option("--rate", rate, "exp_decay rate, 1/s (default: 5 / window)");
    app->add_option("--order", order, "hermite_gauss order");
  }

  ShapeSpec build(const TimeGrid& grid) const {
    if (!file.empty()) return shape::FromFile{file};
    const double span = static_cast<double>(grid.n_samp()) * grid.dt();
    const double c = center.value_or(0.5 * (static_cast<double>(grid.n_samp()) - 1.0) * grid.dt());
    const double w = width.value_or(span / 10.0);
    if (kind == "gaussian") return shape::Gaussian{c, w};
    if (kind == "chirped" || kind == "chirped_gaussian")
      return shape::ChirpedGaussian{c, w, chirp.value_or(0.5 / (w * w)), carrier.value_or(0.0)};
    if (kind == "exp_decay") return shape::ExpDecay{rate.value_or(5.0 / span)};
    return shape::HermiteGauss{order, c, w};
  }
};

struct KernelSource {
  std::string waveforms, kernel, calibration;
  double dt = 1.0;
  bool subtract_mean = false;

  void attach(CLI::App* app, bool allow_kernel = true) {
    app->add_option("--in", waveforms, "waveform file (.tmrw or .csv)");
    if (allow_kernel) app->add_option("--kernel", kernel, "kernel file (.tmrk)");
    app->add_option("--dt", dt, "sample spacing in seconds for CSV input");
    app->add_option("--calibration", calibration, "vacuum-calibration JSON {\"sigma0_sq_raw\": ...}");
    app->add_flag("--subtract-mean", subtract_mean, "remove the per-sample mean before correlating");
  }

  void validate() const {
    if (waveforms.empty() == kernel.empty()) throw InvalidArgument("give exactly one of --in or --kernel");
    if (!(dt > 0.0)) throw InvalidArgument("--dt must be positive");
  }

  Kernel load(unsigned threads, nlohmann::json& provenance) const {
    if (!kernel.empty()) {
      provenance = {{"source", "file"}, {"path", kernel}, {"format", "tmrk"}};
      return read_kernel(kernel);
    }
    auto batch = ingest_batch(waveforms, format_for_path(waveforms), dt);
    if (!calibration.empty()) batch.set_sigma0_sq(read_vacuum_calibration(calibration));
    provenance = provenance_to_json(batch.provenance());
    provenance["n_wf"] = batch.n_wf();
    provenance["sigma0_sq"] = batch.sigma0_sq();
    KernelOptions ko;
    ko.subtract_mean = subtract_mean;
    ko.threads = threads;
    return estimate_kernel(batch, ko);
  }
};

inline std::size_t kernel_waveforms(const Kernel& k, const nlohmann::json& provenance) {
  if (k.n_wf_used()) return k.n_wf_used();
  if (provenance.contains("n_wf")) return provenance.at("n_wf").get<std::size_t>();
  return 0;
}

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(int argc, const char* const* argv) {
    CLI::App app{"Temporal-mode reconstruction from homodyne waveforms", "tmr"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "tmr 1.0.0");
    std::function<int()> action;

    // simulate
    auto* sim = app.add_subcommand("simulate", "synthesize homodyne waveforms");
    ShapeFlags sim_shape;
    sim_shape.attach(sim);
    std::string sim_state = "coherent", sim_out, sim_format, sim_mode2, sim_mode_out, sim_config_out;
    double sim_n = 1.0, sim_nwf = 0, sim_nsamp = 0, sim_nmode = 0, sim_dt = 1.0, sim_weight = 0.5, sim_threads = 0;
    double sim_taps = 101, sim_guard = 0;
    std::optional<double> sim_hp, sim_lp;
    std::uint64_t sim_seed = 0;
    sim->add_option("--state", sim_state, "vacuum | single_photon | coherent | mixture")
        ->check(CLI::IsMember({"vacuum", "single_photon", "single", "coherent", "mixture", "photon_mixture"}));
    sim->add_option("--n", sim_n, "mean photon number (single photon: efficiency eta)");
    sim->add_option("--nwf", sim_nwf, "number of waveforms")->required();
    sim->add_option("--nsamp", sim_nsamp, "samples per waveform")->required();
    sim->add_option("--nmode", sim_nmode, "synthesized basis modes (default: nsamp)");
    sim->add_option("--dt", sim_dt, "sample spacing in seconds");
    sim->add_option("--seed", sim_seed, "random seed")->required();
    sim->add_option("--out", sim_out, "output waveform file")->required();
    sim->add_option("--format", sim_format, "tmrw | csv (default: from extension)")
        ->check(CLI::IsMember({"tmrw", "csv"}));
    sim->add_option("--mode2", sim_mode2, "second (orthogonal) mode JSON for --state mixture");
    sim->add_option("--mixture-weight", sim_weight, "probability of the photon being in the first mode");
    sim->add_option("--highpass", sim_hp, "high-pass cutoff in Hz");
    sim->add_option("--lowpass", sim_lp, "low-pass cutoff in Hz");
    sim->add_option("--taps", sim_taps, "FIR taps per filter stage (odd)");
    sim->add_option("--guard", sim_guard, "guard samples per side (default: 3 filter lengths)");
    sim->add_option("--mode-out", sim_mode_out, "write the occupied mode as JSON");
    sim->add_option("--config-out", sim_config_out, "write the simulation config as JSON (for verify)");
    sim->add_option("--threads", sim_threads, "worker threads (default: TMR_THREADS or all cores)");
    sim->callback([&] {
      action = [&] {
        const std::size_t n_samp = as_count(sim_nsamp, "--nsamp");
        if (n_samp < 2) throw InvalidArgument("--nsamp must be >= 2");
        if (!(sim_dt > 0.0)) throw InvalidArgument("--dt must be positive");
        SimulationConfig cfg{StateSpec{}, TimeGrid(n_samp, sim_dt)};
        cfg.n_wf = as_count(sim_nwf, "--nwf");
        cfg.n_mode = sim_nmode == 0.0 ? n_samp : as_count(sim_nmode, "--nmode");
        cfg.seed = sim_seed;
        if (sim_hp || sim_lp) {
          FilterSpec fs;
          fs.highpass_hz = sim_hp;
          fs.lowpass_hz = sim_lp;
          fs.taps = as_count(sim_taps, "--taps");
          fs.guard = sim_guard == 0.0 ? 0 : as_count(sim_guard, "--guard");
          FirFilter check(fs, sim_dt);
          cfg.filter = fs;
        }
        const auto kind = state_kind_from_string(sim_state);
        if (kind == StateKind::photon_mixture && sim_mode2.empty()) throw InvalidArgument("--state mixture needs --mode2");
        const unsigned threads = resolve_threads(sim_threads);
        const auto fmt = sim_format.empty() ? format_for_path(sim_out)
                                            : (sim_format == "csv" ? WaveformFormat::csv : WaveformFormat::tmrw);
        // Flags are valid; from here on files are touched.
        std::optional<TemporalMode> mode;
        if (kind != StateKind::vacuum) mode = make_shape(sim_shape.build(cfg.grid), cfg.grid);
        switch (kind) {
          case StateKind::vacuum: cfg.state = StateSpec::vacuum(); break;
          case StateKind::single_photon: cfg.state = StateSpec::single_photon(*mode, sim_n); break;
          case StateKind::coherent: cfg.state = StateSpec::coherent(*mode, sim_n); break;
          case StateKind::photon_mixture: {
            auto second = read_mode(sim_mode2);
            require_same_grid(cfg.grid, second.grid(), "--mode2");
            cfg.state = StateSpec::photon_mixture(*mode, std::move(second), sim_n, sim_weight);
            break;
          }
        }
        cfg.validate();
        write_simulation(sim_out, cfg, fmt, threads);
        if (!sim_mode_out.empty() && mode) write_mode(sim_mode_out, *mode);
        if (!sim_config_out.empty()) write_json_file(sim_config_out, config_to_json(cfg));
        out_ << nlohmann::json{{"status", "ok"}, {"out", sim_out}, {"n_wf", cfg.n_wf}, {"n_samp", n_samp}}.dump()
             << "\n";
        return kExitOk;
      };
    });

    // reconstruct
    auto* rec = app.add_subcommand("reconstruct", "reconstruct the temporal mode from waveforms or a kernel");
    KernelSource rec_src;
    rec_src.attach(rec);
    std::string rec_out, rec_target, rec_verify_config, rec_verify_data, rec_spectrum_out, rec_kernel_out;
    double rec_nmode = 0, rec_z = 3.0, rec_threads = 0;
    rec->add_option("--out", rec_out, "result JSON")->required();
    rec->add_option("--target", rec_target, "target mode JSON; adds fidelities");
    rec->add_option("--nmode-eff", rec_nmode, "effective mode count (default: nsamp)");
    rec->add_option("--z", rec_z, "vacuum band multiplier");
    rec->add_option("--verify-config", rec_verify_config, "simulation config to re-run with phase compensation");
    rec->add_option("--verify-data", rec_verify_data, "waveforms recorded with the compensated LO phase");
    rec->add_option("--spectrum-out", rec_spectrum_out, "also write the spectrum JSON");
    rec->add_option("--kernel-out", rec_kernel_out, "also write the kernel (.tmrk or .csv)");
    rec->add_option("--threads", rec_threads, "worker threads");
    rec->callback([&] {
      action = [&] {
        rec_src.validate();
        if (!(rec_z > 0.0)) throw InvalidArgument("--z must be positive");
        if (rec_nmode < 0.0) throw InvalidArgument("--nmode-eff must be positive");
        if (!rec_verify_config.empty() && !rec_verify_data.empty())
          throw InvalidArgument("give at most one of --verify-config and --verify-data");
        const unsigned threads = resolve_threads(rec_threads);
        nlohmann::json prov;
        const Kernel k = rec_src.load(threads, prov);
        const std::size_t n_wf = kernel_waveforms(k, prov);
        if (n_wf < 1) throw FormatError("kernel file does not record the waveform count");
        if (!rec_kernel_out.empty()) write_kernel(rec_kernel_out, k);
        const auto spec = eigendecompose(k);
        if (!rec_spectrum_out.empty()) write_json_file(rec_spectrum_out, spectrum_to_json(spec, n_wf));
        const double n_mode = rec_nmode > 0.0 ? rec_nmode : static_cast<double>(k.n_samp());
        const auto verdict = classify_spectrum(spec, n_wf, n_mode, rec_z);
        const auto meta = verdict_to_json(verdict);
        if (verdict.vacuum_only())
          throw DetailedError(StatisticalFloorError("no eigenmode rises above the vacuum band; nothing to reconstruct"),
                              meta);
        ReconstructionResult r = [&] {
          try {
            return reconstruct_mode(spec, verdict);
          } catch (const Error& e) {
            throw DetailedError(e, meta);
          }
        }();
        if (!rec_target.empty()) attach_fidelity(r, read_mode(rec_target));
        std::optional<Verification> ver;
        VerifyOptions vo;
        vo.n_mode_eff = n_mode;
        vo.z = rec_z;
        vo.threads = threads;
        if (!rec_verify_config.empty()) {
          const auto cfg = config_from_json(read_json_file(rec_verify_config));
          vo.n_mode_eff = rec_nmode > 0.0 ? rec_nmode : static_cast<double>(cfg.n_mode);
          ver = verify_single_mode(cfg, r, vo);
        } else if (!rec_verify_data.empty()) {
          auto batch = ingest_batch(rec_verify_data, format_for_path(rec_verify_data), rec_src.dt);
          if (!rec_src.calibration.empty()) batch.set_sigma0_sq(read_vacuum_calibration(rec_src.calibration));
          ver = verify_single_mode(batch, vo);
        }
        if (ver) r.verified = ver->single_mode_confirmed();
        const auto j = result_to_json(r, prov, ver);
        write_json_file(rec_out, j);
        nlohmann::json summary = {{"status", "ok"}, {"out", rec_out}, {"verdict", to_string(r.verdict)},
                                  {"n1", r.n1}, {"n2", r.n2}};
        if (r.fidelity) summary["fidelity"] = r.fidelity->best;
        if (j.contains("verification")) summary["verification"] = j["verification"]["status"];
        out_ << summary.dump() << "\n";
        return kExitOk;
      };
    });

    // spectrum
    auto* spc = app.add_subcommand("spectrum", "kernel eigenvalues, photon numbers and eigenvectors");
    KernelSource spc_src;
    spc_src.attach(spc);
    std::string spc_out, spc_kernel_out;
    bool spc_mode_count = false;
    double spc_threads = 0, spc_top = 5;
    spc->add_option("--out", spc_out, "spectrum JSON")->required();
    spc->add_option("--kernel-out", spc_kernel_out, "also write the kernel (.tmrk or .csv)");
    spc->add_flag("--mode-count", spc_mode_count, "treat input as vacuum and estimate the effective mode count");
    spc->add_option("--top", spc_top, "photon numbers listed on stdout");
    spc->add_option("--threads", spc_threads, "worker threads");
    spc->callback([&] {
      action = [&] {
        spc_src.validate();
        const std::size_t top = as_count(spc_top, "--top");
        const unsigned threads = resolve_threads(spc_threads);
        nlohmann::json prov;
        const Kernel k = spc_src.load(threads, prov);
        const std::size_t n_wf = kernel_waveforms(k, prov);
        if (!spc_kernel_out.empty()) write_kernel(spc_kernel_out, k);
        const auto spec = eigendecompose(k);
        write_json_file(spc_out, spectrum_to_json(spec, n_wf));
        const auto& n = spec.photon_numbers();
        nlohmann::json summary = {
            {"status", "ok"},
            {"out", spc_out},
            {"n_wf", n_wf},
            {"top_photon_numbers", std::vector<double>(n.begin(), n.begin() + static_cast<std::ptrdiff_t>(std::min(top, n.size())))}};
        if (spc_mode_count) {
          if (n_wf < 2) throw FormatError("mode count needs the waveform count");
          const auto est = estimate_effective_mode_count(spec, n_wf);
          summary["effective_mode_count"] = {{"estimate", est.estimate},
                                             {"max_deviation", est.max_deviation},
                                             {"count_above_half", est.count_above_half},
                                             {"count_based_estimate", est.count_based_estimate}};
        }
        out_ << summary.dump() << "\n";
        return kExitOk;
      };
    });

    // verify
    auto* ver = app.add_subcommand("verify", "check the single-mode assumption with phase compensation");
    std::string ver_result, ver_config, ver_data, ver_out, ver_cal;
    double ver_nmode = 0, ver_z = 3.0, ver_threads = 0, ver_dt = 1.0;
    ver->add_option("--result", ver_result, "result JSON from reconstruct")->required();
    ver->add_option("--config", ver_config, "simulation config JSON (re-runnable source)");
    ver->add_option("--data", ver_data, "waveforms recorded with the compensated LO phase");
    ver->add_option("--dt", ver_dt, "sample spacing for CSV data");
    ver->add_option("--calibration", ver_cal, "vacuum-calibration JSON for --data");
    ver->add_option("--nmode-eff", ver_nmode, "effective mode count (default: config n_mode)");
    ver->add_option("--z", ver_z, "vacuum band multiplier");
    ver->add_option("--out", ver_out, "write the verdict JSON");
    ver->add_option("--threads", ver_threads, "worker threads");
    ver->callback([&] {
      action = [&] {
        if (ver_config.empty() == ver_data.empty())
          throw InvalidArgument("verification needs exactly one of --config (re-runnable) or --data (compensated)");
        if (!ver_data.empty() && !(ver_nmode > 0.0)) throw InvalidArgument("--data needs --nmode-eff");
        if (!(ver_z > 0.0)) throw InvalidArgument("--z must be positive");
        VerifyOptions vo;
        vo.n_mode_eff = ver_nmode;
        vo.z = ver_z;
        vo.threads = resolve_threads(ver_threads);
        const auto r = result_from_json(read_json_file(ver_result));
        Verification v;
        if (!ver_config.empty()) {
          v = verify_single_mode(config_from_json(read_json_file(ver_config)), r, vo);
        } else {
          auto batch = ingest_batch(ver_data, format_for_path(ver_data), ver_dt);
          if (!ver_cal.empty()) batch.set_sigma0_sq(read_vacuum_calibration(ver_cal));
          v = verify_single_mode(batch, vo);
        }
        const auto j = verification_to_json(v);
        if (!ver_out.empty()) write_json_file(ver_out, j);
        out_ << j.dump() << "\n";
        return kExitOk;
      };
    });

    // predict
    auto* pre = app.add_subcommand("predict", "closed-form accuracy predictions");
    double pre_nwf = 0, pre_nmode = 0, pre_n = -1;
    std::optional<double> pre_target;
    std::string pre_regime = "real", pre_out;
    bool pre_require = false;
    pre->add_option("--nwf", pre_nwf, "number of waveforms")->required();
    pre->add_option("--nmode", pre_nmode, "effective mode count")->required();
    pre->add_option("--n", pre_n, "mean photon number")->required();
    pre->add_option("--target", pre_target, "target infidelity; reports the waveforms required");
    pre->add_option("--regime", pre_regime, "real | complex_upper")->check(CLI::IsMember({"real", "complex_upper"}));
    pre->add_option("--out", pre_out, "also write the JSON to a file");
    pre->add_flag("--require-regime", pre_require, "exit 4 unless sqrt(nmode/nwf)/n <= 0.1");
    pre->callback([&] {
      action = [&] {
        const auto p = predict({pre_nwf, pre_nmode, pre_n});
        auto opt = [](const std::optional<double>& v) -> nlohmann::json { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
        nlohmann::json j = {{"inputs", {{"n_wf", pre_nwf}, {"n_mode", pre_nmode}, {"n", pre_n}}},
                            {"mean_infidelity_real", opt(p.mean_infidelity_real)},
                            {"std_infidelity_real", opt(p.std_infidelity_real)},
                            {"vacuum_dn", p.vacuum_dn},
                            {"mean_dn", opt(p.mean_dn)},
                            {"complex_bounds", p.complex_bounds ? nlohmann::json{p.complex_bounds->lower, p.complex_bounds->upper}
                                                                : nlohmann::json(nullptr)},
                            {"regime_ratio", std::isfinite(p.regime_ratio) ? nlohmann::json(p.regime_ratio) : nlohmann::json(nullptr)},
                            {"regime_ok", p.regime_ok},
                            {"regime_tier", to_string(p.tier)},
                            {"extrapolated", p.extrapolated}};
        if (pre_target) {
          j["required_waveforms"] = required_waveforms(
              *pre_target, pre_nmode, pre_n, pre_regime == "real" ? AccuracyRegime::real : AccuracyRegime::complex_upper);
          j["regime"] = pre_regime;
        }
        if (!pre_out.empty()) write_json_file(pre_out, j);
        out_ << j.dump() << "\n";
        if (pre_require && !p.regime_ok)
          throw DetailedError(StatisticalFloorError("operating point is outside the reliable regime"),
                              {{"regime_ratio", p.regime_ratio}, {"regime_tier", to_string(p.tier)}});
        return kExitOk;
      };
    });

    // sweep
    auto* swp = app.add_subcommand("sweep", "Monte-Carlo accuracy sweep");
    std::string swp_plan, swp_out, swp_summary;
    std::optional<std::uint64_t> swp_seed;
    double swp_threads = 0;
    bool swp_resume = false;
    swp->add_option("--plan", swp_plan, "sweep plan JSON")->required();
    swp->add_option("--out", swp_out, "rows CSV (appended as points finish)")->required();
    swp->add_option("--summary", swp_summary, "model comparison JSON (default: next to --out)");
    swp->add_option("--seed", swp_seed, "base seed (overrides the plan's base_seed)");
    swp->add_option("--threads", swp_threads, "worker threads");
    swp->add_flag("--resume", swp_resume, "keep finished rows already in --out");
    swp->callback([&] {
      action = [&] {
        const unsigned threads = resolve_threads(swp_threads);
        auto j = read_json_file(swp_plan);
        if (swp_seed) j["base_seed"] = *swp_seed;
        const auto plan = sweep_plan_from_json(j);
        SweepOptions so;
        so.threads = threads;
        so.checkpoint_path = swp_out;
        so.resume = swp_resume;
        so.on_row = [&](const SweepRow& r) {
          out_ << nlohmann::json{{"point", r.point_index}, {"n_wf", r.point.n_wf}, {"n_mode", r.point.n_mode},
                                 {"n", r.point.n}, {"failures", r.failures}}
                      .dump()
               << "\n";
        };
        const auto rows = run_sweep(plan, so);
        const auto table = compare_to_model(rows, plan.reconstruction);
        const std::string summary_path =
            swp_summary.empty() ? std::filesystem::path(swp_out).replace_extension(".json").string() : swp_summary;
        write_json_file(summary_path, {{"plan", sweep_plan_to_json(plan)}, {"comparison", comparison_to_json(table)}});
        return kExitOk;
      };
    });

    // report
    auto* rep = app.add_subcommand("report", "draw a figure as SVG plus CSV");
    std::string rep_kind, rep_in, rep_out;
    double rep_nmode = 0, rep_z = 3.0;
    rep->add_option("--kind", rep_kind, "spectrum_histogram | eigenfunctions_overlay | polar_mode | infidelity_vs_nwf")
        ->required()
        ->check(CLI::IsMember({"spectrum_histogram", "eigenfunctions_overlay", "polar_mode", "infidelity_vs_nwf"}));
    rep->add_option("--in", rep_in, "spectrum JSON, result JSON, mode JSON or sweep CSV")->required();
    rep->add_option("--out", rep_out, "SVG path; the CSV is written alongside")->required();
    rep->add_option("--nmode-eff", rep_nmode, "effective mode count for the vacuum band");
    rep->add_option("--z", rep_z, "vacuum band multiplier");
    rep->callback([&] {
      action = [&] {
        if (!(rep_z > 0.0)) throw InvalidArgument("--z must be positive");
        ReportOptions ro;
        ro.n_mode_eff = rep_nmode;
        ro.z = rep_z;
        const auto files = emit_report(figure_kind_from_string(rep_kind), rep_in, rep_out, ro);
        out_ << nlohmann::json{{"status", "ok"}, {"svg", files.svg_path}, {"csv", files.csv_path},
                               {"rows", files.csv_rows}}
                    .dump()
             << "\n";
        return kExitOk;
      };
    });

    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
      out_ << app.help();
      return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
      out_ << app.help("", CLI::AppFormatMode::All);
      return kExitOk;
    } catch (const CLI::CallForVersion&) {
      out_ << "tmr 1.0.0\n";
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      report({{"error", "usage_error"}, {"class", "usage"}, {"message", e.what()}});
      return kExitUsage;
    } catch (const Error& e) {
      return fail(e);
    }
    try {
      return action();
    } catch (const DetailedError& e) {
      nlohmann::json j = error_json(e);
      for (const auto& [k, v] : e.details().items()) j[k] = v;
      report(j);
      return exit_code(e.error_class());
    } catch (const Error& e) {
      return fail(e);
    } catch (const std::exception& e) {
      report({{"error", "internal_error"}, {"class", "data"}, {"message", e.what()}});
      return kExitData;
    }
  }

 private:
  static nlohmann::json error_json(const Error& e) {
    return {{"error", e.code()}, {"class", class_name(e.error_class())}, {"message", e.what()}};
  }
  int fail(const Error& e) {
    report(error_json(e));
    return exit_code(e.error_class());
  }
  void report(const nlohmann::json& j) { err_ << j.dump() << "\n"; }

  std::ostream& out_;
  std::ostream& err_;
};

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return Runner(out, err).run(argc, argv);
}

/// Runs with `args` as the arguments after the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<const char*> argv{"tmr"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace tmr::cli
