#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <sys/wait.h>

#include "tmr/cli.hpp"

using namespace tmr;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out, err;
  nlohmann::json out_json() const { return nlohmann::json::parse(out.substr(0, out.find('\n'))); }
  nlohmann::json err_json() const { return nlohmann::json::parse(err.substr(0, err.find('\n'))); }
};

Outcome tmr_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "tmr_cli_tests";
  fs::create_directories(dir);
  return (dir / name).string();
}

}  // namespace

TEST(Cli, HelpAndVersion) {
  EXPECT_EQ(tmr_run({"--help"}).code, cli::kExitOk);
  const auto v = tmr_run({"--version"});
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("tmr"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {},
           {"bogus"},
           {"predict", "--nwf", "1e4", "--nmode", "100"},
           {"predict", "--nwf", "1e4", "--nmode", "100", "--n", "1", "--frobnicate"},
           {"simulate", "--nwf", "10", "--nsamp", "4", "--seed", "1", "--out", "x.tmrw", "--state", "squeezed"},
           {"report", "--kind", "pie", "--in", "a", "--out", "b"}}) {
    const auto r = tmr_run(args);
    EXPECT_EQ(r.code, cli::kExitUsage);
    EXPECT_TRUE(r.out.empty());
    EXPECT_EQ(r.err_json().at("class"), "usage");
  }
}

TEST(Cli, InvalidValuesAreUsageErrors) {
  const auto r = tmr_run({"predict", "--nwf", "1e4", "--nmode", "100", "--n", "-1"});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_TRUE(r.err_json().contains("message"));
  EXPECT_EQ(tmr_run({"simulate", "--nwf", "10.5", "--nsamp", "4", "--seed", "1", "--out", scratch("y.tmrw")}).code,
            cli::kExitUsage);
  EXPECT_FALSE(fs::exists(scratch("y.tmrw")));
}

TEST(Cli, PredictExamples) {
  const auto r = tmr_run({"predict", "--nwf", "1e4", "--nmode", "200", "--n", "1"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(r.out_json().at("mean_infidelity_real").get<double>(), 0.015, 1e-15);

  const auto b = tmr_run({"predict", "--nwf", "1e6", "--nmode", "100", "--n", "1.1"}).out_json();
  EXPECT_NEAR(b.at("complex_bounds")[0].get<double>(), 1.736e-4, 1e-7);
  EXPECT_NEAR(b.at("complex_bounds")[1].get<double>(), 9.091e-3, 1e-6);

  const auto v = tmr_run({"predict", "--nwf", "1e6", "--nmode", "100", "--n", "0"}).out_json();
  EXPECT_NEAR(v.at("vacuum_dn").get<double>(), 0.01, 1e-15);
  EXPECT_TRUE(v.at("mean_infidelity_real").is_null());

  const auto t = tmr_run({"predict", "--nwf", "1", "--nmode", "200", "--n", "1", "--target", "0.015"}).out_json();
  EXPECT_EQ(t.at("required_waveforms"), 10000);
}

TEST(Cli, RegimeGateIsStatistical) {
  const auto r = tmr_run({"predict", "--nwf", "1e3", "--nmode", "100", "--n", "0.1", "--require-regime"});
  EXPECT_EQ(r.code, cli::kExitStatistical);
  EXPECT_EQ(r.err_json().at("class"), "statistical");
  EXPECT_FALSE(r.out.empty());
}

TEST(Cli, MissingInputIsDataError) {
  const auto r = tmr_run({"reconstruct", "--in", scratch("missing.tmrw"), "--out", scratch("r.json")});
  EXPECT_EQ(r.code, cli::kExitData);
  EXPECT_EQ(r.err_json().at("class"), "data");
}

TEST(Cli, CorruptKernelIsDataError) {
  const auto path = scratch("bad.tmrk");
  write_text_file(path, "TMRK garbage");
  EXPECT_EQ(tmr_run({"spectrum", "--kernel", path, "--out", scratch("s.json")}).code, cli::kExitData);
}

TEST(Cli, SimulateReconstructReport) {
  const auto wf = scratch("photon.tmrw"), mode = scratch("photon_mode.json"), res = scratch("photon_result.json"),
             spec = scratch("photon_spec.json"), cfg = scratch("photon_cfg.json");
  auto sim = tmr_run({"simulate", "--state", "single_photon", "--n", "1", "--shape", "chirped", "--nwf", "100000",
                      "--nsamp", "24", "--seed", "11", "--out", wf, "--mode-out", mode, "--config-out", cfg,
                      "--threads", "2"});
  ASSERT_EQ(sim.code, 0) << sim.err;
  EXPECT_EQ(sim.out_json().at("n_wf"), 100000);

  const auto rec = tmr_run({"reconstruct", "--in", wf, "--out", res, "--target", mode, "--spectrum-out", spec,
                            "--verify-config", cfg, "--threads", "2"});
  ASSERT_EQ(rec.code, 0) << rec.err;
  EXPECT_GT(rec.out_json().at("fidelity").get<double>(), 0.95);
  const auto j = read_json_file(res);
  EXPECT_TRUE(j.contains("candidates"));

  const auto rep = tmr_run({"report", "--kind", "polar_mode", "--in", res, "--out", scratch("polar.svg")});
  ASSERT_EQ(rep.code, 0) << rep.err;
  EXPECT_EQ(rep.out_json().at("rows"), 24);
  EXPECT_TRUE(fs::exists(scratch("polar.csv")));

  const auto hist = tmr_run({"report", "--kind", "spectrum_histogram", "--in", spec, "--out", scratch("hist.svg")});
  EXPECT_EQ(hist.code, 0) << hist.err;
  const auto wrong = tmr_run({"report", "--kind", "infidelity_vs_nwf", "--in", spec, "--out", scratch("w.svg")});
  EXPECT_EQ(wrong.code, cli::kExitUsage);
}

TEST(Cli, VacuumReconstructionIsStatistical) {
  const auto wf = scratch("vac.tmrw");
  ASSERT_EQ(tmr_run({"simulate", "--state", "vacuum", "--nwf", "5000", "--nsamp", "10", "--seed", "3", "--out", wf})
                .code,
            0);
  const auto r = tmr_run({"reconstruct", "--in", wf, "--out", scratch("vac.json")});
  EXPECT_EQ(r.code, cli::kExitStatistical);
  const auto e = r.err_json();
  EXPECT_EQ(e.at("class"), "statistical");
  EXPECT_EQ(e.at("above_vacuum_count"), 0);
  EXPECT_FALSE(fs::exists(scratch("vac.json")));
}

TEST(Cli, OutputsDoNotDependOnThreads) {
  const auto a = scratch("t1.tmrw"), b = scratch("t4.tmrw");
  for (const auto& [path, threads] : {std::pair{a, "1"}, std::pair{b, "4"}})
    ASSERT_EQ(tmr_run({"simulate", "--state", "single_photon", "--nwf", "3000", "--nsamp", "16", "--seed", "9",
                       "--out", path, "--threads", threads})
                  .code,
              0);
  EXPECT_EQ(io::read_bytes(a), io::read_bytes(b));

  const auto ka = scratch("t1.tmrk"), kb = scratch("t4.tmrk");
  ASSERT_EQ(tmr_run({"spectrum", "--in", a, "--out", scratch("s1.json"), "--kernel-out", ka, "--threads", "1"}).code, 0);
  ASSERT_EQ(tmr_run({"spectrum", "--in", a, "--out", scratch("s4.json"), "--kernel-out", kb, "--threads", "4"}).code, 0);
  EXPECT_EQ(io::read_bytes(ka), io::read_bytes(kb));
  EXPECT_EQ(io::read_bytes(scratch("s1.json")), io::read_bytes(scratch("s4.json")));
}

TEST(Cli, SweepWritesRowsAndSummary) {
  const auto plan = scratch("plan.json"), out = scratch("sweep.csv");
  write_text_file(plan, R"({"axis": "n_wf", "axis_values": [2000, 4000], "fixed": {"n_mode": 16, "n": 1.0},
                            "trials_per_point": 8, "base_seed": 1})");
  fs::remove(out);
  const auto r = tmr_run({"sweep", "--plan", plan, "--out", out, "--seed", "5", "--threads", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = decode_sweep_csv(io::read_bytes(out), out);
  EXPECT_EQ(rows.size(), 2u);
  const auto summary = read_json_file(scratch("sweep.json"));
  EXPECT_EQ(summary.at("plan").at("base_seed"), 5);
  EXPECT_EQ(summary.at("comparison").at("rows").size(), 2u);

  const auto rep = tmr_run({"report", "--kind", "infidelity_vs_nwf", "--in", out, "--out", scratch("inf.svg")});
  EXPECT_EQ(rep.code, 0) << rep.err;
  EXPECT_EQ(rep.out_json().at("rows"), 2);
}

TEST(Cli, BinaryExitCodes) {
  const std::string bin = TMR_CLI_PATH;
  if (!fs::exists(bin)) GTEST_SKIP() << "CLI binary not built";
  auto status = [&](const std::string& args) {
    const int s = std::system((bin + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  EXPECT_EQ(status("predict --nwf 1e4 --nmode 200 --n 1"), 0);
  EXPECT_EQ(status("predict --nwf 1e4"), 2);
  EXPECT_EQ(status("spectrum --kernel /nonexistent.tmrk --out /dev/null"), 3);
  EXPECT_EQ(status("predict --nwf 1e3 --nmode 100 --n 0.1 --require-regime"), 4);
}
