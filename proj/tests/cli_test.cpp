#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "trustcons/cli.hpp"

using namespace trustcons;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "trustcons");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string paper_cfg() { return (fs::path(TRUSTCONS_SOURCE_DIR) / "configs" / "paper.cfg").string(); }

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "trustcons_cli_test" / name;
  fs::remove_all(p);
  fs::create_directories(p.parent_path());
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

fs::path write_cfg(const std::string& name, const std::string& content) {
  const fs::path p = scratch(name);
  std::ofstream(p) << content;
  return p;
}

}  // namespace

TEST(Cli, SpectralOnPaperConfig) {
  const auto r = cli({"spectral", "--config", paper_cfg()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::size_t count = 0;
  for (std::size_t pos = r.out.find("6.666666666666667e-02"); pos != std::string::npos;
       pos = r.out.find("6.666666666666667e-02", pos + 1))
    ++count;
  EXPECT_EQ(count, 15u);
  EXPECT_NE(r.out.find("nominal -9.91266666666667"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("rho2 "), std::string::npos);

  const auto j = cli({"spectral", "--config", paper_cfg(), "--format", "json"});
  ASSERT_EQ(j.code, 0);
  const auto doc = nlohmann::json::parse(j.out);
  EXPECT_EQ(doc["v"].size(), 15u);
  EXPECT_NEAR(doc["nominal"].get<double>(), -0.9913, 1e-4);
  EXPECT_TRUE(doc["primitive"].get<bool>());
}

TEST(Cli, BoundsWithT0Override) {
  const fs::path dir = scratch("bounds");
  const auto r = cli({"bounds", "--config", paper_cfg(), "--t0", "150", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string csv = slurp(dir / "bounds.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "t_or_T0,hoeffding_legit,hoeffding_malicious,bennett_legit,bennett_malicious,prob_not_ideal,g_legit,"
            "g_malicious,delta_max,rate_bound,expected_rate_bound");
  EXPECT_EQ(count_lines(csv), 502u);
  // rate_bound is blank (nan) before T0-1 = 149 and defined from there on.
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  for (int k = 0; k <= 148; ++k) std::getline(in, line);
  EXPECT_EQ(line.rfind("148,", 0), 0u);
  EXPECT_EQ(line.substr(line.size() - 8), ",nan,nan");
  std::getline(in, line);
  EXPECT_EQ(line.rfind("149,", 0), 0u);
  EXPECT_EQ(line.substr(line.size() - 4), ",nan");
  EXPECT_NE(line.substr(line.size() - 8), ",nan,nan");
}

TEST(Cli, MissingConfigExitsOne) {
  const auto r = cli({"simulate", "--config", "/no/such/file.cfg"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("/no/such/file.cfg"), std::string::npos);
}

TEST(Cli, InvalidConfigNamesKey) {
  const auto cfg = write_cfg("bad.cfg", R"({"kappa": -2})");
  const auto r = cli({"simulate", "--config", cfg.string(), "--out", scratch("bad_out").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("kappa"), std::string::npos);
  const auto typo = write_cfg("typo.cfg", R"({"trails": 3})");
  const auto t = cli({"simulate", "--config", typo.string()});
  EXPECT_EQ(t.code, 1);
  EXPECT_NE(t.err.find("trails"), std::string::npos);
}

TEST(Cli, BadFlagsExitOne) {
  EXPECT_EQ(cli({}).code, 1);
  EXPECT_EQ(cli({"simulate", "--format", "xml"}).code, 1);
  EXPECT_EQ(cli({"launch"}).code, 1);
  EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST(Cli, UnwritableOutputExitsTwo) {
  const fs::path blocker = scratch("blocker");
  std::ofstream(blocker) << "file";
  const auto r = cli({"simulate", "--out", (blocker / "sub").string(), "--trials", "1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("blocker"), std::string::npos);
}

TEST(Cli, SimulateWritesOutputsAndOverridesWin) {
  const auto cfg = write_cfg("sim.cfg", R"({"n_malicious": 5, "T0": 10, "horizon": 40, "seed": 3, "trials": 4})");
  const fs::path dir = scratch("sim");
  const auto r = cli({"simulate", "--config", cfg.string(), "--out", dir.string(), "--seed", "77", "--trials", "1",
                      "--t0", "20"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(manifest["seed"], 77);
  EXPECT_EQ(manifest["config"]["trials"], 1);
  EXPECT_EQ(manifest["config"]["T0"], 20);
  EXPECT_EQ(manifest["config"]["n_malicious"], 5);
  EXPECT_EQ(manifest["config_hash"].get<std::string>().size(), 16u);
  const std::string summary = slurp(dir / "summary.csv");
  EXPECT_EQ(count_lines(summary), 1u + 42u);  // t = 19 .. 60
  EXPECT_EQ(count_lines(slurp(dir / "trace.csv")), 1u + 42u * 15u);
  EXPECT_TRUE(fs::exists(dir / "trace_summary.csv"));

  const fs::path many = scratch("sim_many");
  ASSERT_EQ(cli({"simulate", "--config", cfg.string(), "--out", many.string(), "--traces"}).code, 0);
  for (int k = 0; k < 4; ++k) EXPECT_TRUE(fs::exists(many / ("trace_" + std::to_string(k) + ".csv")));
  EXPECT_FALSE(fs::exists(many / "trace.csv"));
}

TEST(Cli, JsonSummary) {
  const fs::path dir = scratch("json");
  ASSERT_EQ(cli({"simulate", "--out", dir.string(), "--format", "json", "--t0", "5"}).code, 0);
  const auto rows = nlohmann::json::parse(slurp(dir / "summary.json"));
  ASSERT_EQ(rows.size(), 502u);
  EXPECT_EQ(rows[0]["t"], 4);
  EXPECT_EQ(rows[0]["attack"], "max_deviation");
}

TEST(Cli, EnvironmentOutputDir) {
  const fs::path dir = scratch("env");
  ::setenv("TRUSTCONS_OUT_DIR", dir.string().c_str(), 1);
  const auto r = cli({"simulate", "--t0", "3"});
  ::unsetenv("TRUSTCONS_OUT_DIR");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "summary.csv"));
}

TEST(Cli, SweepAndJobs) {
  const auto cfg = write_cfg("sweep.cfg", R"({"trials": 3, "horizon": 30, "seed": 5,
    "sweep": {"T0": [0, 10], "n_malicious": [5], "ell": [0.2, 0.4], "attack": ["max_deviation", "drift"]}})");
  const fs::path a = scratch("sweep_a"), b = scratch("sweep_b");
  ASSERT_EQ(cli({"sweep", "--config", cfg.string(), "--out", a.string()}).code, 0);
  ASSERT_EQ(cli({"sweep", "--config", cfg.string(), "--out", b.string(), "--jobs", "3"}).code, 0);
  const std::string sa = slurp(a / "summary.csv");
  EXPECT_EQ(sa, slurp(b / "summary.csv"));
  EXPECT_EQ(count_lines(sa), 1u + 2 * 2 * (32 + 32));

  const auto no_sweep = write_cfg("nosweep.cfg", R"({"trials": 2})");
  const auto r = cli({"sweep", "--config", no_sweep.string(), "--out", scratch("ns").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("sweep"), std::string::npos);
}

TEST(Cli, PaperReproDeterministic) {
  const fs::path a = scratch("repro_a"), b = scratch("repro_b");
  ASSERT_EQ(cli({"paper-repro", "--seed", "42", "--trials", "2", "--out", a.string()}).code, 0);
  ASSERT_EQ(cli({"paper-repro", "--seed", "42", "--trials", "2", "--out", b.string(), "--jobs", "2"}).code, 0);
  const std::string sa = slurp(a / "summary.csv");
  EXPECT_EQ(sa, slurp(b / "summary.csv"));
  EXPECT_EQ(slurp(a / "manifest.json"), slurp(b / "manifest.json"));
  EXPECT_EQ(slurp(a / "bounds.csv"), slurp(b / "bounds.csv"));
  // 2 attacks x 3 |M| x 3 ell x T0 in {0,25,50,100,150}, 502 rows each.
  EXPECT_EQ(count_lines(sa), 1u + 18u * 5u * 502u);
}
