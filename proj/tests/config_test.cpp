#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "trustcons/config.hpp"

using namespace trustcons;
using nlohmann::json;

namespace fs = std::filesystem;

namespace {

std::string error_key(const json& doc) {
  try {
    parse_scenario(doc);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<no error>";
}

fs::path temp_file(const std::string& name, const std::string& content) {
  const fs::path dir = fs::temp_directory_path() / "trustcons_config_test";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << content;
  return p;
}

}  // namespace

TEST(Config, Defaults) {
  const auto f = parse_scenario(json::object());
  const auto& cfg = f.scenario.config;
  EXPECT_EQ(cfg.topology.n_legit(), 15u);
  EXPECT_EQ(cfg.topology.n_malicious(), 15u);
  EXPECT_EQ(cfg.x_legit_init, paper_initial_values());
  EXPECT_EQ(cfg.kappa, 10.0);
  EXPECT_EQ(cfg.eta, 5.0);
  EXPECT_EQ(cfg.T0, 0);
  EXPECT_EQ(cfg.horizon, 500);
  EXPECT_EQ(f.steps_after_T0, 500);
  EXPECT_DOUBLE_EQ(cfg.trust.width(), 0.4);
  EXPECT_TRUE(std::holds_alternative<MaxDeviation>(cfg.attack));
  EXPECT_EQ(f.scenario.trials, 1u);
  EXPECT_DOUBLE_EQ(f.scenario.delta, 0.05);
  EXPECT_FALSE(f.sweep.has_value());
  EXPECT_EQ(f.effective["horizon"], 500);
  EXPECT_EQ(f.effective["topology"], "paper");
}

TEST(Config, HorizonCountsStepsAfterT0) {
  const auto f = parse_scenario(json{{"T0", 40}, {"horizon", 100}});
  EXPECT_EQ(f.scenario.config.horizon, 140);
}

TEST(Config, ShippedPaperConfig) {
  const auto f = load_scenario(fs::path(TRUSTCONS_SOURCE_DIR) / "configs" / "paper.cfg");
  ASSERT_TRUE(f.sweep.has_value());
  const SweepSpec ref = paper_sweep(100, 42);
  EXPECT_EQ(f.sweep->T0, ref.T0);
  EXPECT_EQ(f.sweep->n_malicious, ref.n_malicious);
  EXPECT_EQ(f.sweep->ell, ref.ell);
  ASSERT_EQ(f.sweep->attacks.size(), 2u);
  EXPECT_EQ(attack_name(f.sweep->attacks[1]), "drift");
  EXPECT_EQ(f.scenario.trials, 100u);
  EXPECT_EQ(f.scenario.config.seed, 42u);
  const Scenario a = sweep_cell(*f.sweep, Drift{}, 30, 0.6, 100);
  const Scenario b = sweep_cell(ref, Drift{}, 30, 0.6, 100);
  EXPECT_EQ(a.config.horizon, b.config.horizon);
  EXPECT_EQ(a.config.x_legit_init, b.config.x_legit_init);
  EXPECT_EQ(a.config.topology.malicious_connectivity(), b.config.topology.malicious_connectivity());
  EXPECT_EQ(a.config.seed, b.config.seed);
}

TEST(Config, CustomTopology) {
  json doc = {{"topology", {{"n_legit", 3}, {"adjacency", {"010", "101", "010"}}}},
              {"n_malicious", 2},
              {"malicious_neighbors", {{0}, {1, 2}}},
              {"x_legit_init", {1.0, 2.0, 3.0}},
              {"x_malicious_init", {0.5, -0.5}},
              {"attack", {{"type", "constant"}, {"values", {1.0, -1.0}}}}};
  const auto f = parse_scenario(doc);
  EXPECT_EQ(f.scenario.config.topology.n_agents(), 5u);
  EXPECT_EQ(f.scenario.config.topology.malicious_connectivity(), (NeighborLists{{0}, {1, 2}}));
  EXPECT_EQ(std::get<ConstantVector>(f.scenario.config.attack).values, (std::vector<double>{1.0, -1.0}));

  json edges = {{"topology", {{"n_legit", 3}, {"edges", {{0, 1}, {1, 2}}}}}, {"x_legit_init", {0, 0, 0}}};
  const auto g = parse_scenario(edges);
  EXPECT_EQ(g.scenario.config.topology.legit_adjacency(), f.scenario.config.topology.legit_adjacency());
  EXPECT_EQ(g.scenario.config.topology.n_malicious(), 0u);
}

TEST(Config, ErrorsNameTheKey) {
  EXPECT_EQ(error_key({{"kapa", 3}}), "kapa");
  EXPECT_EQ(error_key({{"kappa", -1}}), "kappa");
  EXPECT_EQ(error_key({{"kappa", "ten"}}), "kappa");
  EXPECT_EQ(error_key({{"eta", 0}}), "eta");
  EXPECT_EQ(error_key({{"T0", -2}}), "T0");
  EXPECT_EQ(error_key({{"T0", 1.5}}), "T0");
  EXPECT_EQ(error_key({{"horizon", -1}}), "horizon");
  EXPECT_EQ(error_key({{"trials", 0}}), "trials");
  EXPECT_EQ(error_key({{"seed", -4}}), "seed");
  EXPECT_EQ(error_key({{"delta", 1.0}}), "delta");
  EXPECT_EQ(error_key({{"alpha_width", 1.5}}), "alpha_width");
  EXPECT_EQ(error_key({{"alpha_mean_legit", 0.4}}), "alpha_mean_legit");
  EXPECT_EQ(error_key({{"alpha_mean_malicious", 0.6}}), "alpha_mean_malicious");
  EXPECT_EQ(error_key({{"alpha_dist", "normal"}}), "alpha_dist");
  EXPECT_EQ(error_key({{"topology", "ring"}}), "topology");
  EXPECT_EQ(error_key({{"topology", {{"n_legit", 2}, {"adjacency", {"01", "1"}}}}, {"x_legit_init", {0, 0}}}),
            "topology.adjacency[1]");
  EXPECT_EQ(error_key({{"topology", {{"n_legit", 2}, {"adjacency", {"01", "00"}}}}, {"x_legit_init", {0, 0}}}),
            "topology");
  EXPECT_EQ(error_key({{"topology", {{"n_legit", 2}, {"edges", {{0, 1}}}}}}), "x_legit_init");
  EXPECT_EQ(error_key({{"topology", {{"n_legit", 2}, {"edges", {{0, 1}}}, {"weights", 1}}}}), "topology.weights");
  EXPECT_EQ(error_key({{"x_legit_init", {1, 2}}}), "x_legit_init");
  EXPECT_EQ(error_key({{"n_malicious", 2}, {"x_malicious_init", {1}}}), "x_malicious_init");
  EXPECT_EQ(error_key({{"n_malicious", 2}, {"malicious_neighbors", {{0}}}}), "malicious_neighbors");
  EXPECT_EQ(error_key({{"attack", "flood"}}), "attack");
  EXPECT_EQ(error_key({{"attack", {{"type", "max_deviation"}, {"sign", 3}}}}), "attack.sign");
  EXPECT_EQ(error_key({{"n_malicious", 2}, {"attack", {{"type", "constant"}, {"values", {1}}}}}), "attack.values");
  EXPECT_EQ(error_key({{"sweep", {{"ell", {0.2, 2.0}}}}}), "sweep.ell[1]");
  EXPECT_EQ(error_key({{"sweep", {{"T0", json::array()}}}}), "sweep.T0");
  EXPECT_EQ(error_key({{"sweep", {{"attack", {"drift", "nope"}}}}}), "sweep.attack[1]");
  EXPECT_EQ(error_key({{"sweep", {{"grid", 1}}}}), "sweep.grid");
  EXPECT_EQ(error_key({{"early_stop", 1}}), "early_stop");
}

TEST(Config, MessageContainsKey) {
  try {
    parse_scenario({{"kappa", -1}});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("kappa"), std::string::npos);
  }
}

TEST(Config, AttackRoundTrip) {
  const std::vector<AttackModel> models{MaxDeviation{-1}, Drift{0.2, 0.5, 0.1}, ConstantVector{{1, 2}}, Silent{}};
  for (const auto& m : models) {
    const AttackModel back = attack_from_json(attack_to_json(m), "attack");
    EXPECT_EQ(attack_to_json(back), attack_to_json(m));
  }
  EXPECT_TRUE(std::holds_alternative<Drift>(attack_from_json("drift", "a")));
}

TEST(Config, HashIsStable) {
  const auto a = parse_scenario(json{{"seed", 3}}).effective;
  const auto b = parse_scenario(json{{"seed", 3}, {"kappa", 10}}).effective;
  const auto c = parse_scenario(json{{"seed", 4}}).effective;
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_NE(config_hash(a), config_hash(c));
  EXPECT_EQ(config_hash(a).size(), 16u);
}

TEST(Config, FnvKnownVector) {
  // FNV-1a 64 of "{}".
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : std::string("{}")) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  EXPECT_EQ(config_hash(json::object()), buf);
}

TEST(Config, Manifest) {
  const auto f = parse_scenario(json{{"seed", 12}});
  const fs::path p = fs::temp_directory_path() / "trustcons_config_test" / "manifest.json";
  fs::create_directories(p.parent_path());
  write_manifest(p, f.effective, 12);
  const json m = read_json(p);
  EXPECT_EQ(m["seed"], 12);
  EXPECT_EQ(m["config_hash"], config_hash(f.effective));
  EXPECT_EQ(m["config"], f.effective);
  EXPECT_THROW(write_manifest("/nonexistent_dir/x/manifest.json", f.effective, 1), IoError);
}

TEST(Config, FileErrors) {
  EXPECT_THROW(load_scenario("/nonexistent/scenario.cfg"), IoError);
  const auto bad = temp_file("bad.cfg", "{ \"kappa\": ");
  EXPECT_THROW(load_scenario(bad), ConfigError);
  const auto wrong = temp_file("wrong.cfg", "{ \"kappa\": -3 }");
  try {
    load_scenario(wrong);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "kappa");
    EXPECT_NE(std::string(e.what()).find("wrong.cfg"), std::string::npos);
  }
}
