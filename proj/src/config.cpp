#include "trustcons/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "trustcons/attacks.hpp"

namespace trustcons {

using nlohmann::json;

ConfigError::ConfigError(std::string key, const std::string& message)
    : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}

namespace {

const std::set<std::string> kTopLevelKeys = {
    "topology",  "n_malicious", "malicious_neighbors", "alpha_dist", "alpha_mean_legit", "alpha_mean_malicious",
    "alpha_width", "kappa",     "eta",                 "T0",         "horizon",          "x_legit_init",
    "x_malicious_init", "attack", "trials",            "seed",       "out_dir",          "delta",
    "early_stop", "sweep"};

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& prefix) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError(prefix + key, "unknown key");
  }
}

double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(key, "expected a finite number");
  return x;
}

long as_integer(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
  return v.get<long>();
}

std::size_t as_count(const json& v, const std::string& key) {
  const long n = as_integer(v, key);
  if (n < 0) throw ConfigError(key, "expected a non-negative integer");
  return static_cast<std::size_t>(n);
}

std::vector<double> as_numbers(const json& v, const std::string& key) {
  if (!v.is_array()) throw ConfigError(key, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(as_number(v[k], key + "[" + std::to_string(k) + "]"));
  return out;
}

template <typename T, typename Fn>
std::vector<T> as_list(const json& v, const std::string& key, Fn&& item) {
  if (!v.is_array() || v.empty()) throw ConfigError(key, "expected a non-empty array");
  std::vector<T> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(item(v[k], key + "[" + std::to_string(k) + "]"));
  return out;
}

struct ParsedTopology {
  std::size_t n_legit = 0;
  Adjacency adjacency;
  bool paper = false;
};

ParsedTopology parse_topology(const json& v, json& effective) {
  ParsedTopology out;
  if (v.is_string()) {
    if (v.get<std::string>() != "paper") throw ConfigError("topology", "unknown preset '" + v.get<std::string>() + "'");
    out.paper = true;
    out.adjacency = paper_topology(0).legit_adjacency();
    out.n_legit = out.adjacency.size();
    effective["topology"] = "paper";
    return out;
  }
  if (!v.is_object()) throw ConfigError("topology", "expected \"paper\" or an object");
  reject_unknown(v, {"n_legit", "adjacency", "edges"}, "topology.");
  if (!v.contains("n_legit")) throw ConfigError("topology.n_legit", "missing");
  out.n_legit = as_count(v["n_legit"], "topology.n_legit");
  if (out.n_legit == 0) throw ConfigError("topology.n_legit", "must be positive");
  const bool has_adj = v.contains("adjacency");
  const bool has_edges = v.contains("edges");
  if (has_adj == has_edges) throw ConfigError("topology", "give exactly one of adjacency or edges");
  if (has_adj) {
    const json& rows = v["adjacency"];
    if (!rows.is_array() || rows.size() != out.n_legit) {
      throw ConfigError("topology.adjacency", "expected " + std::to_string(out.n_legit) + " bit-string rows");
    }
    out.adjacency.assign(out.n_legit, std::vector<bool>(out.n_legit, false));
    for (std::size_t i = 0; i < out.n_legit; ++i) {
      const std::string key = "topology.adjacency[" + std::to_string(i) + "]";
      if (!rows[i].is_string()) throw ConfigError(key, "expected a string of 0 and 1");
      const std::string row = rows[i].get<std::string>();
      if (row.size() != out.n_legit) throw ConfigError(key, "expected " + std::to_string(out.n_legit) + " characters");
      for (std::size_t j = 0; j < out.n_legit; ++j) {
        if (row[j] != '0' && row[j] != '1') throw ConfigError(key, "expected only 0 and 1");
        out.adjacency[i][j] = row[j] == '1';
      }
    }
  } else {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    const json& list = v["edges"];
    if (!list.is_array()) throw ConfigError("topology.edges", "expected an array of pairs");
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string key = "topology.edges[" + std::to_string(k) + "]";
      if (!list[k].is_array() || list[k].size() != 2) throw ConfigError(key, "expected a pair");
      edges.emplace_back(as_count(list[k][0], key), as_count(list[k][1], key));
    }
    try {
      out.adjacency = adjacency_from_edges(out.n_legit, edges);
    } catch (const std::exception& e) {
      throw ConfigError("topology.edges", e.what());
    }
  }
  effective["topology"] = v;
  return out;
}

}  // namespace

nlohmann::json attack_to_json(const AttackModel& attack) {
  json out;
  out["type"] = attack_name(attack);
  if (const auto* m = std::get_if<MaxDeviation>(&attack)) out["sign"] = m->sign;
  if (const auto* d = std::get_if<Drift>(&attack)) {
    out["weight"] = d->weight;
    out["decay_base"] = d->decay_base;
    out["decay_rate"] = d->decay_rate;
  }
  if (const auto* c = std::get_if<ConstantVector>(&attack)) out["values"] = c->values;
  return out;
}

AttackModel attack_from_json(const nlohmann::json& value, const std::string& key) {
  std::string type;
  const json* obj = nullptr;
  if (value.is_string()) {
    type = value.get<std::string>();
  } else if (value.is_object()) {
    if (!value.contains("type") || !value["type"].is_string()) throw ConfigError(key + ".type", "missing attack type");
    type = value["type"].get<std::string>();
    obj = &value;
  } else {
    throw ConfigError(key, "expected an attack name or object");
  }
  auto check_keys = [&](const std::set<std::string>& allowed) {
    if (obj) reject_unknown(*obj, allowed, key + ".");
  };
  if (type == "max_deviation") {
    check_keys({"type", "sign"});
    MaxDeviation m;
    if (obj && obj->contains("sign")) {
      m.sign = static_cast<int>(as_integer((*obj)["sign"], key + ".sign"));
      if (m.sign < -1 || m.sign > 1) throw ConfigError(key + ".sign", "must be -1, 0 or 1");
    }
    return m;
  }
  if (type == "drift") {
    check_keys({"type", "weight", "decay_base", "decay_rate"});
    Drift d;
    if (obj && obj->contains("weight")) d.weight = as_number((*obj)["weight"], key + ".weight");
    if (obj && obj->contains("decay_base")) d.decay_base = as_number((*obj)["decay_base"], key + ".decay_base");
    if (obj && obj->contains("decay_rate")) d.decay_rate = as_number((*obj)["decay_rate"], key + ".decay_rate");
    return d;
  }
  if (type == "constant") {
    check_keys({"type", "values"});
    if (!obj || !obj->contains("values")) throw ConfigError(key + ".values", "constant attack needs values");
    return ConstantVector{as_numbers((*obj)["values"], key + ".values")};
  }
  if (type == "silent") {
    check_keys({"type"});
    return Silent{};
  }
  throw ConfigError(key, "unknown attack '" + type + "'");
}

ScenarioFile parse_scenario(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("", "scenario must be a JSON object");
  reject_unknown(doc, kTopLevelKeys, "");

  ScenarioFile file;
  json& eff = file.effective;
  SimulationConfig& cfg = file.scenario.config;

  const ParsedTopology topo = parse_topology(doc.value("topology", json("paper")), eff);

  const std::size_t n_mal =
      doc.contains("n_malicious") ? as_count(doc["n_malicious"], "n_malicious") : (topo.paper ? 15 : 0);
  eff["n_malicious"] = n_mal;

  NeighborLists mal_conn;
  const json mal_value = doc.value("malicious_neighbors", json("all"));
  if (mal_value.is_string()) {
    if (mal_value.get<std::string>() != "all") throw ConfigError("malicious_neighbors", "expected \"all\" or lists");
    mal_conn = fully_connected_malicious(n_mal, topo.n_legit);
  } else if (mal_value.is_array()) {
    if (mal_value.size() != n_mal) {
      throw ConfigError("malicious_neighbors", "expected " + std::to_string(n_mal) + " lists");
    }
    for (std::size_t m = 0; m < n_mal; ++m) {
      const std::string key = "malicious_neighbors[" + std::to_string(m) + "]";
      if (!mal_value[m].is_array()) throw ConfigError(key, "expected an array of legitimate indices");
      std::vector<std::size_t> nbrs;
      for (const auto& e : mal_value[m]) nbrs.push_back(as_count(e, key));
      mal_conn.push_back(std::move(nbrs));
    }
  } else {
    throw ConfigError("malicious_neighbors", "expected \"all\" or lists");
  }
  eff["malicious_neighbors"] = mal_value;
  try {
    cfg.topology = build_topology(topo.n_legit, n_mal, topo.adjacency, mal_conn);
  } catch (const std::exception& e) {
    throw ConfigError(mal_value.is_array() ? "malicious_neighbors" : "topology", e.what());
  }

  const std::string dist = doc.contains("alpha_dist") ? [&] {
    if (!doc["alpha_dist"].is_string()) throw ConfigError("alpha_dist", "expected a string");
    return doc["alpha_dist"].get<std::string>();
  }() : std::string("uniform");
  const double mean_l =
      doc.contains("alpha_mean_legit") ? as_number(doc["alpha_mean_legit"], "alpha_mean_legit") : 0.55;
  const double mean_m =
      doc.contains("alpha_mean_malicious") ? as_number(doc["alpha_mean_malicious"], "alpha_mean_malicious") : 0.45;
  if (!(mean_l > 0.5 && mean_l <= 1.0)) throw ConfigError("alpha_mean_legit", "must lie in (0.5, 1]");
  if (!(mean_m >= 0.0 && mean_m < 0.5)) throw ConfigError("alpha_mean_malicious", "must lie in [0, 0.5)");
  eff["alpha_dist"] = dist;
  eff["alpha_mean_legit"] = mean_l;
  eff["alpha_mean_malicious"] = mean_m;
  if (dist == "uniform") {
    const double width = doc.contains("alpha_width") ? as_number(doc["alpha_width"], "alpha_width") : 0.4;
    try {
      cfg.trust = TrustParams::uniform(mean_l, mean_m, width);
    } catch (const std::exception& e) {
      throw ConfigError("alpha_width", e.what());
    }
    eff["alpha_width"] = width;
  } else if (dist == "bernoulli") {
    if (doc.contains("alpha_width")) throw ConfigError("alpha_width", "not used by the bernoulli distribution");
    cfg.trust = TrustParams::bernoulli(mean_l, mean_m);
  } else {
    throw ConfigError("alpha_dist", "unknown distribution '" + dist + "'");
  }

  cfg.kappa = doc.contains("kappa") ? as_number(doc["kappa"], "kappa") : 10.0;
  if (!(cfg.kappa > 0.0)) throw ConfigError("kappa", "must be positive");
  cfg.eta = doc.contains("eta") ? as_number(doc["eta"], "eta") : 5.0;
  if (!(cfg.eta > 0.0)) throw ConfigError("eta", "must be positive");
  cfg.T0 = doc.contains("T0") ? as_integer(doc["T0"], "T0") : 0;
  if (cfg.T0 < 0) throw ConfigError("T0", "must be non-negative");
  file.steps_after_T0 = doc.contains("horizon") ? as_integer(doc["horizon"], "horizon") : 500;
  if (file.steps_after_T0 < 0) throw ConfigError("horizon", "must be non-negative");
  cfg.horizon = cfg.T0 + file.steps_after_T0;
  eff["kappa"] = cfg.kappa;
  eff["eta"] = cfg.eta;
  eff["T0"] = cfg.T0;
  eff["horizon"] = file.steps_after_T0;

  if (doc.contains("x_legit_init")) {
    cfg.x_legit_init = as_numbers(doc["x_legit_init"], "x_legit_init");
  } else if (topo.paper) {
    cfg.x_legit_init = paper_initial_values();
  } else {
    throw ConfigError("x_legit_init", "required for a custom topology");
  }
  if (cfg.x_legit_init.size() != topo.n_legit) {
    throw ConfigError("x_legit_init", "expected " + std::to_string(topo.n_legit) + " values");
  }
  for (double x : cfg.x_legit_init) {
    if (std::abs(x) > cfg.eta) throw ConfigError("x_legit_init", "values must lie in [-eta, eta]");
  }
  eff["x_legit_init"] = cfg.x_legit_init;
  if (doc.contains("x_malicious_init")) {
    cfg.x_malicious_init = as_numbers(doc["x_malicious_init"], "x_malicious_init");
    if (cfg.x_malicious_init.size() != n_mal) {
      throw ConfigError("x_malicious_init", "expected " + std::to_string(n_mal) + " values");
    }
    eff["x_malicious_init"] = cfg.x_malicious_init;
  }

  cfg.attack = doc.contains("attack") ? attack_from_json(doc["attack"], "attack") : AttackModel{MaxDeviation{}};
  if (const auto* c = std::get_if<ConstantVector>(&cfg.attack); c && c->values.size() != n_mal) {
    throw ConfigError("attack.values", "expected " + std::to_string(n_mal) + " values");
  }
  eff["attack"] = attack_to_json(cfg.attack);

  file.scenario.trials = doc.contains("trials") ? as_count(doc["trials"], "trials") : 1;
  if (file.scenario.trials < 1) throw ConfigError("trials", "must be at least 1");
  if (doc.contains("seed")) {
    const json& seed = doc["seed"];
    if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<long long>() < 0)) {
      throw ConfigError("seed", "expected a non-negative integer");
    }
    cfg.seed = seed.get<std::uint64_t>();
  }
  file.scenario.delta = doc.contains("delta") ? as_number(doc["delta"], "delta") : 0.05;
  if (!(file.scenario.delta > 0.0 && file.scenario.delta < 1.0)) throw ConfigError("delta", "must lie in (0, 1)");
  if (doc.contains("out_dir")) {
    if (!doc["out_dir"].is_string()) throw ConfigError("out_dir", "expected a string");
    file.scenario.out_dir = doc["out_dir"].get<std::string>();
  }
  if (doc.contains("early_stop")) {
    if (!doc["early_stop"].is_boolean()) throw ConfigError("early_stop", "expected true or false");
    cfg.early_stop = doc["early_stop"].get<bool>();
  }
  eff["trials"] = file.scenario.trials;
  eff["seed"] = cfg.seed;
  eff["delta"] = file.scenario.delta;
  eff["out_dir"] = file.scenario.out_dir;
  eff["early_stop"] = cfg.early_stop;

  try {
    cfg.validate();
  } catch (const std::exception& e) {
    throw ConfigError("", e.what());
  }

  if (doc.contains("sweep")) {
    const json& s = doc["sweep"];
    if (!s.is_object()) throw ConfigError("sweep", "expected an object");
    reject_unknown(s, {"T0", "ell", "n_malicious", "attack"}, "sweep.");
    SweepSpec spec;
    spec.base = file.scenario;
    spec.steps_after_T0 = file.steps_after_T0;
    spec.T0 = s.contains("T0") ? as_list<long>(s["T0"], "sweep.T0",
                                               [](const json& v, const std::string& k) {
                                                 const long t = as_integer(v, k);
                                                 if (t < 0) throw ConfigError(k, "must be non-negative");
                                                 return t;
                                               })
                               : std::vector<long>{cfg.T0};
    spec.n_malicious = s.contains("n_malicious")
                           ? as_list<std::size_t>(s["n_malicious"], "sweep.n_malicious", as_count)
                           : std::vector<std::size_t>{n_mal};
    spec.ell = s.contains("ell") ? as_list<double>(s["ell"], "sweep.ell", as_number)
                                 : std::vector<double>{cfg.trust.width()};
    spec.attacks = s.contains("attack") ? as_list<AttackModel>(s["attack"], "sweep.attack", attack_from_json)
                                        : std::vector<AttackModel>{cfg.attack};
    if (cfg.trust.kind() != AlphaDistribution::uniform && s.contains("ell")) {
      throw ConfigError("sweep.ell", "requires alpha_dist uniform");
    }
    for (std::size_t k = 0; k < spec.ell.size(); ++k) {
      try {
        (void)TrustParams::uniform(mean_l, mean_m, spec.ell[k]);
      } catch (const std::exception& e) {
        throw ConfigError("sweep.ell[" + std::to_string(k) + "]", e.what());
      }
    }
    for (std::size_t k = 0; k < spec.n_malicious.size(); ++k) {
      const bool constant = std::holds_alternative<ConstantVector>(cfg.attack) && !s.contains("attack");
      if (constant && spec.n_malicious[k] != n_mal) {
        throw ConfigError("sweep.n_malicious[" + std::to_string(k) + "]", "constant attack fixes |M|");
      }
    }
    json es;
    es["T0"] = spec.T0;
    es["n_malicious"] = spec.n_malicious;
    es["ell"] = spec.ell;
    es["attack"] = json::array();
    for (const auto& a : spec.attacks) es["attack"].push_back(attack_to_json(a));
    eff["sweep"] = es;
    file.sweep = std::move(spec);
  }
  return file;
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", path.string() + ": " + e.what());
  }
}

ScenarioFile load_scenario(const std::filesystem::path& path) {
  try {
    return parse_scenario(read_json(path));
  } catch (const ConfigError& e) {
    throw ConfigError(e.key(), std::string(e.what()) + " (in " + path.string() + ")");
  }
}

Scenario paper_scenario(std::size_t n_malicious, double ell, long T0, const AttackModel& attack, std::size_t trials,
                        std::uint64_t seed, long steps_after_T0) {
  Scenario s;
  SimulationConfig& cfg = s.config;
  cfg.topology = paper_topology(n_malicious);
  cfg.trust = TrustParams::uniform(0.55, 0.45, ell);
  cfg.attack = attack;
  cfg.kappa = 10.0;
  cfg.eta = 5.0;
  cfg.T0 = T0;
  cfg.horizon = T0 + steps_after_T0;
  cfg.x_legit_init = paper_initial_values();
  cfg.seed = seed;
  s.trials = trials;
  return s;
}

SweepSpec paper_sweep(std::size_t trials, std::uint64_t seed, long steps_after_T0) {
  SweepSpec spec;
  spec.base = paper_scenario(15, 0.4, 0, MaxDeviation{}, trials, seed, steps_after_T0);
  spec.attacks = {MaxDeviation{}, Drift{}};
  spec.n_malicious = {5, 15, 30};
  spec.ell = {0.2, 0.4, 0.6};
  spec.T0 = {0, 25, 50, 100, 150};
  spec.steps_after_T0 = steps_after_T0;
  return spec;
}

std::string config_hash(const nlohmann::json& effective) {
  const std::string text = effective.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_manifest(const std::filesystem::path& path, const nlohmann::json& effective, std::uint64_t seed) {
  json manifest;
  manifest["config"] = effective;
  manifest["config_hash"] = config_hash(effective);
  manifest["seed"] = seed;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << manifest.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace trustcons
