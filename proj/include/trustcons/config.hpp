#ifndef TRUSTCONS_CONFIG_HPP
#define TRUSTCONS_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "trustcons/harness.hpp"

namespace trustcons {

/// Invalid configuration content. `key()` is the dotted path of the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message);
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Unreadable input or unwritable output.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parsed scenario file.
struct ScenarioFile {
  Scenario scenario;          // config.horizon = T0 + steps_after_T0
  long steps_after_T0 = 500;  // the "horizon" key
  std::optional<SweepSpec> sweep;
  nlohmann::json effective;   // input with every default filled in
};

/// Parses a scenario document. Unknown keys are rejected.
ScenarioFile parse_scenario(const nlohmann::json& doc);

/// Reads and parses a JSON scenario file. Throws IoError if the file cannot be
/// read and ConfigError if it is not valid.
ScenarioFile load_scenario(const std::filesystem::path& path);

/// Reads a JSON document without interpreting it.
nlohmann::json read_json(const std::filesystem::path& path);

nlohmann::json attack_to_json(const AttackModel& attack);
AttackModel attack_from_json(const nlohmann::json& value, const std::string& key);

/// The reference scenario: 15-agent graph, kappa = 10, eta = 5, alpha means
/// 0.55 / 0.45.
Scenario paper_scenario(std::size_t n_malicious, double ell, long T0, const AttackModel& attack,
                        std::size_t trials, std::uint64_t seed, long steps_after_T0 = 500);

/// Reference grid: both attacks, |M| in {5,15,30}, ell in {0.2,0.4,0.6},
/// T0 in {0,25,50,100,150}.
SweepSpec paper_sweep(std::size_t trials, std::uint64_t seed, long steps_after_T0 = 500);

/// FNV-1a 64 of the compact serialization, as 16 hex digits.
std::string config_hash(const nlohmann::json& effective);

/// manifest.json with the effective configuration, its hash and the seed.
void write_manifest(const std::filesystem::path& path, const nlohmann::json& effective, std::uint64_t seed);

}  // namespace trustcons

#endif  // TRUSTCONS_CONFIG_HPP
