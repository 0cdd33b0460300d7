#ifndef TRUSTCONS_HARNESS_HPP
#define TRUSTCONS_HARNESS_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "trustcons/engine.hpp"

namespace trustcons {

/// A simulation configuration repeated over independent trials. Trial k
/// runs with seed derive_seed(config.seed, {k}).
struct Scenario {
  SimulationConfig config;
  std::size_t trials = 1;
  double delta = 0.05;  // error probability for the deviation bound
  std::string out_dir;
};

/// Aggregates at one time step of one scenario.
struct SummaryRow {
  std::string attack;
  std::size_t n_malicious = 0;
  double ell = 0.0;
  long T0 = 0;
  long t = 0;
  double mean_max_abs_dev = 0.0;
  double std_max_abs_dev = 0.0;
  double mean_settling_step = 0.0;  // over trials that settled; NaN if none did
  double delta_max = 0.0;
  double violation_fraction = 0.0;
};

struct ScenarioResult {
  std::string attack;
  std::size_t n_malicious = 0;
  double ell = 0.0;
  long T0 = 0;
  double nominal = 0.0;
  double delta_max = 0.0;
  double violation_fraction = 0.0;  // share of trials whose final deviation exceeds delta_max
  std::vector<SummaryRow> rows;     // t = T0-1 .. horizon
  std::vector<double> terminal_deviation;         // per trial
  std::vector<double> final_spread;               // per trial
  std::vector<std::optional<long>> settling_step;  // per trial

  double terminal_mean() const;
  double settled_fraction() const;
  /// q-quantile (linear interpolation) of the settling step over settled
  /// trials; NaN if none settled.
  double settling_quantile(double q) const;
  double mean_final_spread() const;
  double max_final_spread() const;
};

struct RunOptions {
  unsigned jobs = 1;
  /// Called once per finished trial, possibly from several threads at once.
  std::function<void(std::size_t trial, const SimulationTrace&)> on_trace;
};

/// Runs `scenario.trials` independent trials and aggregates the per-step
/// maximal deviation from v'x_L(0). Results depend only on the seed, not on
/// `jobs` or scheduling.
ScenarioResult run_monte_carlo(const Scenario& scenario, const RunOptions& options = {});

/// Cartesian grid over attack x |M| x ell x T0 around a base scenario.
struct SweepSpec {
  Scenario base;
  std::vector<AttackModel> attacks;
  std::vector<std::size_t> n_malicious;
  std::vector<double> ell;
  std::vector<long> T0;
  long steps_after_T0 = 500;  // horizon of each cell is T0 + steps_after_T0
};

/// The scenario of one grid cell. Malicious agents are rebuilt adjacent to
/// every legitimate agent; ell replaces the uniform trust width.
Scenario sweep_cell(const SweepSpec& spec, const AttackModel& attack, std::size_t n_malicious, double ell,
                    long T0);

/// Rows ordered by attack, then |M|, then ell, then T0. Throws
/// std::invalid_argument on an empty axis.
std::vector<ScenarioResult> sweep(const SweepSpec& spec, const RunOptions& options = {});

struct BoundComparison {
  double delta = 0.0;
  double delta_max = 0.0;
  double violation_fraction = 0.0;
  std::size_t trials = 0;
  bool holds = false;  // violation_fraction <= delta
};

BoundComparison compare_bounds(const ScenarioResult& result, double delta);
BoundComparison compare_bounds(const Scenario& scenario, double delta, const RunOptions& options = {});

/// Columns: attack, n_malicious, ell, T0, t, mean_max_abs_dev, std_max_abs_dev,
/// mean_settling_step, delta_max, violation_fraction.
void write_summary_csv(std::ostream& out, const std::vector<ScenarioResult>& results);

}  // namespace trustcons

#endif  // TRUSTCONS_HARNESS_HPP
