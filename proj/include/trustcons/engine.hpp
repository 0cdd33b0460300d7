#ifndef TRUSTCONS_ENGINE_HPP
#define TRUSTCONS_ENGINE_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include <Eigen/Dense>

#include "trustcons/attacks.hpp"
#include "trustcons/topology.hpp"
#include "trustcons/trust.hpp"

namespace trustcons {

struct SimulationConfig {
  Topology topology;
  TrustParams trust = TrustParams::uniform(0.55, 0.45, 0.4);
  AttackModel attack = MaxDeviation{};
  double kappa = 10.0;
  double eta = 5.0;
  long T0 = 0;
  /// Time index of the last simulated state x_L(horizon); horizon >= T0 - 1.
  long horizon = 500;
  std::vector<double> x_legit_init;
  std::vector<double> x_malicious_init;  // zeros when empty
  std::uint64_t seed = 0;
  /// Stop once the legitimate spread stays below 1e-12 for 10 steps.
  bool early_stop = false;

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

/// State at time t. x = x_tilde + phi.
struct StateRecord {
  long t = 0;
  Eigen::VectorXd x;
  Eigen::VectorXd x_tilde;
  Eigen::VectorXd phi;
};

enum class StopReason { horizon, converged };

struct SimulationTrace {
  long T0 = 0;
  std::size_t observation_rounds = 0;  // rounds collected before the first update
  double nominal = 0.0;                // v'x_L(0)
  std::vector<StateRecord> states;     // t = T0-1, T0, ...
  /// classification[k] describes the weights of update step t = T0-1+k.
  std::vector<ClassificationCounts> classification;
  /// malicious_inputs[k] is x_M(T0-1+k).
  std::vector<std::vector<double>> malicious_inputs;
  StopReason stop = StopReason::horizon;

  long first_t() const { return T0 - 1; }
  const StateRecord& final_state() const { return states.back(); }
};

/// Runs the observation window followed by trust-weighted consensus updates.
///
/// Rounds 0..T0-2 only collect trust observations. Each update step
/// t >= T0-1 first collects one more round, rebuilds W(t) from the trusted
/// neighborhoods and then applies x_L(t+1) = W_L(t)x_L(t) + W_M(t)x_M(t)
/// alongside x̃(t+1) = W_L(t)x̃(t) and φ(t+1) = W_L(t)φ(t) + W_M(t)x_M(t).
/// The first update therefore uses max(T0, 1) rounds.
SimulationTrace run(const SimulationConfig& config);

/// max_i |x_i(final) - nominal|.
double max_deviation(const SimulationTrace& trace, double nominal);

/// max_i |x_i(t) - nominal| at one recorded state.
double max_deviation(const StateRecord& state, double nominal);

/// Smallest update step k with exact classification on every step in
/// [k, horizon). Empty if the last step is misclassified or nothing ran.
std::optional<long> settling_step(const SimulationTrace& trace);

/// max_i x_i - min_i x_i.
double spread(const Eigen::VectorXd& x);

/// Per-step CSV: t,agent,x,x_tilde,phi.
void write_trace_csv(std::ostream& out, const SimulationTrace& trace);

/// Single-record CSV: settling_step,final_spread,max_deviation,stop_reason.
void write_trace_summary_csv(std::ostream& out, const SimulationTrace& trace);

}  // namespace trustcons

#endif  // TRUSTCONS_ENGINE_HPP
