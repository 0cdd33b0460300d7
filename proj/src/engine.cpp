#include "trustcons/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <stdexcept>
#include <string>

#include "trustcons/format.hpp"
#include "trustcons/spectral.hpp"
#include "trustcons/weights.hpp"

namespace trustcons {

void SimulationConfig::validate() const {
  if (topology.n_legit() == 0) throw std::invalid_argument("topology has no legitimate agents");
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if (T0 < 0) throw std::invalid_argument("T0 must be non-negative");
  if (horizon < T0 - 1) throw std::invalid_argument("horizon must be at least T0 - 1");
  if (x_legit_init.size() != topology.n_legit()) {
    throw std::invalid_argument("x_legit_init has " + std::to_string(x_legit_init.size()) +
                                " entries, expected " + std::to_string(topology.n_legit()));
  }
  for (double x : x_legit_init) {
    if (!(std::abs(x) <= eta)) throw std::invalid_argument("x_legit_init entry exceeds eta");
  }
  if (!x_malicious_init.empty() && x_malicious_init.size() != topology.n_malicious()) {
    throw std::invalid_argument("x_malicious_init has " + std::to_string(x_malicious_init.size()) +
                                " entries, expected " + std::to_string(topology.n_malicious()));
  }
}

double spread(const Eigen::VectorXd& x) {
  if (x.size() == 0) return 0.0;
  return x.maxCoeff() - x.minCoeff();
}

SimulationTrace run(const SimulationConfig& config) {
  config.validate();
  const Topology& topo = config.topology;
  if (!is_legit_connected(topo)) {
    std::cerr << "warning: legitimate subgraph is disconnected; consensus is not expected\n";
  }

  const auto perron = spectral::analyze(topo, config.kappa);
  const Eigen::VectorXd x0 = Eigen::Map<const Eigen::VectorXd>(config.x_legit_init.data(),
                                                               static_cast<Eigen::Index>(config.x_legit_init.size()));

  SimulationTrace trace;
  trace.T0 = config.T0;
  trace.nominal = spectral::nominal_value(perron.v, x0);

  TrustState trust(topo);
  EdgeStreams streams(topo, config.seed);
  Adversary adversary(config.attack, topo, config.eta, config.T0, trace.nominal, config.x_legit_init,
                      config.x_malicious_init, derive_seed(config.seed, {kAttackStreamTag}));

  Observations round;
  for (long t = 0; t < config.T0 - 1; ++t) {
    streams.draw(config.trust, round);
    trust.accumulate(round);
  }

  StateRecord current{config.T0 - 1, x0, x0, Eigen::VectorXd::Zero(x0.size())};
  const long updates = config.horizon - (config.T0 - 1);
  trace.states.reserve(static_cast<std::size_t>(updates) + 1);
  trace.states.push_back(current);
  trace.observation_rounds = static_cast<std::size_t>(std::max(config.T0 - 1, 0L)) + (updates > 0 ? 1 : 0);

  Eigen::VectorXd x_prev = x0;
  int calm_steps = 0;
  for (long t = config.T0 - 1; t < config.horizon; ++t) {
    streams.draw(config.trust, round);
    trust.accumulate(round);
    const WeightMatrix w = build_weights(topo, trust, config.kappa);
    trace.classification.push_back(count_misclassified(trust));

    std::vector<double> xm = adversary.inputs(t, std::span<const double>(x_prev.data(), static_cast<std::size_t>(x_prev.size())));
    const Eigen::Map<const Eigen::VectorXd> x_mal(xm.data(), static_cast<Eigen::Index>(xm.size()));
    const Eigen::VectorXd injected = w.malicious_block() * x_mal;

    StateRecord next;
    next.t = t + 1;
    next.x = w.legit_block() * current.x + injected;
    next.x_tilde = w.legit_block() * current.x_tilde;
    next.phi = w.legit_block() * current.phi + injected;
    trace.malicious_inputs.push_back(std::move(xm));

    x_prev = current.x;
    current = std::move(next);
    trace.states.push_back(current);

    if (config.early_stop) {
      calm_steps = spread(current.x) < 1e-12 ? calm_steps + 1 : 0;
      if (calm_steps >= 10) {
        trace.stop = StopReason::converged;
        break;
      }
    }
  }
  return trace;
}

double max_deviation(const StateRecord& state, double nominal) {
  if (state.x.size() == 0) throw std::invalid_argument("empty state");
  return (state.x.array() - nominal).abs().maxCoeff();
}

double max_deviation(const SimulationTrace& trace, double nominal) {
  if (trace.states.empty()) throw std::invalid_argument("empty trace");
  return max_deviation(trace.final_state(), nominal);
}

std::optional<long> settling_step(const SimulationTrace& trace) {
  const auto& cls = trace.classification;
  if (cls.empty() || !cls.back().exact()) return std::nullopt;
  std::size_t k = cls.size();
  while (k > 0 && cls[k - 1].exact()) --k;
  return trace.first_t() + static_cast<long>(k);
}

void write_trace_csv(std::ostream& out, const SimulationTrace& trace) {
  out << "t,agent,x,x_tilde,phi\n";
  for (const auto& s : trace.states) {
    for (Eigen::Index i = 0; i < s.x.size(); ++i) {
      out << s.t << ',' << i << ',' << format_real(s.x(i)) << ',' << format_real(s.x_tilde(i)) << ','
          << format_real(s.phi(i)) << '\n';
    }
  }
}

void write_trace_summary_csv(std::ostream& out, const SimulationTrace& trace) {
  const auto settled = settling_step(trace);
  out << "settling_step,final_spread,max_deviation,stop_reason\n";
  out << (settled ? std::to_string(*settled) : std::string("none")) << ','
      << format_real(spread(trace.final_state().x)) << ',' << format_real(max_deviation(trace, trace.nominal))
      << ',' << (trace.stop == StopReason::horizon ? "horizon" : "converged") << '\n';
}

}  // namespace trustcons
