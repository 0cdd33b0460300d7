#include "trustcons/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "trustcons/bounds.hpp"
#include "trustcons/format.hpp"

namespace trustcons {

namespace {

struct TrialOutcome {
  std::vector<double> deviation;  // per recorded state
  std::optional<long> settling;
  double final_spread = 0.0;
};

// Neumaier summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

template <typename Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn&& fn) {
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
  if (workers == 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < count; k = next++) {
        try {
          fn(k);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

double ScenarioResult::terminal_mean() const {
  if (terminal_deviation.empty()) return 0.0;
  CompensatedSum sum;
  for (double d : terminal_deviation) sum.add(d);
  return sum.value() / static_cast<double>(terminal_deviation.size());
}

double ScenarioResult::settling_quantile(double q) const {
  std::vector<double> steps;
  for (const auto& s : settling_step) {
    if (s) steps.push_back(static_cast<double>(*s));
  }
  if (steps.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(steps.begin(), steps.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(steps.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, steps.size() - 1);
  return steps[lo] + (pos - static_cast<double>(lo)) * (steps[hi] - steps[lo]);
}

double ScenarioResult::mean_final_spread() const {
  if (final_spread.empty()) return 0.0;
  CompensatedSum sum;
  for (double d : final_spread) sum.add(d);
  return sum.value() / static_cast<double>(final_spread.size());
}

double ScenarioResult::max_final_spread() const {
  return final_spread.empty() ? 0.0 : *std::max_element(final_spread.begin(), final_spread.end());
}

double ScenarioResult::settled_fraction() const {
  if (settling_step.empty()) return 0.0;
  const auto settled = std::count_if(settling_step.begin(), settling_step.end(),
                                     [](const auto& s) { return s.has_value(); });
  return static_cast<double>(settled) / static_cast<double>(settling_step.size());
}

ScenarioResult run_monte_carlo(const Scenario& scenario, const RunOptions& options) {
  if (scenario.trials < 1) throw std::invalid_argument("trials must be at least 1");
  scenario.config.validate();
  const SimulationConfig& base = scenario.config;

  std::vector<TrialOutcome> outcomes(scenario.trials);
  std::vector<double> nominal(scenario.trials, 0.0);
  parallel_for(scenario.trials, options.jobs, [&](std::size_t k) {
    SimulationConfig cfg = base;
    cfg.seed = derive_seed(base.seed, {k});
    const SimulationTrace trace = run(cfg);
    TrialOutcome out;
    out.deviation.reserve(trace.states.size());
    for (const auto& s : trace.states) out.deviation.push_back(max_deviation(s, trace.nominal));
    out.settling = settling_step(trace);
    out.final_spread = spread(trace.final_state().x);
    nominal[k] = trace.nominal;
    if (options.on_trace) options.on_trace(k, trace);
    outcomes[k] = std::move(out);
  });

  ScenarioResult result;
  result.attack = attack_name(base.attack);
  result.n_malicious = base.topology.n_malicious();
  result.ell = base.trust.width();
  result.T0 = base.T0;
  result.nominal = nominal.front();

  const auto params = bounds::make_params(base.trust, base.topology.n_legit(), base.topology.n_malicious(), base.eta,
                                          base.kappa, scenario.delta, base.T0);
  result.delta_max = bounds::delta_max(params);

  std::size_t steps = 0;
  for (const auto& o : outcomes) steps = std::max(steps, o.deviation.size());
  // Early-stopped trials hold their last value.
  auto deviation_at = [](const TrialOutcome& o, std::size_t s) {
    return s < o.deviation.size() ? o.deviation[s] : o.deviation.back();
  };

  std::size_t violations = 0;
  CompensatedSum settle_sum;
  std::size_t settled = 0;
  for (const auto& o : outcomes) {
    const double terminal = o.deviation.back();
    result.terminal_deviation.push_back(terminal);
    result.final_spread.push_back(o.final_spread);
    result.settling_step.push_back(o.settling);
    violations += terminal > result.delta_max;
    if (o.settling) {
      settle_sum.add(static_cast<double>(*o.settling));
      ++settled;
    }
  }
  result.violation_fraction = static_cast<double>(violations) / static_cast<double>(scenario.trials);
  const double mean_settling =
      settled > 0 ? settle_sum.value() / static_cast<double>(settled) : std::numeric_limits<double>::quiet_NaN();

  const double n = static_cast<double>(scenario.trials);
  result.rows.reserve(steps);
  for (std::size_t s = 0; s < steps; ++s) {
    CompensatedSum sum;
    for (const auto& o : outcomes) sum.add(deviation_at(o, s));
    const double mean = sum.value() / n;
    CompensatedSum sq;
    for (const auto& o : outcomes) {
      const double diff = deviation_at(o, s) - mean;
      sq.add(diff * diff);
    }
    SummaryRow row;
    row.attack = result.attack;
    row.n_malicious = result.n_malicious;
    row.ell = result.ell;
    row.T0 = result.T0;
    row.t = base.T0 - 1 + static_cast<long>(s);
    row.mean_max_abs_dev = mean;
    row.std_max_abs_dev = scenario.trials > 1 ? std::sqrt(sq.value() / (n - 1.0)) : 0.0;
    row.mean_settling_step = mean_settling;
    row.delta_max = result.delta_max;
    row.violation_fraction = result.violation_fraction;
    result.rows.push_back(std::move(row));
  }
  return result;
}

Scenario sweep_cell(const SweepSpec& spec, const AttackModel& attack, std::size_t n_malicious, double ell,
                    long T0) {
  Scenario cell = spec.base;
  SimulationConfig& cfg = cell.config;
  cfg.attack = attack;
  if (cfg.topology.n_malicious() != n_malicious) {
    cfg.topology = with_malicious_count(cfg.topology, n_malicious);
    if (!cfg.x_malicious_init.empty()) cfg.x_malicious_init.resize(n_malicious, 0.0);
  }
  if (ell != cfg.trust.width()) {
    if (cfg.trust.kind() != AlphaDistribution::uniform) {
      throw std::invalid_argument("an ell axis requires the uniform trust distribution");
    }
    cfg.trust = TrustParams::uniform(cfg.trust.mean_legit(), cfg.trust.mean_malicious(), ell);
  }
  cfg.T0 = T0;
  cfg.horizon = T0 + spec.steps_after_T0;
  return cell;
}

std::vector<ScenarioResult> sweep(const SweepSpec& spec, const RunOptions& options) {
  if (spec.attacks.empty() || spec.n_malicious.empty() || spec.ell.empty() || spec.T0.empty()) {
    throw std::invalid_argument("sweep axes must be non-empty");
  }
  std::vector<ScenarioResult> results;
  for (const auto& attack : spec.attacks) {
    for (std::size_t m : spec.n_malicious) {
      for (double ell : spec.ell) {
        for (long T0 : spec.T0) {
          results.push_back(run_monte_carlo(sweep_cell(spec, attack, m, ell, T0), options));
        }
      }
    }
  }
  return results;
}

BoundComparison compare_bounds(const ScenarioResult& result, double delta) {
  BoundComparison cmp;
  cmp.delta = delta;
  cmp.delta_max = result.delta_max;
  cmp.trials = result.terminal_deviation.size();
  std::size_t violations = 0;
  for (double d : result.terminal_deviation) violations += d > result.delta_max;
  cmp.violation_fraction = cmp.trials > 0 ? static_cast<double>(violations) / static_cast<double>(cmp.trials) : 0.0;
  cmp.holds = cmp.violation_fraction <= delta;
  return cmp;
}

BoundComparison compare_bounds(const Scenario& scenario, double delta, const RunOptions& options) {
  Scenario s = scenario;
  s.delta = delta;
  return compare_bounds(run_monte_carlo(s, options), delta);
}

void write_summary_csv(std::ostream& out, const std::vector<ScenarioResult>& results) {
  out << "attack,n_malicious,ell,T0,t,mean_max_abs_dev,std_max_abs_dev,mean_settling_step,delta_max,"
         "violation_fraction\n";
  for (const auto& r : results) {
    for (const auto& row : r.rows) {
      out << row.attack << ',' << row.n_malicious << ',' << format_real(row.ell) << ',' << row.T0 << ',' << row.t
          << ',' << format_real(row.mean_max_abs_dev) << ',' << format_real(row.std_max_abs_dev) << ','
          << format_real(row.mean_settling_step) << ',' << format_real(row.delta_max) << ','
          << format_real(row.violation_fraction) << '\n';
    }
  }
}

}  // namespace trustcons
