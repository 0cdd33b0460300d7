#include "trustcons/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace trustcons {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string attack_name(const AttackModel& model) {
  return std::visit(overloaded{[](const MaxDeviation&) { return std::string("max_deviation"); },
                               [](const Drift&) { return std::string("drift"); },
                               [](const ConstantVector&) { return std::string("constant"); },
                               [](const Silent&) { return std::string("silent"); }},
                    model);
}

double drift_value(double legit_mean_prev, double initial_mean, double eta, long steps_since_start,
                   double u, const Drift& drift) {
  const double decay = std::pow(drift.decay_base, drift.decay_rate * static_cast<double>(steps_since_start));
  const double push = opposing_sign(initial_mean) * eta * decay * u;
  return legit_mean_prev + drift.weight * push;
}

Adversary::Adversary(AttackModel model, const Topology& topo, double eta, long T0, double nominal,
                     std::span<const double> x_legit_init, std::vector<double> malicious_init,
                     std::uint64_t seed)
    : model_(std::move(model)),
      connectivity_(topo.malicious_connectivity()),
      n_legit_(topo.n_legit()),
      eta_(eta),
      T0_(T0),
      nominal_(nominal),
      malicious_init_(std::move(malicious_init)),
      rng_(seed) {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if (x_legit_init.size() != n_legit_) {
    throw std::invalid_argument("initial legitimate values have wrong length");
  }
  if (malicious_init_.empty()) malicious_init_.assign(topo.n_malicious(), 0.0);
  if (malicious_init_.size() != topo.n_malicious()) {
    throw std::invalid_argument("x_malicious_init has " + std::to_string(malicious_init_.size()) +
                                " entries, expected " + std::to_string(topo.n_malicious()));
  }
  if (const auto* constant = std::get_if<ConstantVector>(&model_);
      constant && constant->values.size() != topo.n_malicious()) {
    throw std::invalid_argument("constant attack has " + std::to_string(constant->values.size()) +
                                " values, expected " + std::to_string(topo.n_malicious()));
  }
  if (const auto* max_dev = std::get_if<MaxDeviation>(&model_); max_dev && std::abs(max_dev->sign) > 1) {
    throw std::invalid_argument("max_deviation sign must be -1, 0 or +1");
  }
  if (!connectivity_.empty()) {
    double total = 0.0;
    for (std::size_t m = 0; m < connectivity_.size(); ++m) total += neighbor_mean(m, x_legit_init);
    drift_initial_mean_ = total / static_cast<double>(connectivity_.size());
  }
}

double Adversary::neighbor_mean(std::size_t m, std::span<const double> x_legit) const {
  const auto& nb = connectivity_[m];
  if (nb.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t j : nb) sum += x_legit[j];
  return sum / static_cast<double>(nb.size());
}

double Adversary::clamp(double x) { return std::clamp(x, -eta_, eta_); }

std::vector<double> Adversary::inputs(long t, std::span<const double> x_legit_prev) {
  if (t < T0_ - 1) {
    throw std::invalid_argument("attack queried at t=" + std::to_string(t) + " before T0-1=" +
                                std::to_string(T0_ - 1));
  }
  const std::size_t n_mal = connectivity_.size();
  std::vector<double> out(n_mal, 0.0);

  std::visit(
      overloaded{
          [&](const MaxDeviation& a) {
            const double sign = a.sign != 0 ? static_cast<double>(a.sign) : opposing_sign(nominal_);
            std::fill(out.begin(), out.end(), clamp(sign * eta_));
          },
          [&](const Drift& a) {
            if (t == T0_ - 1) {
              std::uniform_real_distribution<double> start(-a.weight * eta_, a.weight * eta_);
              for (auto& x : out) x = clamp(start(rng_));
              return;
            }
            if (x_legit_prev.size() != n_legit_) {
              throw std::invalid_argument("previous legitimate values have wrong length");
            }
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            std::uniform_real_distribution<double> top(eta_ - 0.05, eta_);
            std::uniform_real_distribution<double> bottom(-eta_, -eta_ + 0.05);
            for (std::size_t m = 0; m < n_mal; ++m) {
              double x = drift_value(neighbor_mean(m, x_legit_prev), drift_initial_mean_, eta_, t - T0_,
                                     unit(rng_), a);
              if (x > eta_) {
                x = top(rng_);
              } else if (x < -eta_) {
                x = bottom(rng_);
              }
              out[m] = clamp(x);
            }
          },
          [&](const ConstantVector& a) {
            for (std::size_t m = 0; m < n_mal; ++m) out[m] = clamp(a.values[m]);
          },
          [&](const Silent&) {
            for (std::size_t m = 0; m < n_mal; ++m) out[m] = clamp(malicious_init_[m]);
          }},
      model_);
  return out;
}

}  // namespace trustcons
