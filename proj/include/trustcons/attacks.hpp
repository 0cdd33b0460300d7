#ifndef TRUSTCONS_ATTACKS_HPP
#define TRUSTCONS_ATTACKS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "trustcons/rng.hpp"
#include "trustcons/topology.hpp"

namespace trustcons {

/// Constant input sign·eta. sign = 0 opposes the nominal consensus value.
struct MaxDeviation {
  int sign = 0;
};

/// Malicious agents track the legitimate mean of their neighbors and add a
/// decaying random push away from the initial mean.
struct Drift {
  double weight = 0.15;
  double decay_base = 0.75;
  double decay_rate = 0.05;
};

struct ConstantVector {
  std::vector<double> values;
};

/// Malicious agents repeat their initial values.
struct Silent {};

using AttackModel = std::variant<MaxDeviation, Drift, ConstantVector, Silent>;

/// Config-file name of the variant: max_deviation | drift | constant | silent.
std::string attack_name(const AttackModel& model);

/// +1 for a negative value, -1 otherwise: the direction pointing away from `x`.
inline double opposing_sign(double x) { return x < 0.0 ? 1.0 : -1.0; }

/// x_m(t) = d_L(t-1) + weight·d_M(m,t), d_M = opposing_sign(initial mean)·eta·base^(rate·steps)·u,
/// before overflow handling.
double drift_value(double legit_mean_prev, double initial_mean, double eta, long steps_since_start,
                   double u, const Drift& drift = {});

/// Stateful generator of x_M(t) for one trial.
///
/// Every emitted value lies in [-eta, eta] and each malicious agent broadcasts
/// one value per step.
class Adversary {
 public:
  /// `nominal` is v'x_L(0); `malicious_init` holds x_M(0) (zeros if empty).
  /// Throws std::invalid_argument for eta <= 0 or a ConstantVector of the
  /// wrong length.
  Adversary(AttackModel model, const Topology& topo, double eta, long T0, double nominal,
            std::span<const double> x_legit_init, std::vector<double> malicious_init,
            std::uint64_t seed);

  /// x_M(t). `x_legit_prev` is x_L(t-1) (ignored at t = T0-1). Calls must
  /// come in increasing t starting at T0-1; throws std::invalid_argument for
  /// t < T0-1.
  std::vector<double> inputs(long t, std::span<const double> x_legit_prev);

  const AttackModel& model() const { return model_; }

 private:
  double neighbor_mean(std::size_t m, std::span<const double> x_legit) const;
  double clamp(double x);

  AttackModel model_;
  NeighborLists connectivity_;
  std::size_t n_legit_;
  double eta_;
  long T0_;
  double nominal_;
  std::vector<double> malicious_init_;
  Rng rng_;
  double drift_initial_mean_ = 0.0;
};

}  // namespace trustcons

#endif  // TRUSTCONS_ATTACKS_HPP
