#ifndef TRUSTCONS_SPECTRAL_HPP
#define TRUSTCONS_SPECTRAL_HPP

#include <Eigen/Dense>

#include "trustcons/topology.hpp"
#include "trustcons/weights.hpp"

namespace trustcons::spectral {

struct PerronData {
  Eigen::VectorXd v;  // stochastic left Perron vector of W̄_L
  double rho2 = 0.0;  // second-largest eigenvalue modulus
  bool valid = true;  // false when the legitimate graph is disconnected

  /// The rank-one limit 1v'.
  Eigen::MatrixXd limit() const;
};

/// Closed form v_i ∝ max{|N_i ∩ L| + 1, kappa}. `valid` is cleared when the
/// legitimate subgraph is disconnected or v'W̄_L = v' fails at 1e-12.
PerronData perron_vector(const IdealMatrix& ideal, const Topology& topo, double kappa);

/// Second-largest |eigenvalue| of W̄_L from the symmetric matrix
/// D_v^{1/2} W̄_L D_v^{-1/2}. Defined as 0 for a 1x1 system. Throws
/// std::invalid_argument if (W̄_L, v) is not reversible.
double rho2(const IdealMatrix& ideal, const Eigen::VectorXd& v);

/// sqrt(sum_i v_i x_i^2).
double v_norm(const Eigen::VectorXd& x, const Eigen::VectorXd& v);

/// v'x0: the value reached if W̄_L governed from the start.
double nominal_value(const Eigen::VectorXd& v, const Eigen::VectorXd& x0);

/// Primitivity of a nonnegative square matrix: some power is entrywise
/// positive. Checked at the Wielandt exponent (n-1)^2 + 1.
bool is_primitive(const Eigen::MatrixXd& matrix);
inline bool is_primitive(const IdealMatrix& ideal) { return is_primitive(ideal.entries()); }

/// v and rho2 for the ideal matrix of `topo`.
PerronData analyze(const Topology& topo, double kappa);

}  // namespace trustcons::spectral

#endif  // TRUSTCONS_SPECTRAL_HPP
