#ifndef TRUSTCONS_WEIGHTS_HPP
#define TRUSTCONS_WEIGHTS_HPP

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "trustcons/topology.hpp"
#include "trustcons/trust.hpp"

namespace trustcons {

using TrustedSets = std::vector<std::vector<AgentId>>;

/// W(t) = [W_L(t) W_M(t)]: one row per legitimate agent, one column per
/// agent (legitimate block first). Row-stochastic by construction.
class WeightMatrix {
 public:
  WeightMatrix(Eigen::MatrixXd entries, std::size_t n_legit, double kappa)
      : entries_(std::move(entries)), n_legit_(n_legit), kappa_(kappa) {}

  const Eigen::MatrixXd& entries() const { return entries_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)); }
  std::size_t n_legit() const { return n_legit_; }
  std::size_t n_malicious() const { return static_cast<std::size_t>(entries_.cols()) - n_legit_; }
  double kappa() const { return kappa_; }

  auto legit_block() const { return entries_.leftCols(static_cast<Eigen::Index>(n_legit_)); }
  auto malicious_block() const { return entries_.rightCols(static_cast<Eigen::Index>(n_malicious())); }

 private:
  Eigen::MatrixXd entries_;
  std::size_t n_legit_;
  double kappa_;
};

/// The limit matrix W̄_L reached once every edge is classified correctly.
class IdealMatrix {
 public:
  explicit IdealMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {}

  const Eigen::MatrixXd& entries() const { return entries_; }
  std::size_t size() const { return static_cast<std::size_t>(entries_.rows()); }

 private:
  Eigen::MatrixXd entries_;
};

/// Weight rule: w_ij = 1/n_wi for trusted j, 0 for untrusted neighbors,
/// w_ii = 1 - sum of the rest, with n_wi = max{kappa, |N_i(t)| + 1}.
/// Throws std::invalid_argument for kappa <= 0 or a trusted non-neighbor.
WeightMatrix build_weights(const Topology& topo, const TrustedSets& trusted, double kappa);

/// Same rule with N_i(t) read directly from the trust scores.
WeightMatrix build_weights(const Topology& topo, const TrustState& state, double kappa);

IdealMatrix build_ideal(const Topology& topo, double kappa);

/// Legitimate block equals W̄_L within 1e-15 and the malicious block is zero.
/// Throws std::invalid_argument on a dimension mismatch.
bool equals_ideal(const WeightMatrix& w, const IdealMatrix& ideal);

}  // namespace trustcons

#endif  // TRUSTCONS_WEIGHTS_HPP
