#include "trustcons/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace trustcons {

namespace {

void check_kappa(double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
}

// Writes row i given the column indices of the trusted neighbors.
template <typename Cols>
void fill_row(Eigen::MatrixXd& w, std::size_t i, const Cols& trusted_cols, std::size_t n_trusted,
              double kappa) {
  const double n_w = std::max(kappa, static_cast<double>(n_trusted + 1));
  const double share = 1.0 / n_w;
  const auto row = static_cast<Eigen::Index>(i);
  double off_diagonal = 0.0;
  for (std::size_t j : trusted_cols) {
    w(row, static_cast<Eigen::Index>(j)) = share;
    off_diagonal += share;
  }
  w(row, row) = 1.0 - off_diagonal;
}

}  // namespace

WeightMatrix build_weights(const Topology& topo, const TrustedSets& trusted, double kappa) {
  check_kappa(kappa);
  if (trusted.size() != topo.n_legit()) {
    throw std::invalid_argument("trusted sets given for " + std::to_string(trusted.size()) +
                                " agents, expected " + std::to_string(topo.n_legit()));
  }
  const auto n = static_cast<Eigen::Index>(topo.n_agents());
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(topo.n_legit()), n);
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < topo.n_legit(); ++i) {
    cols.clear();
    for (AgentId j : trusted[i]) {
      if (!topo.adjacent(i, j.index)) {
        throw std::invalid_argument("agent " + std::to_string(j.index) + " trusted by " +
                                    std::to_string(i) + " is not its neighbor");
      }
      cols.push_back(j.index);
    }
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    fill_row(w, i, cols, cols.size(), kappa);
  }
  return WeightMatrix(std::move(w), topo.n_legit(), kappa);
}

WeightMatrix build_weights(const Topology& topo, const TrustState& state, double kappa) {
  check_kappa(kappa);
  if (state.n_legit() != topo.n_legit()) {
    throw std::invalid_argument("trust state and topology disagree on |L|");
  }
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(topo.n_legit()),
                                            static_cast<Eigen::Index>(topo.n_agents()));
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < topo.n_legit(); ++i) {
    cols.clear();
    auto nb = state.neighbors(i);
    auto beta = state.betas(i);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (beta[k] >= 0.0) cols.push_back(nb[k]);
    }
    fill_row(w, i, cols, cols.size(), kappa);
  }
  return WeightMatrix(std::move(w), topo.n_legit(), kappa);
}

IdealMatrix build_ideal(const Topology& topo, double kappa) {
  check_kappa(kappa);
  const auto n = static_cast<Eigen::Index>(topo.n_legit());
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < topo.n_legit(); ++i) {
    auto nb = topo.legit_neighbors(i);
    fill_row(w, i, nb, nb.size(), kappa);
  }
  return IdealMatrix(std::move(w));
}

bool equals_ideal(const WeightMatrix& w, const IdealMatrix& ideal) {
  if (w.n_legit() != ideal.size()) {
    throw std::invalid_argument("weight matrix has " + std::to_string(w.n_legit()) +
                                " legitimate rows, ideal matrix has " + std::to_string(ideal.size()));
  }
  constexpr double kTol = 1e-15;
  if (w.n_malicious() > 0 && w.malicious_block().cwiseAbs().maxCoeff() > kTol) return false;
  if (ideal.size() == 0) return true;
  return (w.legit_block() - ideal.entries()).cwiseAbs().maxCoeff() <= kTol;
}

}  // namespace trustcons
