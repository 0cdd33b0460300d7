#include "trustcons/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

namespace trustcons::spectral {

Eigen::MatrixXd PerronData::limit() const {
  return Eigen::VectorXd::Ones(v.size()) * v.transpose();
}

PerronData perron_vector(const IdealMatrix& ideal, const Topology& topo, double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  const std::size_t n = topo.n_legit();
  if (ideal.size() != n) throw std::invalid_argument("ideal matrix does not match topology");

  PerronData data;
  data.v.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    data.v(static_cast<Eigen::Index>(i)) = std::max(static_cast<double>(topo.legit_degree(i) + 1), kappa);
  }
  if (n > 0) data.v /= data.v.sum();

  data.valid = is_legit_connected(topo);
  if (data.valid) {
    const double residual = (data.v.transpose() * ideal.entries() - data.v.transpose()).cwiseAbs().maxCoeff();
    data.valid = residual < 1e-12;
  }
  return data;
}

double rho2(const IdealMatrix& ideal, const Eigen::VectorXd& v) {
  const Eigen::MatrixXd& w = ideal.entries();
  const Eigen::Index n = w.rows();
  if (v.size() != n) throw std::invalid_argument("Perron vector has wrong dimension");
  if (n <= 1) return 0.0;
  if ((v.array() <= 0.0).any()) throw std::invalid_argument("Perron vector must be positive");

  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (std::abs(v(i) * w(i, j) - v(j) * w(j, i)) > 1e-12) {
        throw std::invalid_argument("matrix is not reversible with respect to v at (" + std::to_string(i) +
                                    ", " + std::to_string(j) + ")");
      }
    }
  }

  const Eigen::VectorXd sqrt_v = v.array().sqrt();
  const Eigen::VectorXd inv_sqrt_v = sqrt_v.array().inverse();
  Eigen::MatrixXd sym = sqrt_v.asDiagonal() * w * inv_sqrt_v.asDiagonal();
  // Remove rounding asymmetry before the symmetric solve.
  sym = 0.5 * (sym + sym.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("symmetric eigensolve failed");

  std::vector<double> moduli(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) moduli[static_cast<std::size_t>(i)] = std::abs(solver.eigenvalues()(i));
  std::sort(moduli.begin(), moduli.end(), std::greater<>());
  return moduli[1];
}

double v_norm(const Eigen::VectorXd& x, const Eigen::VectorXd& v) {
  if (x.size() != v.size()) throw std::invalid_argument("v_norm: dimension mismatch");
  return std::sqrt((v.array() * x.array().square()).sum());
}

double nominal_value(const Eigen::VectorXd& v, const Eigen::VectorXd& x0) {
  if (x0.size() != v.size()) throw std::invalid_argument("nominal_value: dimension mismatch");
  return v.dot(x0);
}

bool is_primitive(const Eigen::MatrixXd& matrix) {
  const Eigen::Index n = matrix.rows();
  if (n != matrix.cols()) throw std::invalid_argument("is_primitive: matrix must be square");
  if (n == 0) return false;
  if ((matrix.array() < 0.0).any()) throw std::invalid_argument("is_primitive: matrix must be nonnegative");

  using Pattern = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;
  const Pattern base = (matrix.array() > 0.0).cast<int>();
  const long target = static_cast<long>(n - 1) * static_cast<long>(n - 1) + 1;

  auto product = [](const Pattern& a, const Pattern& b) -> Pattern {
    return ((a * b).array() > 0).cast<int>();
  };
  // Square-and-multiply on the zero pattern.
  Pattern result = Pattern::Identity(n, n);
  Pattern power = base;
  for (long e = target; e > 0; e >>= 1) {
    if (e & 1) result = product(result, power);
    if (e > 1) power = product(power, power);
  }
  return (result.array() > 0).all();
}

PerronData analyze(const Topology& topo, double kappa) {
  const IdealMatrix ideal = build_ideal(topo, kappa);
  PerronData data = perron_vector(ideal, topo, kappa);
  if (topo.n_legit() > 0) data.rho2 = rho2(ideal, data.v);
  return data;
}

}  // namespace trustcons::spectral
