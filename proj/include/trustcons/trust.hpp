#ifndef TRUSTCONS_TRUST_HPP
#define TRUSTCONS_TRUST_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "trustcons/rng.hpp"
#include "trustcons/topology.hpp"

namespace trustcons {

enum class EdgeClass { legit, malicious };

enum class AlphaDistribution { uniform, bernoulli, custom };

std::string to_string(AlphaDistribution kind);

using AlphaSampler = std::function<double(EdgeClass, Rng&)>;

/// Distribution of the trust observations alpha_ij(t).
///
/// Only the edge class determines the mean: mean_legit = d + 1/2 on
/// legitimate links, mean_malicious = c + 1/2 on malicious links, with
/// c < 0 < d enforced at construction.
class TrustParams {
 public:
  /// alpha ~ U[mean - width/2, mean + width/2]; the support must stay in [0, 1].
  static TrustParams uniform(double mean_legit, double mean_malicious, double width);
  /// alpha ∈ {0, 1} with P(alpha = 1) = mean.
  static TrustParams bernoulli(double mean_legit, double mean_malicious);
  /// Caller-supplied sampler. The declared means and variances feed the bounds.
  static TrustParams custom(double mean_legit, double mean_malicious, double variance_legit,
                            double variance_malicious, AlphaSampler sampler);

  AlphaDistribution kind() const { return kind_; }
  double mean_legit() const { return mean_legit_; }
  double mean_malicious() const { return mean_malicious_; }
  double width() const { return width_; }

  double mean(EdgeClass cls) const { return cls == EdgeClass::legit ? mean_legit_ : mean_malicious_; }
  double d() const { return mean_legit_ - 0.5; }
  double c() const { return mean_malicious_ - 0.5; }
  /// Variance of alpha - 1/2 on the given edge class.
  double variance(EdgeClass cls) const { return cls == EdgeClass::legit ? var_legit_ : var_malicious_; }

  double sample(EdgeClass cls, Rng& rng) const;

 private:
  TrustParams() = default;

  AlphaDistribution kind_ = AlphaDistribution::uniform;
  double mean_legit_ = 0.0;
  double mean_malicious_ = 0.0;
  double width_ = 0.0;
  double var_legit_ = 0.0;
  double var_malicious_ = 0.0;
  AlphaSampler sampler_;
};

/// One draw of alpha_ij(t).
double sample_alpha(EdgeClass cls, const TrustParams& params, Rng& rng);

/// One alpha per stored directed edge, row i aligned with
/// Topology::neighbors(i) for every legitimate i.
using Observations = std::vector<std::vector<double>>;

/// Accumulated scores beta_ij(t) = sum_k (alpha_ij(k) - 1/2) for every
/// legitimate agent i and every j in N_i. All scores start at zero.
class TrustState {
 public:
  TrustState() = default;
  explicit TrustState(const Topology& topo);

  std::size_t n_legit() const { return neighbors_.size(); }
  /// Index of the last accumulated observation round; -1 before any.
  long t_last() const { return t_last_; }

  std::span<const std::size_t> neighbors(std::size_t i) const { return neighbors_.at(i); }
  std::span<const double> betas(std::size_t i) const { return beta_.at(i); }
  double beta(AgentId i, AgentId j) const;

  /// beta_ij += alpha_ij - 1/2 for every edge; t_last += 1. Throws
  /// std::invalid_argument if any edge lacks an observation.
  void accumulate(const Observations& alpha);

 private:
  NeighborLists neighbors_;
  std::vector<std::vector<double>> beta_;
  long t_last_ = -1;
};

/// Per-edge independent random streams for the observation process.
class EdgeStreams {
 public:
  EdgeStreams(const Topology& topo, std::uint64_t seed);

  /// Draws one observation round into `out` (resized as needed).
  void draw(const TrustParams& params, Observations& out);
  Observations draw(const TrustParams& params);

 private:
  std::size_t n_legit_ = 0;
  NeighborLists neighbors_;
  std::vector<std::vector<Rng>> streams_;
};

/// { j in N_i : beta_ij >= 0 }. Throws std::invalid_argument for a
/// non-legitimate i.
std::vector<AgentId> trusted_neighborhood(const TrustState& state, AgentId i);

struct ClassificationCounts {
  std::size_t false_rejections = 0;   // legitimate edge with beta < 0
  std::size_t false_acceptances = 0;  // malicious edge with beta >= 0

  bool exact() const { return false_rejections == 0 && false_acceptances == 0; }
  bool operator==(const ClassificationCounts&) const = default;
};

struct ClassificationSnapshot {
  std::vector<std::vector<AgentId>> trusted;  // N_i(t) per legitimate agent
  ClassificationCounts counts;
};

ClassificationCounts count_misclassified(const TrustState& state);
ClassificationSnapshot misclassification_counts(const TrustState& state, const Topology& topo);

}  // namespace trustcons

#endif  // TRUSTCONS_TRUST_HPP
