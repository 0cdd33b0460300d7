#include "trustcons/trust.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace trustcons {

namespace {

void check_means(double mean_legit, double mean_malicious) {
  if (!(mean_legit > 0.5 && mean_legit <= 1.0)) {
    throw std::invalid_argument("alpha_mean_legit must lie in (0.5, 1], got " + std::to_string(mean_legit));
  }
  if (!(mean_malicious < 0.5 && mean_malicious >= 0.0)) {
    throw std::invalid_argument("alpha_mean_malicious must lie in [0, 0.5), got " +
                                std::to_string(mean_malicious));
  }
}

}  // namespace

std::string to_string(AlphaDistribution kind) {
  switch (kind) {
    case AlphaDistribution::uniform: return "uniform";
    case AlphaDistribution::bernoulli: return "bernoulli";
    case AlphaDistribution::custom: return "custom";
  }
  return "unknown";
}

TrustParams TrustParams::uniform(double mean_legit, double mean_malicious, double width) {
  check_means(mean_legit, mean_malicious);
  if (!(width >= 0.0)) throw std::invalid_argument("alpha_width must be non-negative");
  for (double mean : {mean_legit, mean_malicious}) {
    // Small slack so that e.g. 0.45 + 0.55/2 style sums do not trip on rounding.
    if (mean - width / 2 < -1e-12 || mean + width / 2 > 1.0 + 1e-12) {
      throw std::invalid_argument("uniform support [" + std::to_string(mean - width / 2) + ", " +
                                  std::to_string(mean + width / 2) + "] leaves [0, 1]");
    }
  }
  TrustParams p;
  p.kind_ = AlphaDistribution::uniform;
  p.mean_legit_ = mean_legit;
  p.mean_malicious_ = mean_malicious;
  p.width_ = width;
  p.var_legit_ = p.var_malicious_ = width * width / 12.0;
  return p;
}

TrustParams TrustParams::bernoulli(double mean_legit, double mean_malicious) {
  check_means(mean_legit, mean_malicious);
  TrustParams p;
  p.kind_ = AlphaDistribution::bernoulli;
  p.mean_legit_ = mean_legit;
  p.mean_malicious_ = mean_malicious;
  p.width_ = 1.0;
  p.var_legit_ = mean_legit * (1.0 - mean_legit);
  p.var_malicious_ = mean_malicious * (1.0 - mean_malicious);
  return p;
}

TrustParams TrustParams::custom(double mean_legit, double mean_malicious, double variance_legit,
                                double variance_malicious, AlphaSampler sampler) {
  check_means(mean_legit, mean_malicious);
  if (!sampler) throw std::invalid_argument("custom trust distribution needs a sampler");
  if (variance_legit < 0.0 || variance_malicious < 0.0) {
    throw std::invalid_argument("trust variances must be non-negative");
  }
  TrustParams p;
  p.kind_ = AlphaDistribution::custom;
  p.mean_legit_ = mean_legit;
  p.mean_malicious_ = mean_malicious;
  p.var_legit_ = variance_legit;
  p.var_malicious_ = variance_malicious;
  p.sampler_ = std::move(sampler);
  return p;
}

double TrustParams::sample(EdgeClass cls, Rng& rng) const {
  const double mu = mean(cls);
  switch (kind_) {
    case AlphaDistribution::uniform: {
      if (width_ == 0.0) return mu;
      std::uniform_real_distribution<double> dist(mu - width_ / 2, mu + width_ / 2);
      return std::clamp(dist(rng), 0.0, 1.0);
    }
    case AlphaDistribution::bernoulli: {
      std::bernoulli_distribution dist(mu);
      return dist(rng) ? 1.0 : 0.0;
    }
    case AlphaDistribution::custom:
      return std::clamp(sampler_(cls, rng), 0.0, 1.0);
  }
  return mu;
}

double sample_alpha(EdgeClass cls, const TrustParams& params, Rng& rng) { return params.sample(cls, rng); }

TrustState::TrustState(const Topology& topo) {
  neighbors_.resize(topo.n_legit());
  beta_.resize(topo.n_legit());
  for (std::size_t i = 0; i < topo.n_legit(); ++i) {
    auto nb = topo.neighbors(i);
    neighbors_[i].assign(nb.begin(), nb.end());
    beta_[i].assign(nb.size(), 0.0);
  }
}

double TrustState::beta(AgentId i, AgentId j) const {
  const auto& nb = neighbors_.at(i.index);
  auto it = std::lower_bound(nb.begin(), nb.end(), j.index);
  if (it == nb.end() || *it != j.index) {
    throw std::invalid_argument("agent " + std::to_string(j.index) + " is not a neighbor of " +
                                std::to_string(i.index));
  }
  return beta_[i.index][static_cast<std::size_t>(it - nb.begin())];
}

void TrustState::accumulate(const Observations& alpha) {
  if (alpha.size() != beta_.size()) {
    throw std::invalid_argument("observations cover " + std::to_string(alpha.size()) +
                                " agents, expected " + std::to_string(beta_.size()));
  }
  for (std::size_t i = 0; i < beta_.size(); ++i) {
    if (alpha[i].size() != beta_[i].size()) {
      throw std::invalid_argument("missing edge observation for agent " + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < beta_.size(); ++i) {
    for (std::size_t k = 0; k < beta_[i].size(); ++k) beta_[i][k] += alpha[i][k] - 0.5;
  }
  ++t_last_;
}

EdgeStreams::EdgeStreams(const Topology& topo, std::uint64_t seed) : n_legit_(topo.n_legit()) {
  neighbors_.resize(n_legit_);
  streams_.resize(n_legit_);
  for (std::size_t i = 0; i < n_legit_; ++i) {
    auto nb = topo.neighbors(i);
    neighbors_[i].assign(nb.begin(), nb.end());
    streams_[i].reserve(nb.size());
    for (std::size_t j : nb) streams_[i].emplace_back(derive_seed(seed, {i, j}));
  }
}

void EdgeStreams::draw(const TrustParams& params, Observations& out) {
  out.resize(n_legit_);
  for (std::size_t i = 0; i < n_legit_; ++i) {
    out[i].resize(neighbors_[i].size());
    for (std::size_t k = 0; k < neighbors_[i].size(); ++k) {
      const EdgeClass cls = neighbors_[i][k] < n_legit_ ? EdgeClass::legit : EdgeClass::malicious;
      out[i][k] = params.sample(cls, streams_[i][k]);
    }
  }
}

Observations EdgeStreams::draw(const TrustParams& params) {
  Observations out;
  draw(params, out);
  return out;
}

std::vector<AgentId> trusted_neighborhood(const TrustState& state, AgentId i) {
  if (i.index >= state.n_legit()) {
    throw std::invalid_argument("agent " + std::to_string(i.index) + " is not legitimate");
  }
  std::vector<AgentId> trusted;
  auto nb = state.neighbors(i.index);
  auto beta = state.betas(i.index);
  for (std::size_t k = 0; k < nb.size(); ++k) {
    if (beta[k] >= 0.0) trusted.push_back(AgentId{nb[k]});
  }
  return trusted;
}

ClassificationCounts count_misclassified(const TrustState& state) {
  ClassificationCounts counts;
  const std::size_t n_legit = state.n_legit();
  for (std::size_t i = 0; i < n_legit; ++i) {
    auto nb = state.neighbors(i);
    auto beta = state.betas(i);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (nb[k] < n_legit) {
        counts.false_rejections += beta[k] < 0.0;
      } else {
        counts.false_acceptances += beta[k] >= 0.0;
      }
    }
  }
  return counts;
}

ClassificationSnapshot misclassification_counts(const TrustState& state, const Topology& topo) {
  if (state.n_legit() != topo.n_legit()) {
    throw std::invalid_argument("trust state and topology disagree on |L|");
  }
  ClassificationSnapshot snap;
  snap.trusted.reserve(state.n_legit());
  for (std::size_t i = 0; i < state.n_legit(); ++i) snap.trusted.push_back(trusted_neighborhood(state, AgentId{i}));
  snap.counts = count_misclassified(state);
  return snap;
}

}  // namespace trustcons
