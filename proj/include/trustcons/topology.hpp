#ifndef TRUSTCONS_TOPOLOGY_HPP
#define TRUSTCONS_TOPOLOGY_HPP

#include <compare>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace trustcons {

/// Index of an agent. Legitimate agents occupy 0..|L|-1, malicious agents
/// |L|..|L|+|M|-1.
struct AgentId {
  std::size_t index = 0;

  auto operator<=>(const AgentId&) const = default;
};

using Adjacency = std::vector<std::vector<bool>>;
using NeighborLists = std::vector<std::vector<std::size_t>>;

/// Undirected agent graph with a legitimate/malicious role partition.
///
/// Only legitimate-legitimate and malicious-legitimate edges are stored;
/// malicious-malicious links never enter a legitimate update. Neighbor lists
/// are sorted ascending, so for a legitimate agent the legitimate neighbors
/// form a prefix of `neighbors(i)`.
class Topology {
 public:
  Topology() = default;

  std::size_t n_legit() const { return n_legit_; }
  std::size_t n_malicious() const { return n_malicious_; }
  std::size_t n_agents() const { return n_legit_ + n_malicious_; }

  bool is_legit(AgentId a) const { return a.index < n_legit_; }
  bool is_malicious(AgentId a) const { return a.index >= n_legit_ && a.index < n_agents(); }

  /// N_i. For malicious agents this lists only their legitimate neighbors.
  std::span<const std::size_t> neighbors(std::size_t i) const;
  std::span<const std::size_t> neighbors(AgentId a) const { return neighbors(a.index); }

  /// N_i ∩ L for a legitimate agent.
  std::span<const std::size_t> legit_neighbors(std::size_t i) const;
  std::size_t legit_degree(std::size_t i) const { return legit_neighbors(i).size(); }

  bool adjacent(std::size_t i, std::size_t j) const;

  /// Legitimate-block adjacency with a zero diagonal.
  const Adjacency& legit_adjacency() const { return legit_adjacency_; }

  /// Legitimate neighbors of every malicious agent, indexed 0..|M|-1.
  NeighborLists malicious_connectivity() const;

 private:
  friend Topology build_topology(std::size_t, std::size_t, const Adjacency&, const NeighborLists&);

  std::size_t n_legit_ = 0;
  std::size_t n_malicious_ = 0;
  Adjacency legit_adjacency_;
  NeighborLists neighbors_;
  std::vector<std::size_t> legit_degree_;
};

/// Builds a topology. `legit_adjacency` must be symmetric; diagonal entries
/// are ignored (self-influence lives in the weight rule). Entry m of
/// `malicious_connectivity` lists the legitimate neighbors of agent |L|+m.
/// Throws std::invalid_argument on asymmetry, bad shapes or out-of-range
/// neighbor references.
Topology build_topology(std::size_t n_legit, std::size_t n_malicious,
                        const Adjacency& legit_adjacency,
                        const NeighborLists& malicious_connectivity);

/// Legitimate adjacency from an undirected edge list.
Adjacency adjacency_from_edges(std::size_t n_legit,
                               std::span<const std::pair<std::size_t, std::size_t>> edges);

/// Connectivity where each of `n_malicious` agents neighbors every legitimate agent.
NeighborLists fully_connected_malicious(std::size_t n_malicious, std::size_t n_legit);

/// Same legitimate subgraph, `n_malicious` malicious agents adjacent to all
/// legitimate agents.
Topology with_malicious_count(const Topology& topo, std::size_t n_malicious);

/// True iff the subgraph induced by the legitimate agents is connected.
/// An empty legitimate set is not connected.
bool is_legit_connected(const Topology& topo);

/// The 15-agent legitimate graph used in the reference experiments, with
/// `n_malicious` malicious agents each adjacent to all legitimate agents.
Topology paper_topology(std::size_t n_malicious);

/// Initial legitimate values x_L(0) of the reference experiments.
std::vector<double> paper_initial_values();

}  // namespace trustcons

#endif  // TRUSTCONS_TOPOLOGY_HPP
