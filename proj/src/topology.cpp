#include "trustcons/topology.hpp"

#include <algorithm>
#include <array>
#include <queue>
#include <stdexcept>
#include <string>

namespace trustcons {

std::span<const std::size_t> Topology::neighbors(std::size_t i) const {
  if (i >= n_agents()) {
    throw std::out_of_range("agent index " + std::to_string(i) + " out of range");
  }
  return neighbors_[i];
}

std::span<const std::size_t> Topology::legit_neighbors(std::size_t i) const {
  if (i >= n_legit_) {
    throw std::out_of_range("agent " + std::to_string(i) + " is not legitimate");
  }
  return std::span<const std::size_t>(neighbors_[i]).first(legit_degree_[i]);
}

bool Topology::adjacent(std::size_t i, std::size_t j) const {
  if (i >= n_agents() || j >= n_agents()) return false;
  if (i < n_legit_ && j < n_legit_) return legit_adjacency_[i][j];
  const auto& list = neighbors_[i];
  return std::binary_search(list.begin(), list.end(), j);
}

NeighborLists Topology::malicious_connectivity() const {
  return NeighborLists(neighbors_.begin() + static_cast<std::ptrdiff_t>(n_legit_), neighbors_.end());
}

Topology build_topology(std::size_t n_legit, std::size_t n_malicious,
                        const Adjacency& legit_adjacency,
                        const NeighborLists& malicious_connectivity) {
  if (legit_adjacency.size() != n_legit) {
    throw std::invalid_argument("legitimate adjacency has " + std::to_string(legit_adjacency.size()) +
                                " rows, expected " + std::to_string(n_legit));
  }
  if (malicious_connectivity.size() != n_malicious) {
    throw std::invalid_argument("malicious connectivity has " +
                                std::to_string(malicious_connectivity.size()) +
                                " entries, expected " + std::to_string(n_malicious));
  }
  for (std::size_t i = 0; i < n_legit; ++i) {
    if (legit_adjacency[i].size() != n_legit) {
      throw std::invalid_argument("legitimate adjacency row " + std::to_string(i) + " has wrong length");
    }
  }

  Topology topo;
  topo.n_legit_ = n_legit;
  topo.n_malicious_ = n_malicious;
  topo.legit_adjacency_.assign(n_legit, std::vector<bool>(n_legit, false));
  topo.neighbors_.assign(n_legit + n_malicious, {});
  topo.legit_degree_.assign(n_legit, 0);

  for (std::size_t i = 0; i < n_legit; ++i) {
    for (std::size_t j = 0; j < n_legit; ++j) {
      if (i == j) continue;
      if (legit_adjacency[i][j] != legit_adjacency[j][i]) {
        throw std::invalid_argument("legitimate adjacency is not symmetric at (" + std::to_string(i) +
                                    ", " + std::to_string(j) + ")");
      }
      if (legit_adjacency[i][j]) {
        topo.legit_adjacency_[i][j] = true;
        topo.neighbors_[i].push_back(j);
      }
    }
    topo.legit_degree_[i] = topo.neighbors_[i].size();
  }

  for (std::size_t m = 0; m < n_malicious; ++m) {
    const std::size_t id = n_legit + m;
    auto list = malicious_connectivity[m];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    for (std::size_t j : list) {
      if (j >= n_legit) {
        throw std::invalid_argument("malicious agent " + std::to_string(id) +
                                    " references non-legitimate agent " + std::to_string(j));
      }
      topo.neighbors_[j].push_back(id);
    }
    topo.neighbors_[id] = std::move(list);
  }
  return topo;
}

Adjacency adjacency_from_edges(std::size_t n_legit,
                               std::span<const std::pair<std::size_t, std::size_t>> edges) {
  Adjacency adj(n_legit, std::vector<bool>(n_legit, false));
  for (const auto& [a, b] : edges) {
    if (a >= n_legit || b >= n_legit) {
      throw std::invalid_argument("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                                  ") references an agent outside 0.." + std::to_string(n_legit));
    }
    if (a == b) continue;
    adj[a][b] = true;
    adj[b][a] = true;
  }
  return adj;
}

NeighborLists fully_connected_malicious(std::size_t n_malicious, std::size_t n_legit) {
  std::vector<std::size_t> all(n_legit);
  for (std::size_t j = 0; j < n_legit; ++j) all[j] = j;
  return NeighborLists(n_malicious, all);
}

Topology with_malicious_count(const Topology& topo, std::size_t n_malicious) {
  return build_topology(topo.n_legit(), n_malicious, topo.legit_adjacency(),
                        fully_connected_malicious(n_malicious, topo.n_legit()));
}

bool is_legit_connected(const Topology& topo) {
  const std::size_t n = topo.n_legit();
  if (n == 0) return false;
  std::vector<bool> seen(n, false);
  std::queue<std::size_t> frontier;
  frontier.push(0);
  seen[0] = true;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const std::size_t i = frontier.front();
    frontier.pop();
    for (std::size_t j : topo.legit_neighbors(i)) {
      if (!seen[j]) {
        seen[j] = true;
        ++reached;
        frontier.push(j);
      }
    }
  }
  return reached == n;
}

Topology paper_topology(std::size_t n_malicious) {
  // Printed with ones on the diagonal; build_topology drops them.
  static constexpr std::array<const char*, 15> kRows = {
      "110000000101001", "111100000000000", "011100000010000", "011110000000100",
      "000111100000001", "000011100000100", "000011110000001", "000000111000110",
      "000000011100010", "100000001111010", "001000000111001", "100000000111100",
      "000101010001110", "000000011100111", "100010100010011",
  };
  Adjacency adj(kRows.size(), std::vector<bool>(kRows.size(), false));
  for (std::size_t i = 0; i < kRows.size(); ++i) {
    for (std::size_t j = 0; j < kRows.size(); ++j) adj[i][j] = kRows[i][j] == '1';
  }
  return build_topology(kRows.size(), n_malicious, adj,
                        fully_connected_malicious(n_malicious, kRows.size()));
}

std::vector<double> paper_initial_values() {
  return {-2.59, -2.44, -4.23, -1.45, -1.46, 0.871, -0.51, -3.19,
          -0.59, -3.31, -2.25, 1.31,  1.87,  1.34,  1.76};
}

}  // namespace trustcons
