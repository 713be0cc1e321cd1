#pragma once

// Weighted digraph helpers shared by the combinatorial scaling solvers.
// Arc weights are additive (log-domain magnitudes).

#include <vector>

namespace nu::detail {

struct Arc {
  int from;
  int to;
  double weight;
};

/// Strongly connected components in topological order of the condensation
/// (every arc between components goes from an earlier to a later one).
/// Nodes inside a component are sorted ascending.
std::vector<std::vector<int>> strongly_connected_components(
    int n, const std::vector<Arc>& arcs);

struct MeanCycle {
  double mean;
  /// Node sequence; the closing arc back to the first node is implicit.
  /// Rotated to start at its smallest node.
  std::vector<int> nodes;
};

/// Karp's maximum mean cycle on a strongly connected graph that has at
/// least one cycle. The returned cycle is read off the optimal n-arc walk;
/// every cycle on that walk is optimal, the best one by exact re-summation is
/// kept (ties: lexicographically smallest node sequence).
MeanCycle max_mean_cycle(int n, const std::vector<Arc>& arcs);

/// Potentials p such that w_uv + p_u - p_v is max-balanced (for every node
/// the largest incoming reweighted arc equals the largest outgoing one).
/// Requires a strongly connected graph without self-loops. Works by
/// repeatedly contracting a maximum mean cycle.
std::vector<double> max_balance_potentials(int n, const std::vector<Arc>& arcs);

}  // namespace nu::detail
