#include "detail/digraph.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <stdexcept>

namespace nu::detail {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Keeps the heaviest arc for each (from, to) pair.
std::vector<Arc> dedupe_arcs(std::vector<Arc> arcs) {
  std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) {
    if (a.from != b.from) return a.from < b.from;
    if (a.to != b.to) return a.to < b.to;
    return a.weight > b.weight;
  });
  std::vector<Arc> out;
  for (const Arc& a : arcs) {
    if (!out.empty() && out.back().from == a.from && out.back().to == a.to) {
      continue;
    }
    out.push_back(a);
  }
  return out;
}

std::vector<int> rotate_to_min(std::vector<int> cycle) {
  auto it = std::min_element(cycle.begin(), cycle.end());
  std::rotate(cycle.begin(), it, cycle.end());
  return cycle;
}

}  // namespace

std::vector<std::vector<int>> strongly_connected_components(
    int n, const std::vector<Arc>& arcs) {
  std::vector<std::vector<int>> adj(n);
  for (const Arc& a : arcs) adj[a.from].push_back(a.to);
  for (auto& list : adj) std::sort(list.begin(), list.end());

  // Iterative Tarjan.
  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<char> on_stack(n, 0);
  std::vector<std::vector<int>> components;
  int counter = 0;
  struct Frame {
    int node;
    std::size_t next;
  };
  std::vector<Frame> call;
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next < adj[f.node].size()) {
        const int w = adj[f.node][f.next++];
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.node] = std::min(low[f.node], index[w]);
        }
        continue;
      }
      const int v = f.node;
      call.pop_back();
      if (!call.empty()) {
        low[call.back().node] = std::min(low[call.back().node], low[v]);
      }
      if (low[v] == index[v]) {
        std::vector<int> comp;
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
      }
    }
  }
  // Tarjan emits sinks first.
  std::reverse(components.begin(), components.end());
  return components;
}

MeanCycle max_mean_cycle(int n, const std::vector<Arc>& raw_arcs) {
  const std::vector<Arc> arcs = dedupe_arcs(raw_arcs);
  if (arcs.empty()) throw std::logic_error("max_mean_cycle: graph has no arcs");

  std::vector<std::vector<int>> in_arcs(n);
  for (int a = 0; a < static_cast<int>(arcs.size()); ++a) {
    in_arcs[arcs[a].to].push_back(a);
  }

  // best[k][v]: heaviest walk with exactly k arcs from node 0 to v.
  const auto idx = [n](int k, int v) {
    return static_cast<std::size_t>(k) * n + v;
  };
  std::vector<double> best(static_cast<std::size_t>(n + 1) * n, kNegInf);
  std::vector<int> pred(static_cast<std::size_t>(n + 1) * n, -1);
  best[idx(0, 0)] = 0.0;
  for (int k = 1; k <= n; ++k) {
    for (int v = 0; v < n; ++v) {
      double value = kNegInf;
      int arg = -1;
      for (int a : in_arcs[v]) {
        const double prev = best[idx(k - 1, arcs[a].from)];
        if (prev == kNegInf) continue;
        const double cand = prev + arcs[a].weight;
        if (cand > value) {
          value = cand;
          arg = arcs[a].from;
        }
      }
      best[idx(k, v)] = value;
      pred[idx(k, v)] = arg;
    }
  }

  double lambda = kNegInf;
  int argmax = -1;
  for (int v = 0; v < n; ++v) {
    const double dn = best[idx(n, v)];
    if (dn == kNegInf) continue;
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
      const double dk = best[idx(k, v)];
      if (dk == kNegInf) continue;
      worst = std::min(worst, (dn - dk) / (n - k));
    }
    if (worst > lambda) {
      lambda = worst;
      argmax = v;
    }
  }
  if (argmax < 0) throw std::logic_error("max_mean_cycle: no cycle found");

  // Walk back n arcs from the maximizer and split the walk into cycles.
  std::vector<int> walk(n + 1);
  walk[n] = argmax;
  for (int k = n; k > 0; --k) walk[k - 1] = pred[idx(k, walk[k])];

  std::vector<std::vector<double>> weight(n, std::vector<double>(n, kNegInf));
  for (const Arc& a : arcs) weight[a.from][a.to] = a.weight;

  MeanCycle result{kNegInf, {}};
  std::vector<int> path;
  std::vector<int> position(n, -1);
  for (int v : walk) {
    if (position[v] >= 0) {
      const std::size_t start = static_cast<std::size_t>(position[v]);
      std::vector<int> cycle(path.begin() + start, path.end());
      for (std::size_t i = start; i < path.size(); ++i) position[path[i]] = -1;
      path.resize(start);
      double sum = 0.0;
      for (std::size_t i = 0; i < cycle.size(); ++i) {
        sum += weight[cycle[i]][cycle[(i + 1) % cycle.size()]];
      }
      const double mean = sum / static_cast<double>(cycle.size());
      cycle = rotate_to_min(std::move(cycle));
      if (mean > result.mean ||
          (mean == result.mean && cycle < result.nodes)) {
        result = {mean, std::move(cycle)};
      }
    }
    position[v] = static_cast<int>(path.size());
    path.push_back(v);
  }
  assert(!result.nodes.empty());
  return result;
}

std::vector<double> max_balance_potentials(int n,
                                           const std::vector<Arc>& arcs) {
  std::vector<int> owner(n);
  std::vector<double> potential(n, 0.0);
  for (int v = 0; v < n; ++v) owner[v] = v;
  int supers = n;

  while (supers > 1) {
    std::vector<Arc> contracted;
    contracted.reserve(arcs.size());
    for (const Arc& a : arcs) {
      const int u = owner[a.from];
      const int v = owner[a.to];
      if (u == v) continue;
      contracted.push_back(
          {u, v, a.weight + potential[a.from] - potential[a.to]});
    }
    contracted = dedupe_arcs(std::move(contracted));
    std::vector<std::vector<double>> weight(
        supers, std::vector<double>(supers, kNegInf));
    for (const Arc& a : contracted) weight[a.from][a.to] = a.weight;

    const MeanCycle cycle = max_mean_cycle(supers, contracted);
    const std::size_t len = cycle.nodes.size();
    if (len < 2) throw std::logic_error("max_balance_potentials: self-loop");

    // Tighten every arc of the cycle to the cycle mean.
    std::vector<double> shift(supers, 0.0);
    for (std::size_t i = 0; i + 1 < len; ++i) {
      const int u = cycle.nodes[i];
      const int v = cycle.nodes[i + 1];
      shift[v] = shift[u] + weight[u][v] - cycle.mean;
    }
    std::vector<char> in_cycle(supers, 0);
    for (int s : cycle.nodes) in_cycle[s] = 1;

    // Renumber: the merged node takes the smallest id of the cycle.
    const int merged = cycle.nodes.front();
    std::vector<int> remap(supers, -1);
    int next = 0;
    for (int s = 0; s < supers; ++s) {
      if (in_cycle[s] && s != merged) continue;
      remap[s] = next++;
    }
    for (int s : cycle.nodes) remap[s] = remap[merged];
    for (int v = 0; v < n; ++v) {
      if (in_cycle[owner[v]]) potential[v] += shift[owner[v]];
      owner[v] = remap[owner[v]];
    }
    supers = next;
  }
  return potential;
}

}  // namespace nu::detail
