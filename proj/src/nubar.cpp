#include "nu/nubar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "detail/digraph.hpp"
#include "nu/error.hpp"

namespace nu {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_size(const MagnitudeMatrix& m, const ScalingVector& d) {
  if (static_cast<int>(d.size()) != m.n()) {
    throw ValidationError("scaling has " + std::to_string(d.size()) +
                          " entries, matrix dimension is " +
                          std::to_string(m.n()));
  }
}

std::vector<detail::Arc> log_arcs(const MagnitudeMatrix& m,
                                  bool include_diagonal) {
  std::vector<detail::Arc> arcs;
  for (int i = 0; i < m.n(); ++i) {
    for (int j = 0; j < m.n(); ++j) {
      if (!include_diagonal && i == j) continue;
      if (m(i, j) > 0.0) arcs.push_back({i, j, std::log(m(i, j))});
    }
  }
  return arcs;
}

ScalingVector from_log(const std::vector<double>& beta) {
  const double top = *std::max_element(beta.begin(), beta.end());
  std::vector<double> d(beta.size());
  for (std::size_t i = 0; i < beta.size(); ++i) d[i] = std::exp(beta[i] - top);
  return ScalingVector(std::move(d));
}

// Relaxed optimum for an acyclic support: zero weight on every node with an
// outgoing arc, unit weight on sinks. All scaled entries vanish.
ScalingVector acyclic_scaling(const MagnitudeMatrix& m) {
  std::vector<double> d(m.n(), 1.0);
  for (int i = 0; i < m.n(); ++i) {
    for (int j = 0; j < m.n(); ++j) {
      if (j != i && m(i, j) > 0.0) {
        d[i] = 0.0;
        break;
      }
    }
  }
  return ScalingVector(std::move(d));
}

void finish(const MagnitudeMatrix& m, NubarResult& r) {
  r.certified = certify_optimality(m, r.scaling);
  r.balanced = balance_residual(m, r.scaling) <= 1e-8;
}

}  // namespace

ScalingVector::ScalingVector(std::vector<double> d) : d_(std::move(d)) {
  for (std::size_t i = 0; i < d_.size(); ++i) {
    if (!std::isfinite(d_[i]) || d_[i] < 0.0) {
      throw ValidationError("scaling entry " + std::to_string(i + 1) +
                            " must be finite and nonnegative");
    }
    if (d_[i] == 0.0) strictly_positive_ = false;
  }
}

ScalingVector ScalingVector::ones(int n) {
  return ScalingVector(std::vector<double>(n, 1.0));
}

std::vector<double> ScalingVector::log_view() const {
  std::vector<double> beta(d_.size());
  for (std::size_t i = 0; i < d_.size(); ++i) {
    beta[i] = d_[i] > 0.0 ? std::log(d_[i]) : -kInf;
  }
  return beta;
}

double phi(const MagnitudeMatrix& m, const ScalingVector& d, int i, int j) {
  const double v = m(i, j);
  if (v == 0.0) return 0.0;
  if (i == j) return v;
  if (d[j] > 0.0) return v * d[i] / d[j];
  return d[i] == 0.0 ? 0.0 : kInf;
}

bool relaxed_feasible(const MagnitudeMatrix& m, const ScalingVector& d) {
  check_size(m, d);
  const int n = m.n();
  std::vector<int> indegree(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j || m(i, j) == 0.0 || d[j] > 0.0) continue;
      if (d[i] > 0.0) return false;
      ++indegree[j];
    }
  }
  // Kahn's algorithm on the zero-weight nodes.
  std::vector<int> queue;
  int zeros = 0;
  for (int v = 0; v < n; ++v) {
    if (d[v] > 0.0) continue;
    ++zeros;
    if (indegree[v] == 0) queue.push_back(v);
  }
  int removed = 0;
  while (!queue.empty()) {
    const int u = queue.back();
    queue.pop_back();
    ++removed;
    for (int v = 0; v < n; ++v) {
      if (v == u || d[v] > 0.0 || m(u, v) == 0.0) continue;
      if (--indegree[v] == 0) queue.push_back(v);
    }
  }
  return removed == zeros;
}

double scaled_max(const MagnitudeMatrix& m, const ScalingVector& d) {
  if (!relaxed_feasible(m, d)) return kInf;
  double best = 0.0;
  for (int i = 0; i < m.n(); ++i) {
    for (int j = 0; j < m.n(); ++j) best = std::max(best, phi(m, d, i, j));
  }
  return best;
}

double balance_residual(const MagnitudeMatrix& m, const ScalingVector& d) {
  const double value = scaled_max(m, d);
  if (!std::isfinite(value)) return kInf;
  double worst = 0.0;
  for (int k = 0; k < m.n(); ++k) {
    double in = 0.0, out = 0.0;
    for (int r = 0; r < m.n(); ++r) {
      if (r == k) continue;
      in = std::max(in, phi(m, d, r, k));
      out = std::max(out, phi(m, d, k, r));
    }
    worst = std::max(worst, std::abs(in - out));
  }
  return value > 0.0 ? worst / value : worst;
}

double cycle_geometric_mean(const MagnitudeMatrix& m,
                            std::span<const int> cycle) {
  if (cycle.empty()) throw ValidationError("cycle must be nonempty");
  double sum = 0.0;
  for (std::size_t k = 0; k < cycle.size(); ++k) {
    const int i = cycle[k] - 1;
    const int j = cycle[(k + 1) % cycle.size()] - 1;
    if (i < 0 || i >= m.n() || j < 0 || j >= m.n()) {
      throw ValidationError("cycle index out of range");
    }
    if (m(i, j) == 0.0) return 0.0;
    sum += std::log(m(i, j));
  }
  return std::exp(sum / static_cast<double>(cycle.size()));
}

NubarResult nubar_exact(const MagnitudeMatrix& m) {
  const int n = m.n();
  const std::vector<detail::Arc> arcs = log_arcs(m, /*include_diagonal=*/true);
  const auto components = detail::strongly_connected_components(n, arcs);

  std::vector<int> local(n, -1);
  bool found = false;
  detail::MeanCycle best{-kInf, {}};
  for (const auto& nodes : components) {
    if (nodes.size() == 1 && m(nodes[0], nodes[0]) == 0.0) continue;
    for (std::size_t a = 0; a < nodes.size(); ++a) local[nodes[a]] = a;
    std::vector<detail::Arc> sub;
    for (const detail::Arc& arc : arcs) {
      if (local[arc.from] >= 0 && local[arc.to] >= 0) {
        sub.push_back({local[arc.from], local[arc.to], arc.weight});
      }
    }
    detail::MeanCycle cycle =
        detail::max_mean_cycle(static_cast<int>(nodes.size()), sub);
    for (int& v : cycle.nodes) v = nodes[v];
    // Nodes are sorted within a component, so the rotation still starts at
    // the smallest index.
    const double band = 1e-12 * std::max(1.0, std::abs(cycle.mean));
    if (!found || cycle.mean > best.mean + band ||
        (std::abs(cycle.mean - best.mean) <= band &&
         cycle.nodes < best.nodes)) {
      best = std::move(cycle);
      found = true;
    }
    for (int v : nodes) local[v] = -1;
  }

  NubarResult result;
  if (!found) {
    result.value = 0.0;
    result.scaling = acyclic_scaling(m);
    finish(m, result);
    return result;
  }

  for (int v : best.nodes) result.witness_cycle.push_back(v + 1);
  result.value = cycle_geometric_mean(m, result.witness_cycle);

  // Longest paths from a virtual source under log M_ij - lambda. No cycle is
  // positive, so n passes suffice; the extra pass only absorbs rounding.
  const double lambda = std::log(result.value);
  std::vector<double> beta(n, 0.0);
  for (int pass = 0; pass < n; ++pass) {
    bool changed = false;
    for (const detail::Arc& arc : arcs) {
      if (arc.from == arc.to) continue;
      const double cand = beta[arc.from] + arc.weight - lambda;
      if (cand > beta[arc.to]) {
        beta[arc.to] = cand;
        changed = true;
      }
    }
    if (!changed) break;
  }
  result.scaling = from_log(beta);
  finish(m, result);
  return result;
}

namespace {

struct FeasibilityCheck {
  bool feasible;
  std::vector<double> dist;
  std::vector<int> cycle;  // negative cycle, 0-based, when infeasible
};

// Bellman-Ford on costs gamma - log M_ij from a virtual source.
FeasibilityCheck check_gamma(int n, const std::vector<detail::Arc>& arcs,
                             double gamma) {
  FeasibilityCheck out{true, std::vector<double>(n, 0.0), {}};
  std::vector<int> pred(n, -1);
  int last = -1;
  for (int pass = 0; pass < n; ++pass) {
    last = -1;
    for (const detail::Arc& arc : arcs) {
      const double cand = out.dist[arc.from] + (gamma - arc.weight);
      if (cand < out.dist[arc.to]) {
        out.dist[arc.to] = cand;
        pred[arc.to] = arc.from;
        last = arc.to;
      }
    }
    if (last < 0) return out;
  }
  out.feasible = false;
  // Step back n times to land inside the cycle, then trace it.
  int v = last;
  for (int k = 0; k < n; ++k) v = pred[v];
  std::vector<int> reversed{v};
  for (int u = pred[v]; u != v; u = pred[u]) reversed.push_back(u);
  out.cycle.assign(reversed.rbegin(), reversed.rend());
  std::rotate(out.cycle.begin(),
              std::min_element(out.cycle.begin(), out.cycle.end()),
              out.cycle.end());
  return out;
}

bool has_cycle(int n, const std::vector<detail::Arc>& arcs) {
  std::vector<int> indegree(n, 0);
  for (const detail::Arc& a : arcs) ++indegree[a.to];
  std::vector<int> queue;
  for (int v = 0; v < n; ++v) {
    if (indegree[v] == 0) queue.push_back(v);
  }
  int removed = 0;
  while (!queue.empty()) {
    const int u = queue.back();
    queue.pop_back();
    ++removed;
    for (const detail::Arc& a : arcs) {
      if (a.from == u && --indegree[a.to] == 0) queue.push_back(a.to);
    }
  }
  return removed < n;
}

}  // namespace

NubarResult nubar_lp(const MagnitudeMatrix& m) {
  const int n = m.n();
  const std::vector<detail::Arc> arcs = log_arcs(m, /*include_diagonal=*/true);
  NubarResult result;
  if (!has_cycle(n, arcs)) {
    result.scaling = acyclic_scaling(m);
    finish(m, result);
    return result;
  }

  double lo = kInf, hi = -kInf;
  for (const detail::Arc& a : arcs) {
    lo = std::min(lo, a.weight);
    hi = std::max(hi, a.weight);
  }
  FeasibilityCheck at_hi = check_gamma(n, arcs, hi);
  FeasibilityCheck at_lo = check_gamma(n, arcs, lo);
  if (at_lo.feasible) {
    // Every cycle has mean exactly lo.
    hi = lo;
    at_hi = at_lo;
    at_lo = check_gamma(n, arcs, lo - 1e-9 * std::max(1.0, std::abs(lo)));
  } else {
    for (int it = 0; it < 200; ++it) {
      if (hi - lo <= 1e-14 * std::max(1.0, std::abs(hi))) break;
      const double mid = 0.5 * (lo + hi);
      FeasibilityCheck probe = check_gamma(n, arcs, mid);
      if (probe.feasible) {
        hi = mid;
        at_hi = std::move(probe);
      } else {
        lo = mid;
        at_lo = std::move(probe);
      }
    }
  }

  result.value = std::exp(hi);
  for (int v : at_lo.cycle) result.witness_cycle.push_back(v + 1);
  std::vector<double> beta(n);
  for (int i = 0; i < n; ++i) beta[i] = -at_hi.dist[i];
  result.scaling = from_log(beta);
  finish(m, result);
  return result;
}

bool certify_optimality(const MagnitudeMatrix& m, const ScalingVector& d,
                        double tol) {
  check_size(m, d);
  const double top = scaled_max(m, d);
  if (!std::isfinite(top)) return false;
  if (top == 0.0) return true;
  const int n = m.n();
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      const double v = phi(m, d, k, l);
      if (v < top * (1.0 - tol)) continue;
      double next = 0.0;
      for (int j = 0; j < n; ++j) next = std::max(next, phi(m, d, l, j));
      if (std::abs(v - next) > tol * top) return false;
    }
  }
  return true;
}

NubarResult balanced_solution(const MagnitudeMatrix& m) {
  NubarResult result = nubar_exact(m);
  if (result.value == 0.0) return result;

  const int n = m.n();
  const std::vector<detail::Arc> arcs = log_arcs(m, /*include_diagonal=*/false);
  const auto components = detail::strongly_connected_components(n, arcs);
  std::vector<int> comp_of(n);
  for (std::size_t c = 0; c < components.size(); ++c) {
    for (int v : components[c]) comp_of[v] = static_cast<int>(c);
  }

  // Max-balance each nontrivial component on its own.
  std::vector<double> beta(n, 0.0);
  std::vector<double> in_max(n, -kInf);
  std::vector<int> local(n, -1);
  for (const auto& nodes : components) {
    if (nodes.size() < 2) continue;
    for (std::size_t a = 0; a < nodes.size(); ++a) local[nodes[a]] = a;
    std::vector<detail::Arc> sub;
    for (const detail::Arc& arc : arcs) {
      if (local[arc.from] >= 0 && local[arc.to] >= 0) {
        sub.push_back({local[arc.from], local[arc.to], arc.weight});
      }
    }
    const std::vector<double> p = detail::max_balance_potentials(
        static_cast<int>(nodes.size()), sub);
    for (std::size_t a = 0; a < nodes.size(); ++a) beta[nodes[a]] = p[a];
    for (const detail::Arc& arc : sub) {
      const int v = nodes[arc.to];
      in_max[v] = std::max(in_max[v], arc.weight + p[arc.from] - p[arc.to]);
    }
    for (int v : nodes) local[v] = -1;
  }

  // Push arcs between components far below the local maxima at both ends.
  const double log_value = std::log(result.value);
  const double margin = std::log(1e-10);
  std::vector<std::vector<const detail::Arc*>> incoming(n);
  for (const detail::Arc& arc : arcs) {
    if (comp_of[arc.from] != comp_of[arc.to]) {
      incoming[arc.to].push_back(&arc);
    }
  }
  std::vector<double> offset(components.size(), 0.0);
  for (std::size_t c = 0; c < components.size(); ++c) {
    double need = -kInf;
    for (int v : components[c]) {
      for (const detail::Arc* arc : incoming[v]) {
        const int u = arc->from;
        double target = log_value;
        if (std::isfinite(in_max[u])) target = std::min(target, in_max[u]);
        if (std::isfinite(in_max[v])) target = std::min(target, in_max[v]);
        target += margin;
        need = std::max(need, arc->weight + beta[u] + offset[comp_of[u]] -
                                  beta[v] - target);
      }
    }
    if (std::isfinite(need)) offset[c] = need;
  }
  for (int v = 0; v < n; ++v) beta[v] += offset[comp_of[v]];

  result.scaling = from_log(beta);
  finish(m, result);
  return result;
}

}  // namespace nu
