#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nu/magnitude.hpp"

namespace nu {

/// Diagonal similarity weights d_1..d_n. Entries are nonnegative; zeros are
/// allowed for the relaxed problem over d >= 0.
class ScalingVector {
 public:
  ScalingVector() = default;
  explicit ScalingVector(std::vector<double> d);
  static ScalingVector ones(int n);

  std::size_t size() const { return d_.size(); }
  double operator[](std::size_t i) const { return d_[i]; }
  const std::vector<double>& values() const { return d_; }
  bool strictly_positive() const { return strictly_positive_; }

  /// beta_i = log d_i (-inf for zero entries).
  std::vector<double> log_view() const;

 private:
  std::vector<double> d_;
  bool strictly_positive_ = true;
};

/// Scaled entry M_ij d_i / d_j with the relaxed-problem conventions:
///   M_ij = 0             -> 0
///   i == j               -> M_ii (a self-loop is invariant under scaling)
///   d_j = 0, d_i = 0     -> 0
///   d_j = 0, d_i > 0     -> +inf (infeasible)
double phi(const MagnitudeMatrix& m, const ScalingVector& d, int i, int j);

/// A scaling is admissible for the relaxed problem when no positive arc
/// enters a zero-weight node from a positive-weight node, and the zero-weight
/// nodes carry no off-diagonal cycle (a cycle's product cannot be scaled
/// away, so a 0/0 convention on it would undercut the true infimum).
bool relaxed_feasible(const MagnitudeMatrix& m, const ScalingVector& d);

/// max_ij phi; +inf when the scaling is not admissible.
double scaled_max(const MagnitudeMatrix& m, const ScalingVector& d);

/// Largest violation of the per-node balance condition
///   max_{r != k} phi(r, k) == max_{c != k} phi(k, c),
/// divided by scaled_max (absolute when the objective is zero).
double balance_residual(const MagnitudeMatrix& m, const ScalingVector& d);

struct NubarResult {
  /// The upper bound nu-bar: the maximum cycle geometric mean.
  double value = 0.0;
  ScalingVector scaling;
  /// Maximizing cycle, 1-based, closing arc implicit. Empty when the support
  /// graph is acyclic.
  std::vector<int> witness_cycle;
  /// The sufficient optimality condition holds for `scaling`.
  bool certified = false;
  /// The balance condition holds at every node within 1e-8.
  bool balanced = false;
};

/// Geometric mean of the entries along a 1-based cycle.
double cycle_geometric_mean(const MagnitudeMatrix& m,
                            std::span<const int> cycle);

/// Exact nu-bar via Karp's maximum mean cycle on log-weights, per strongly
/// connected component. The scaling comes from longest paths under
/// log M_ij - log(value).
NubarResult nubar_exact(const MagnitudeMatrix& m);

/// Independent LP route: bisection on gamma with a Bellman-Ford negative
/// cycle test on gamma - log M_ij. Meant as a cross-check for nubar_exact.
NubarResult nubar_lp(const MagnitudeMatrix& m);

/// Sufficient optimality test: every index pair within `tol` (relative) of
/// the maximum continues into a pair of the same value. true certifies
/// optimality; false is inconclusive.
bool certify_optimality(const MagnitudeMatrix& m, const ScalingVector& d,
                        double tol = 1e-9);

/// Optimal scaling that also balances every node. Each nontrivial strongly
/// connected component is max-balanced by cycle contraction; components are
/// then offset along the condensation order so that arcs between them sit at
/// least ten orders of magnitude below the objective.
NubarResult balanced_solution(const MagnitudeMatrix& m);

}  // namespace nu
