#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nu/magnitude.hpp"
#include "nu/nubar.hpp"

namespace nu {

struct BalanceRecord {
  /// Number of updates applied; record t holds the iterate d[t + 1] in the
  /// 1-based numbering of the algorithm listing (d[1] is all-ones).
  int t = 0;
  std::vector<double> d;
  /// max_ij phi_d, diagonal included.
  double objective = 0.0;
  /// |obj_t - obj_{t-1}| / max(obj_{t-1}, 1e-300).
  double rel_change = 0.0;
  /// max_k |d_k[t] - d_k[t-1]| / max_k d_k[t-1].
  double step = 0.0;
};

struct BalanceTrace {
  double initial_objective = 0.0;
  std::vector<BalanceRecord> iterations;
  bool converged = false;
  bool oscillating = false;
  ScalingVector final_scaling;
};

enum class UpdateOrder { kSynchronous, kGaussSeidel };

struct BalanceOptions {
  UpdateOrder order = UpdateOrder::kSynchronous;
  /// Keep every iterate in the trace; otherwise only the last two are kept.
  bool keep_history = true;
};

/// Local balancing heuristic. Every node moves toward the geometric mean of
/// its largest incoming and largest outgoing scaled weight (diagonal
/// excluded), interpolated by theta. A node whose incoming or outgoing
/// maximum is zero keeps its weight. Iteration stops when both the relative
/// objective change and the relative step are <= tol, or after max_iter
/// updates. A period-2 orbit is flagged as oscillating.
BalanceTrace heuristic_balance(const MagnitudeMatrix& m, double theta,
                               int max_iter, double tol,
                               const BalanceOptions& options = {});

enum class RandomDistribution { kUniform, kSparseUniform };

struct StudyOptions {
  RandomDistribution distribution = RandomDistribution::kUniform;
  /// Bernoulli keep-probability for kSparseUniform.
  double density = 0.2;
  int max_iter = 1000;
  int threads = 0;
  /// Compare the final objective of every run against nubar_exact.
  bool check_optimum = true;
};

/// Deterministic random matrix for one study trial: n x n with i.i.d.
/// entries from the chosen distribution, derived from seed and trial index.
MagnitudeMatrix random_study_matrix(int n, std::uint64_t seed, int trial,
                                    const StudyOptions& options = {});

struct StudyRow {
  int n = 0;
  double theta = 0.0;
  double tol = 0.0;
  /// Largest iteration count over trials (max_iter for a failed trial).
  int max_iters = 0;
  double median_iters = 0.0;
  /// Trials that did not reach tol within max_iter.
  int failures = 0;
  /// Largest |objective - nubar| / nubar at the stopping iteration, over
  /// the trials that reached tol (only with check_optimum).
  double worst_gap = 0.0;
};

/// A run that missed the tolerance or ended away from the optimum.
struct StudyCounterexample {
  int n = 0;
  double theta = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  double tol = 0.0;
  int iterations = 0;
  double final_objective = 0.0;
  double nubar = 0.0;
  std::string reason;
};

struct StudyResult {
  std::vector<StudyRow> rows;
  /// Runs that missed a tolerance, or stopped more than 10 tol away from
  /// the optimum.
  std::vector<StudyCounterexample> counterexamples;
};

/// Iteration counts of the heuristic over random matrices, for every
/// (n, theta, tol). Each (trial, theta) pair is run once to the tightest
/// tolerance and the first iteration meeting each looser tolerance is read
/// off the same trace.
StudyResult convergence_study(const std::vector<int>& ns, int trials,
                              const std::vector<double>& thetas,
                              const std::vector<double>& tol_grid,
                              std::uint64_t seed,
                              const StudyOptions& options = {});

}  // namespace nu
