#include "nu/balancer.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "nu/error.hpp"
#include "nu/parallel.hpp"

namespace nu {
namespace {

// Relative max-norm distance between two iterates.
double relative_distance(const std::vector<double>& a,
                         const std::vector<double>& b) {
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff = std::max(diff, std::abs(a[i] - b[i]));
    scale = std::max(scale, std::abs(b[i]));
  }
  return scale > 0.0 ? diff / scale : diff;
}

double objective(const MagnitudeMatrix& m, const std::vector<double>& d) {
  double best = 0.0;
  for (int i = 0; i < m.n(); ++i) {
    const auto row = m.row(i);
    for (int j = 0; j < m.n(); ++j) {
      if (row[j] > 0.0) best = std::max(best, row[j] * d[i] / d[j]);
    }
  }
  return best;
}

double node_update(const MagnitudeMatrix& m, const std::vector<double>& d,
                   int k, double theta) {
  double in = 0.0, out = 0.0;
  for (int r = 0; r < m.n(); ++r) {
    if (r == k) continue;
    in = std::max(in, m(r, k) * d[r]);
    out = std::max(out, m(k, r) / d[r]);
  }
  const double target =
      (in == 0.0 || out == 0.0) ? d[k] : std::sqrt(in) / std::sqrt(out);
  return (1.0 - theta) * d[k] + theta * target;
}

constexpr double kPeriodTol = 1e-9;

}  // namespace

BalanceTrace heuristic_balance(const MagnitudeMatrix& m, double theta,
                               int max_iter, double tol,
                               const BalanceOptions& options) {
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw ValidationError("theta must lie in (0, 1]");
  }
  if (!(tol > 0.0)) throw ValidationError("tolerance must be > 0");
  if (max_iter < 1) throw ValidationError("max_iter must be >= 1");

  const int n = m.n();
  BalanceTrace trace;
  std::vector<double> d(n, 1.0), next(n), before_prev;
  trace.initial_objective = objective(m, d);
  double prev_obj = trace.initial_objective;
  bool period_two = false;

  for (int t = 1; t <= max_iter; ++t) {
    if (options.order == UpdateOrder::kSynchronous) {
      for (int k = 0; k < n; ++k) next[k] = node_update(m, d, k, theta);
    } else {
      next = d;
      for (int k = 0; k < n; ++k) next[k] = node_update(m, next, k, theta);
    }

    BalanceRecord rec;
    rec.t = t;
    rec.objective = objective(m, next);
    rec.rel_change = std::abs(rec.objective - prev_obj) /
                     std::max(prev_obj, 1e-300);
    rec.step = relative_distance(next, d);
    rec.d = next;

    if (!before_prev.empty()) {
      period_two = relative_distance(next, before_prev) <= kPeriodTol &&
                   relative_distance(d, before_prev) > kPeriodTol;
      if (period_two) trace.oscillating = true;
    }
    before_prev = d;
    d = next;
    prev_obj = rec.objective;

    const bool done = rec.rel_change <= tol && rec.step <= tol;
    if (!options.keep_history && trace.iterations.size() >= 2) {
      trace.iterations.erase(trace.iterations.begin());
    }
    trace.iterations.push_back(std::move(rec));
    if (done) {
      trace.converged = true;
      break;
    }
  }
  if (trace.converged) trace.oscillating = false;
  trace.final_scaling = ScalingVector(d);
  return trace;
}

MagnitudeMatrix random_study_matrix(int n, std::uint64_t seed, int trial,
                                    const StudyOptions& options) {
  std::mt19937_64 gen(seed + static_cast<std::uint64_t>(trial));
  // 53-bit uniform on [0, 1), spelled out so the stream does not depend on
  // the standard library's distribution implementation.
  auto uniform = [&gen] {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
  };
  std::vector<double> values(static_cast<std::size_t>(n) * n);
  for (double& v : values) {
    if (options.distribution == RandomDistribution::kSparseUniform) {
      const bool keep = uniform() < options.density;
      const double x = uniform();
      v = keep ? x : 0.0;
    } else {
      v = uniform();
    }
  }
  return MagnitudeMatrix(n, std::move(values));
}

StudyResult convergence_study(const std::vector<int>& ns, int trials,
                              const std::vector<double>& thetas,
                              const std::vector<double>& tol_grid,
                              std::uint64_t seed,
                              const StudyOptions& options) {
  if (ns.empty() || thetas.empty() || tol_grid.empty() || trials < 1) {
    throw ValidationError("study needs sizes, thetas, tolerances and trials");
  }
  for (int n : ns) {
    if (n < 1) throw ValidationError("study sizes must be positive");
  }
  for (double tol : tol_grid) {
    if (!(tol > 0.0)) throw ValidationError("study tolerances must be > 0");
  }
  const double tightest = *std::min_element(tol_grid.begin(), tol_grid.end());

  StudyResult result;
  for (int n : ns) {
    std::vector<double> nubar(trials, 0.0);
    if (options.check_optimum) {
      parallel_for(trials, options.threads, [&](std::size_t trial) {
        nubar[trial] = nubar_exact(random_study_matrix(
                                       n, seed, static_cast<int>(trial),
                                       options))
                           .value;
      });
    }
    for (double theta : thetas) {
      // hits[trial][g]: first iteration meeting tol_grid[g], or -1.
      std::vector<std::vector<int>> hits(trials);
      std::vector<std::vector<double>> objective_at(trials);
      parallel_for(trials, options.threads, [&](std::size_t trial) {
        const MagnitudeMatrix mat =
            random_study_matrix(n, seed, static_cast<int>(trial), options);
        const BalanceTrace trace =
            heuristic_balance(mat, theta, options.max_iter, tightest);
        hits[trial].assign(tol_grid.size(), -1);
        objective_at[trial].assign(tol_grid.size(), 0.0);
        for (std::size_t g = 0; g < tol_grid.size(); ++g) {
          for (const BalanceRecord& rec : trace.iterations) {
            if (rec.rel_change <= tol_grid[g] && rec.step <= tol_grid[g]) {
              hits[trial][g] = rec.t;
              objective_at[trial][g] = rec.objective;
              break;
            }
          }
        }
      });

      for (std::size_t g = 0; g < tol_grid.size(); ++g) {
        StudyRow row;
        row.n = n;
        row.theta = theta;
        row.tol = tol_grid[g];
        std::vector<int> counts;
        for (int trial = 0; trial < trials; ++trial) {
          const int hit = hits[trial][g];
          const int count = hit < 0 ? options.max_iter : hit;
          counts.push_back(count);
          row.max_iters = std::max(row.max_iters, count);
          StudyCounterexample ce{n,     theta, trial, seed + trial, row.tol,
                                 count, 0.0,   nubar[trial], ""};
          if (hit < 0) {
            ++row.failures;
            ce.reason = "tolerance not reached";
            result.counterexamples.push_back(ce);
            continue;
          }
          if (options.check_optimum && nubar[trial] > 0.0) {
            const double gap =
                std::abs(objective_at[trial][g] - nubar[trial]) / nubar[trial];
            row.worst_gap = std::max(row.worst_gap, gap);
            if (gap > 10.0 * row.tol) {
              ce.final_objective = objective_at[trial][g];
              ce.reason = "stopped away from the optimum";
              result.counterexamples.push_back(ce);
            }
          }
        }
        std::sort(counts.begin(), counts.end());
        const std::size_t mid = counts.size() / 2;
        row.median_iters = counts.size() % 2 == 1
                               ? counts[mid]
                               : 0.5 * (counts[mid - 1] + counts[mid]);
        result.rows.push_back(row);
      }
    }
  }
  return result;
}

}  // namespace nu
