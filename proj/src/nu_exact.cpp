#include "nu/nu_exact.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nu/error.hpp"
#include "nu/parallel.hpp"
#include "nu/spectral.hpp"

namespace nu {

std::string_view to_string(NuMethod method) {
  switch (method) {
    case NuMethod::kClosedForm2x2:
      return "closed_form_2x2";
    case NuMethod::kRing:
      return "ring";
    case NuMethod::kOracle:
      return "oracle";
    case NuMethod::kLowerBoundOnly:
      return "lower_bound_only";
  }
  return "unknown";
}

namespace {

// Only self-loops can destabilize: put all mass on the largest one.
NuResult self_loop_result(const MagnitudeMatrix& m, NuMethod method) {
  NuResult r;
  r.method = method;
  int best = 0;
  for (int i = 1; i < m.n(); ++i) {
    if (m(i, i) > m(best, best)) best = i;
  }
  r.value = m(best, best);
  if (r.value == 0.0) {
    r.attained = false;
    return r;
  }
  r.witness_delta.assign(m.n(), 0.0);
  r.witness_delta[best] = 1.0 / r.value;
  return r;
}

double scaled_rho(const MagnitudeMatrix& m, const std::vector<double>& u) {
  const int n = m.n();
  std::vector<double> values(m.values());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) values[i * n + j] *= u[i];
  }
  return spectral_radius(MagnitudeMatrix(n, std::move(values)), 1e-13).rho;
}

// All compositions of `total` into n nonnegative parts, lexicographic.
void compositions(int n, int total, std::vector<int>& current,
                  std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == n - 1) {
    current.push_back(total);
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (int k = 0; k <= total; ++k) {
    current.push_back(k);
    compositions(n, total - k, current, out);
    current.pop_back();
  }
}

struct Candidate {
  std::vector<double> u;
  double rho;
};

// Pattern search over moves that shift mass between two coordinates.
Candidate polish(const MagnitudeMatrix& m, Candidate c, double step,
                 int refine_steps) {
  const int n = m.n();
  for (int level = 0; level < refine_steps; ++level) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (i == j || c.u[j] <= 0.0) continue;
          std::vector<double> u = c.u;
          const double h = std::min(step, u[j]);
          u[i] += h;
          u[j] -= h;
          const double rho = scaled_rho(m, u);
          if (rho > c.rho * (1.0 + 1e-15)) {
            c = {std::move(u), rho};
            improved = true;
          }
        }
      }
    }
    step *= 0.5;
  }
  return c;
}

}  // namespace

NuResult nu_2x2(const MagnitudeMatrix& m) {
  if (m.n() != 2) {
    throw ValidationError("nu_2x2 requires a 2x2 matrix, got n = " +
                          std::to_string(m.n()));
  }
  if (m(0, 1) == 0.0 || m(1, 0) == 0.0) {
    return self_loop_result(m, NuMethod::kClosedForm2x2);
  }
  const double s = std::sqrt(m(0, 1) * m(1, 0));
  const double x = m(0, 0) / s;
  const double y = m(1, 1) / s;
  if (x >= 1.0 || y >= 1.0) return self_loop_result(m, NuMethod::kClosedForm2x2);

  const double det = x * y - 1.0;
  NuResult r;
  r.method = NuMethod::kClosedForm2x2;
  r.value = s * det / (x + y - 2.0);
  r.witness_delta = {(y - 1.0) / det / s, (x - 1.0) / det / s};
  return r;
}

NuResult nu_ring(std::span<const double> weights) {
  if (weights.empty()) throw ValidationError("ring needs at least one weight");
  double log_g = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (!std::isfinite(weights[k]) || weights[k] <= 0.0) {
      throw ValidationError("ring weight " + std::to_string(k + 1) +
                            " must be finite and positive");
    }
    log_g += std::log(weights[k]);
  }
  const double n = static_cast<double>(weights.size());
  const double root = std::exp(log_g / n);
  NuResult r;
  r.method = NuMethod::kRing;
  r.value = root / n;
  r.witness_delta.assign(weights.size(), 1.0 / root);
  return r;
}

NuResult nu_ring(const MagnitudeMatrix& m) {
  const int n = m.n();
  std::vector<int> next(n, -1);
  std::vector<int> in_degree(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (m(i, j) == 0.0) continue;
      if (next[i] >= 0 || (n > 1 && i == j)) {
        throw ValidationError("support is not a single ring");
      }
      next[i] = j;
      ++in_degree[j];
    }
  }
  std::vector<double> weights;
  int v = 0;
  for (int k = 0; k < n; ++k) {
    if (next[v] < 0 || in_degree[v] != 1) {
      throw ValidationError("support is not a single ring");
    }
    weights.push_back(m(v, next[v]));
    v = next[v];
    if (v == 0 && k + 1 < n) {
      throw ValidationError("support is not a single ring");
    }
  }
  return nu_ring(weights);
}

NuResult nu_oracle(const MagnitudeMatrix& m, int grid, int refine_steps,
                   int threads) {
  const int n = m.n();
  if (n > 4) {
    throw ValidationError("nu_oracle is limited to n <= 4 (n = " +
                          std::to_string(n) +
                          "); use nu_lower_bound and nubar_exact instead");
  }
  if (grid < 1 || refine_steps < 0) {
    throw ValidationError("oracle grid must be >= 1 and refine_steps >= 0");
  }

  std::vector<std::vector<int>> points;
  std::vector<int> scratch;
  compositions(n, grid, scratch, points);
  std::vector<double> rho(points.size());
  parallel_for(points.size(), threads, [&](std::size_t p) {
    std::vector<double> u(n);
    for (int i = 0; i < n; ++i) u[i] = static_cast<double>(points[p][i]) / grid;
    rho[p] = scaled_rho(m, u);
  });

  // Polish the best few lattice points; ties keep the earlier point.
  std::vector<std::size_t> order(points.size());
  for (std::size_t p = 0; p < order.size(); ++p) order[p] = p;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rho[a] > rho[b]; });
  const std::size_t seeds = std::min<std::size_t>(4, order.size());
  std::vector<Candidate> polished(seeds);
  parallel_for(seeds, threads, [&](std::size_t s) {
    Candidate c;
    c.u.resize(n);
    for (int i = 0; i < n; ++i) {
      c.u[i] = static_cast<double>(points[order[s]][i]) / grid;
    }
    c.rho = rho[order[s]];
    polished[s] = polish(m, std::move(c), 0.5 / grid, refine_steps);
  });
  const Candidate* best = &polished[0];
  for (const Candidate& c : polished) {
    if (c.rho > best->rho) best = &c;
  }

  NuResult r;
  r.method = NuMethod::kOracle;
  r.value = best->rho;
  if (r.value == 0.0) {
    r.attained = false;
    return r;
  }
  r.witness_delta.resize(n);
  for (int i = 0; i < n; ++i) r.witness_delta[i] = best->u[i] / r.value;
  return r;
}

}  // namespace nu
