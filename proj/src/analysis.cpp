#include "nu/analysis.hpp"

#include <algorithm>
#include <optional>

#include "nu/error.hpp"
#include "nu/nu_exact.hpp"
#include "nu/nubar.hpp"
#include "nu/spectral.hpp"

namespace nu {
namespace {

std::optional<double> ratio(double num, double den) {
  if (den == 0.0) return std::nullopt;
  return num / den;
}

bool is_ring(const MagnitudeMatrix& m) {
  try {
    nu_ring(m);
    return true;
  } catch (const ValidationError&) {
    return false;
  }
}

}  // namespace

bool diagonally_maximal(const MagnitudeMatrix& m, double nubar) {
  double top = 0.0;
  for (int i = 0; i < m.n(); ++i) top = std::max(top, m(i, i));
  return top >= nubar * (1.0 - 1e-9);
}

RobustnessReport analyze(const MagnitudeMatrix& m,
                         const AnalysisOptions& options) {
  const int n = m.n();
  const int subset_max =
      options.subset_max > 0 ? options.subset_max : std::min(n, 12);

  RobustnessReport r;
  r.n = n;
  r.mu = spectral_radius(m, options.tol).rho;

  const NubarResult nb = balanced_solution(m);
  r.nubar = nb.value;
  r.nubar_scaling = nb.scaling.values();
  r.nubar_witness_cycle = nb.witness_cycle;
  r.nubar_certified = nb.certified;

  SubsetSearchOptions search;
  search.exhaustive_limit = options.exhaustive_limit;
  search.threads = options.threads;
  search.tol = std::min(options.tol, 1e-10);
  const SubsetBound lower = nu_lower_bound(m, subset_max, search);
  r.nu_lower.bound = lower.bound;
  r.nu_lower.indices = lower.indices;
  r.nu_lower.exhaustive = lower.exhaustive;

  std::optional<NuResult> exact;
  if (n == 2) {
    exact = nu_2x2(m);
  } else if (is_ring(m)) {
    exact = nu_ring(m);
  } else if (options.oracle && n <= 4) {
    exact = nu_oracle(m, 36, 40, options.threads);
  } else if (options.oracle) {
    exact = NuResult{lower.bound, {}, NuMethod::kLowerBoundOnly, false};
  }
  if (exact) {
    r.nu_exact = RobustnessReport::Exact{exact->value, exact->method,
                                         exact->witness_delta};
  }

  r.nubar_over_nu_lower = ratio(r.nubar, r.nu_lower.bound);
  r.mu_over_nubar = ratio(r.mu, r.nubar);
  r.diagonally_maximal = diagonally_maximal(m, r.nubar);
  r.acyclic = nb.witness_cycle.empty();
  return r;
}

std::vector<Grid2x2Record> grid2x2(int steps) {
  if (steps < 2) throw ValidationError("grid needs at least 2 steps");
  std::vector<Grid2x2Record> records;
  records.reserve(static_cast<std::size_t>(steps) * steps * steps);
  auto at = [steps](int k) { return static_cast<double>(k) / (steps - 1); };
  for (int a = 0; a < steps; ++a) {
    for (int b = 0; b < steps; ++b) {
      for (int c = 0; c < steps; ++c) {
        Grid2x2Record rec;
        rec.x = at(a);
        rec.w = at(b);
        rec.y = at(c);
        const MagnitudeMatrix m{{rec.x, rec.w}, {rec.w, rec.y}};
        rec.mu = spectral_radius(m, 1e-12).rho;
        rec.nu = nu_2x2(m).value;
        rec.nubar = nubar_exact(m).value;
        rec.ratio_mu_nu = ratio(rec.mu, rec.nu);
        rec.ratio_nubar_nu = ratio(rec.nubar, rec.nu);
        rec.diagonally_maximal = diagonally_maximal(m, rec.nubar);
        records.push_back(rec);
      }
    }
  }
  return records;
}

}  // namespace nu
