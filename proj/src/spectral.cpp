#include "nu/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

#include "detail/digraph.hpp"
#include "nu/error.hpp"
#include "nu/nubar.hpp"
#include "nu/parallel.hpp"

namespace nu {
namespace {

struct BlockResult {
  double rho;
  std::vector<double> vector;
  int iterations;
  bool converged;
};

// Shifted power iteration on an irreducible block of size >= 2. The shift
// makes the block primitive, and the Collatz-Wielandt ratios bracket the
// Perron root from both sides.
BlockResult irreducible_perron(const MagnitudeMatrix& m,
                               const std::vector<int>& nodes, double tol,
                               int max_iter) {
  const std::size_t s = nodes.size();
  std::vector<double> block(s * s);
  double min_row = std::numeric_limits<double>::infinity();
  std::vector<double> col_sum(s, 0.0);
  for (std::size_t a = 0; a < s; ++a) {
    double row_sum = 0.0;
    for (std::size_t b = 0; b < s; ++b) {
      const double v = m(nodes[a], nodes[b]);
      block[a * s + b] = v;
      row_sum += v;
      col_sum[b] += v;
    }
    min_row = std::min(min_row, row_sum);
  }
  const double shift =
      std::max(min_row, *std::min_element(col_sum.begin(), col_sum.end()));

  std::vector<double> x(s, 1.0), y(s);
  BlockResult out{0.0, {}, 0, false};
  for (int it = 1; it <= max_iter; ++it) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    double top = 0.0;
    for (std::size_t a = 0; a < s; ++a) {
      double acc = shift * x[a];
      for (std::size_t b = 0; b < s; ++b) acc += block[a * s + b] * x[b];
      y[a] = acc;
      const double ratio = acc / x[a];
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      top = std::max(top, acc);
    }
    for (std::size_t a = 0; a < s; ++a) x[a] = y[a] / top;
    out.rho = 0.5 * (lo + hi) - shift;
    out.iterations = it;
    if (hi - lo <= tol * (lo - shift)) {
      out.converged = true;
      break;
    }
  }
  out.vector = std::move(x);
  return out;
}

void normalize_max(std::vector<double>& x) {
  const double top = *std::max_element(x.begin(), x.end());
  if (top > 0.0) {
    for (double& v : x) v /= top;
  }
}

}  // namespace

SpectralResult spectral_radius(const MagnitudeMatrix& m, double tol,
                               int max_iter) {
  if (!(tol > 0.0)) throw ValidationError("spectral tolerance must be > 0");
  const int n = m.n();
  if (max_iter <= 0) max_iter = 100 * n + 1000;

  std::vector<detail::Arc> arcs;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (m(i, j) > 0.0) arcs.push_back({i, j, 0.0});
    }
  }
  const auto components = detail::strongly_connected_components(n, arcs);

  SpectralResult result;
  result.converged = true;
  int dominant = -1;
  std::vector<double> dominant_vector;
  for (std::size_t c = 0; c < components.size(); ++c) {
    const auto& nodes = components[c];
    double rho;
    std::vector<double> vec;
    if (nodes.size() == 1) {
      rho = m(nodes[0], nodes[0]);
      vec = {1.0};
    } else {
      BlockResult block = irreducible_perron(m, nodes, tol, max_iter);
      rho = block.rho;
      vec = std::move(block.vector);
      result.iterations = std::max(result.iterations, block.iterations);
      result.converged = result.converged && block.converged;
    }
    if (dominant < 0 || rho > result.rho) {
      dominant = static_cast<int>(c);
      result.rho = rho;
      dominant_vector = std::move(vec);
    }
  }

  result.right_vector.assign(n, 0.0);
  if (result.rho == 0.0) {
    // Nilpotent: any node without incoming arcs gives a null vector.
    for (int j = 0; j < n; ++j) {
      bool zero_column = true;
      for (int i = 0; i < n && zero_column; ++i) zero_column = m(i, j) == 0.0;
      if (zero_column) {
        result.right_vector[j] = 1.0;
        break;
      }
    }
    return result;
  }

  const auto& nodes = components[dominant];
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    result.right_vector[nodes[a]] = dominant_vector[a];
  }
  if (static_cast<int>(nodes.size()) == n) return result;

  // Reducible: let the upstream components pick up their share of the
  // eigenvector by iterating (M + rho I) from the embedded block vector.
  std::vector<double>& x = result.right_vector;
  std::vector<double> y(n);
  for (int it = 0; it < max_iter; ++it) {
    for (int i = 0; i < n; ++i) {
      double acc = result.rho * x[i];
      const auto row = m.row(i);
      for (int j = 0; j < n; ++j) acc += row[j] * x[j];
      y[i] = acc;
    }
    normalize_max(y);
    double change = 0.0;
    for (int i = 0; i < n; ++i) change = std::max(change, std::abs(y[i] - x[i]));
    x.swap(y);
    if (change <= tol) break;
  }
  return result;
}

double mu(const MagnitudeMatrix& m) { return spectral_radius(m).rho; }

double scaled_inf_norm(const MagnitudeMatrix& m, const ScalingVector& d) {
  if (static_cast<int>(d.size()) != m.n()) {
    throw ValidationError("scaling length does not match matrix dimension");
  }
  if (!d.strictly_positive()) {
    throw ValidationError("scaled_inf_norm requires a strictly positive scaling");
  }
  double best = 0.0;
  for (int i = 0; i < m.n(); ++i) {
    double sum = 0.0;
    for (int j = 0; j < m.n(); ++j) sum += m(i, j) * d[i] / d[j];
    best = std::max(best, sum);
  }
  return best;
}

namespace {

// Strict weak "a is better than b" with a relative tie band.
bool better_subset(const SubsetBound& a, const SubsetBound& b) {
  const double scale = std::max(a.bound, b.bound);
  if (std::abs(a.bound - b.bound) > 1e-12 * scale) return a.bound > b.bound;
  if (a.indices.size() != b.indices.size()) {
    return a.indices.size() < b.indices.size();
  }
  return a.indices < b.indices;
}

SubsetBound evaluate_subset(const MagnitudeMatrix& m,
                            const std::vector<int>& zero_based, double tol) {
  SubsetBound s;
  s.rho_sub = spectral_radius(m.principal_submatrix(zero_based), tol).rho;
  s.bound = s.rho_sub / static_cast<double>(zero_based.size());
  for (int i : zero_based) s.indices.push_back(i + 1);
  return s;
}

}  // namespace

SubsetBound nu_lower_bound(const MagnitudeMatrix& m, int max_subset_size,
                           const SubsetSearchOptions& options) {
  const int n = m.n();
  if (max_subset_size < 1 || max_subset_size > n) {
    throw ValidationError("max_subset_size must lie in [1, n]");
  }

  if (n <= options.exhaustive_limit && n < 31) {
    const std::uint32_t count = std::uint32_t{1} << n;
    std::vector<double> rho(count, -1.0);
    parallel_for(count - 1, options.threads, [&](std::size_t k) {
      const auto mask = static_cast<std::uint32_t>(k + 1);
      if (std::popcount(mask) > max_subset_size) return;
      std::vector<int> idx;
      for (int i = 0; i < n; ++i) {
        if (mask & (std::uint32_t{1} << i)) idx.push_back(i);
      }
      rho[mask] = spectral_radius(m.principal_submatrix(idx), options.tol).rho;
    });
    SubsetBound best;
    bool have = false;
    for (std::uint32_t mask = 1; mask < count; ++mask) {
      if (rho[mask] < 0.0) continue;
      SubsetBound cand;
      for (int i = 0; i < n; ++i) {
        if (mask & (std::uint32_t{1} << i)) cand.indices.push_back(i + 1);
      }
      cand.rho_sub = rho[mask];
      cand.bound = rho[mask] / static_cast<double>(cand.indices.size());
      if (!have || better_subset(cand, best)) {
        best = std::move(cand);
        have = true;
      }
    }
    return best;
  }

  // Greedy descent from the full index set.
  std::vector<int> current(n);
  for (int i = 0; i < n; ++i) current[i] = i;
  SubsetBound best;
  bool have = false;
  auto consider = [&](const SubsetBound& cand) {
    if (static_cast<int>(cand.indices.size()) > max_subset_size) return;
    if (!have || better_subset(cand, best)) {
      best = cand;
      have = true;
    }
  };
  consider(evaluate_subset(m, current, options.tol));
  while (current.size() > 1) {
    std::vector<SubsetBound> trials(current.size());
    parallel_for(current.size(), options.threads, [&](std::size_t r) {
      std::vector<int> reduced;
      reduced.reserve(current.size() - 1);
      for (std::size_t q = 0; q < current.size(); ++q) {
        if (q != r) reduced.push_back(current[q]);
      }
      trials[r] = evaluate_subset(m, reduced, options.tol);
    });
    std::size_t pick = 0;
    for (std::size_t r = 1; r < trials.size(); ++r) {
      if (better_subset(trials[r], trials[pick])) pick = r;
    }
    consider(trials[pick]);
    current.erase(current.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  best.exhaustive = false;
  return best;
}

}  // namespace nu
