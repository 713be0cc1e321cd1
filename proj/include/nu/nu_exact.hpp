#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "nu/magnitude.hpp"

namespace nu {

enum class NuMethod { kClosedForm2x2, kRing, kOracle, kLowerBoundOnly };

std::string_view to_string(NuMethod method);

struct NuResult {
  double value = 0.0;
  /// Destabilizing diagonal delta_ii with rho(diag(delta) M) = 1 and
  /// sum(delta) = 1 / value. Empty when value == 0.
  std::vector<double> witness_delta;
  NuMethod method = NuMethod::kLowerBoundOnly;
  /// False when no nonnegative diagonal uncertainty destabilizes M
  /// (rho(diag(delta) M) == 0 for every delta), so value is 0.
  bool attained = true;
};

/// Closed form for n = 2. After the similarity that makes both off-diagonal
/// entries s = sqrt(M12 M21), with normalized diagonals x and y:
/// value = s max(x, y) if x >= 1 or y >= 1, else s (xy - 1) / (x + y - 2).
/// A zero off-diagonal entry leaves only the self-loops.
NuResult nu_2x2(const MagnitudeMatrix& m);

/// Pure ring where node k is driven by node k + 1 (mod n) with gain
/// weights[k] > 0. value = g^(1/n) / n with g the product of the gains.
NuResult nu_ring(std::span<const double> weights);

/// Same, for a matrix whose support is a single n-cycle (any labeling).
/// Throws ValidationError for any other support.
NuResult nu_ring(const MagnitudeMatrix& m);

/// Brute-force value for n <= 4: the maximum of rho(diag(u) M) over the
/// probability simplex, which by homogeneity equals 1 / min sum(delta).
/// A lattice with `grid` steps per unit is scanned first, then the best
/// points are polished by a pairwise pattern search with at most
/// `refine_steps` step halvings.
NuResult nu_oracle(const MagnitudeMatrix& m, int grid = 36,
                   int refine_steps = 40, int threads = 1);

}  // namespace nu
