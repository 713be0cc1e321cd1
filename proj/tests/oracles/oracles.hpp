#pragma once

// Reference computations that share no code with the library solvers.

#include <cstdint>
#include <vector>

#include "nu/magnitude.hpp"

namespace nu::testing {

struct CycleMax {
  double value = 0.0;
  /// Every simple cycle (0-based, starting at its smallest node) whose
  /// geometric mean is within 1e-12 relative of the maximum.
  std::vector<std::vector<int>> argmax;
};

/// Enumerates all simple cycles of the support graph by depth-first search
/// and returns the largest (product)^(1/length). Exponential; n <= 8.
CycleMax brute_force_cycle_max(const MagnitudeMatrix& m);

/// Spectral radius from the roots of the characteristic polynomial
/// (Faddeev-LeVerrier coefficients, companion matrix eigensolve).
double charpoly_spectral_radius(const MagnitudeMatrix& m);

/// Entries uniform on [0, 1); with probability 1 - density an entry is 0
/// when sparse is set.
MagnitudeMatrix random_matrix(int n, std::uint64_t seed, bool sparse,
                              double density = 0.4);

/// Mixed dense/sparse corpus of `count` matrices with 2 <= n <= max_n.
std::vector<MagnitudeMatrix> random_corpus(int count, int max_n,
                                           std::uint64_t seed);

/// diag(d) M diag(d)^-1.
MagnitudeMatrix similarity(const MagnitudeMatrix& m,
                           const std::vector<double>& d);

}  // namespace nu::testing
