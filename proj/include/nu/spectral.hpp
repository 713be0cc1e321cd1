#pragma once

#include <vector>

#include "nu/magnitude.hpp"

namespace nu {

class ScalingVector;

struct SpectralResult {
  double rho = 0.0;
  /// Nonnegative Perron direction with unit max-norm (when rho > 0).
  std::vector<double> right_vector;
  int iterations = 0;
  bool converged = false;
};

/// Perron root of a nonnegative matrix. The support graph is split into
/// strongly connected components; each irreducible block is handled by a
/// shifted power iteration that stops once the Collatz-Wielandt bracket is
/// within `tol` relative. max_iter <= 0 selects 100 n + 1000.
SpectralResult spectral_radius(const MagnitudeMatrix& m, double tol = 1e-10,
                               int max_iter = 0);

/// mu of the interconnection, i.e. the spectral radius of its magnitude
/// matrix. 1 / mu is the smallest uniform diagonal uncertainty bound that can
/// destabilize.
double mu(const MagnitudeMatrix& m);

/// max_i sum_j M_ij d_i / d_j. Throws ValidationError unless every d_i > 0.
double scaled_inf_norm(const MagnitudeMatrix& m, const ScalingVector& d);

struct SubsetBound {
  /// Sorted 1-based indices of the principal submatrix.
  std::vector<int> indices;
  double rho_sub = 0.0;
  /// rho_sub / |indices|; a lower bound on nu.
  double bound = 0.0;
  /// False when the greedy search was used instead of full enumeration.
  bool exhaustive = true;
};

struct SubsetSearchOptions {
  /// Full enumeration is used up to this dimension, greedy descent above.
  int exhaustive_limit = 16;
  int threads = 1;
  double tol = 1e-10;
};

/// Best lower bound rho(M_I) / |I| over principal submatrices with
/// |I| <= max_subset_size. Ties prefer the smaller set, then the
/// lexicographically smaller index tuple.
SubsetBound nu_lower_bound(const MagnitudeMatrix& m, int max_subset_size,
                           const SubsetSearchOptions& options = {});

}  // namespace nu
