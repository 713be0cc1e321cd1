#pragma once

#include <vector>

#include "nu/magnitude.hpp"
#include "nu/report_io.hpp"

namespace nu {

struct AnalysisOptions {
  /// Spectral tolerance (relative).
  double tol = 1e-9;
  /// Largest principal submatrix searched; 0 selects min(n, 12).
  int subset_max = 0;
  int exhaustive_limit = 16;
  /// Run nu_oracle when n <= 4. Larger matrices get a lower_bound_only entry.
  bool oracle = false;
  int threads = 0;
};

/// mu, nu-bar with a balanced optimal scaling, the best submatrix lower bound
/// and, where available, the exact nu (closed form for n = 2, ring formula
/// for a pure ring, oracle on request).
RobustnessReport analyze(const MagnitudeMatrix& m,
                         const AnalysisOptions& options = {});

/// True when some diagonal similarity puts the largest entry on the
/// diagonal, i.e. max_i M_ii reaches nu-bar (relative 1e-9).
bool diagonally_maximal(const MagnitudeMatrix& m, double nubar);

/// All [x w; w y] with x, w, y on a uniform grid of `steps` points in
/// [0, 1]; x varies slowest, y fastest.
std::vector<Grid2x2Record> grid2x2(int steps);

}  // namespace nu
