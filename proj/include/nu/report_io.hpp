#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nu/balancer.hpp"
#include "nu/magnitude.hpp"
#include "nu/nu_exact.hpp"

namespace nu {

struct RobustnessReport {
  int n = 0;
  double mu = 0.0;
  double nubar = 0.0;
  std::vector<double> nubar_scaling;
  /// 1-based maximizing cycle; empty for an acyclic support.
  std::vector<int> nubar_witness_cycle;
  bool nubar_certified = false;

  struct Lower {
    double bound = 0.0;
    std::vector<int> indices;
    /// False when the subset search was greedy.
    bool exhaustive = true;
  } nu_lower;

  struct Exact {
    double value = 0.0;
    NuMethod method = NuMethod::kLowerBoundOnly;
    std::vector<double> witness;
  };
  std::optional<Exact> nu_exact;

  /// Empty when the denominator is zero.
  std::optional<double> nubar_over_nu_lower;
  std::optional<double> mu_over_nubar;

  bool diagonally_maximal = false;
  bool acyclic = false;
};

/// One point of the 2x2 comparison grid M = [x w; w y].
struct Grid2x2Record {
  double x = 0.0, w = 0.0, y = 0.0;
  double mu = 0.0, nu = 0.0, nubar = 0.0;
  /// Empty when nu == 0.
  std::optional<double> ratio_mu_nu, ratio_nubar_nu;
  /// The largest entry sits on the diagonal under the optimal scaling.
  bool diagonally_maximal = false;
};

/// Shortest decimal that reads back to the same double.
std::string format_double(double v);

/// JSON report with "schema": 1.
std::string report_to_json(const RobustnessReport& report);
/// Strict inverse of report_to_json; unknown or missing fields and a wrong
/// schema version raise ValidationError.
RobustnessReport report_from_json(const std::string& text);
void write_report(const RobustnessReport& report,
                  const std::filesystem::path& path);
RobustnessReport read_report(const std::filesystem::path& path);

/// Matrix CSV: one row per line, comma separated, no header. Errors name
/// the offending row and column (1-based).
MagnitudeMatrix parse_matrix_csv(const std::string& text);
MagnitudeMatrix read_matrix(const std::filesystem::path& path);
void write_matrix(std::ostream& out, const MagnitudeMatrix& m);
void write_matrix(const MagnitudeMatrix& m, const std::filesystem::path& path);

/// {"n": .., "entries": [{"i": .., "j": .., "impulse": [..]}, ..]}, 1-based.
FirSystem parse_system_json(const std::string& text);
FirSystem read_system(const std::filesystem::path& path);

/// Grid CSV with header x,w,y,mu,nu,nubar,ratio_mu_nu,ratio_nubar_nu.
void write_grid(std::ostream& out, const std::vector<Grid2x2Record>& records);
/// Writes the CSV to `path` and a gnuplot script next to it (path + ".gp").
void write_grid(const std::vector<Grid2x2Record>& records,
                const std::filesystem::path& path);

/// Study CSV with header n,theta,tol,max_iters,median_iters,failures.
void write_study(std::ostream& out, const std::vector<StudyRow>& rows);
/// Writes the CSV to `path` and a gnuplot script (path + ".gp") plotting
/// max_iters against tol (mode "tol") or against n (mode "size").
void write_study(const std::vector<StudyRow>& rows,
                 const std::filesystem::path& path, const std::string& mode);
void write_counterexamples(std::ostream& out,
                           const std::vector<StudyCounterexample>& rows);

/// Trace CSV with header t,objective,rel_change, followed by d1..dn when
/// n <= 16. Row t = 0 is the all-ones start.
void write_trace(std::ostream& out, const BalanceTrace& trace, int n);

}  // namespace nu
