// Command-line front end: analyze, balance, grid2x2, bench, ring.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nu/analysis.hpp"
#include "nu/balancer.hpp"
#include "nu/error.hpp"
#include "nu/nubar.hpp"
#include "nu/parallel.hpp"
#include "nu/report_io.hpp"

namespace {

void log(const std::string& msg) { std::cerr << "nu_analyzer: " << msg << '\n'; }

bool has_extension(const std::string& path, const std::string& ext) {
  return path.size() >= ext.size() &&
         path.compare(path.size() - ext.size(), ext.size(), ext) == 0;
}

nu::MagnitudeMatrix load_input(const std::string& path) {
  if (has_extension(path, ".json")) {
    return nu::magnitude_matrix(nu::read_system(path));
  }
  if (has_extension(path, ".csv")) return nu::read_matrix(path);
  throw nu::ValidationError("cannot tell the format of " + path +
                            " (expected .csv or .json)");
}

// Writes `text` to `out_path`, or stdout when empty.
void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  std::vector<double> out;
  if (count == 1) return {hi};
  const double a = std::log10(hi), b = std::log10(lo);
  for (int k = 0; k < count; ++k) {
    out.push_back(std::pow(10.0, a + (b - a) * k / (count - 1)));
  }
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Robustness measures for nonnegative magnitude matrices"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 0;
  std::uint64_t seed = 1;
  app.add_option("--threads", threads, "Worker threads (0: NU_ANALYZER_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--seed", seed, "Random seed");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Full robustness report");
  std::string analyze_path, analyze_out;
  nu::AnalysisOptions aopt;
  analyze->add_option("input", analyze_path, "Matrix CSV or system JSON")
      ->required()
      ->check(CLI::ExistingFile);
  analyze->add_flag("--oracle", aopt.oracle, "Brute-force nu (n <= 4)");
  analyze->add_option("--subset-max", aopt.subset_max,
                      "Largest submatrix for the lower bound (default min(n, 12))")
      ->check(CLI::PositiveNumber);
  analyze->add_option("--tol", aopt.tol, "Spectral tolerance")
      ->default_val(1e-9)
      ->check(CLI::PositiveNumber);
  analyze->add_option("--out", analyze_out, "Report path (default stdout)");

  // balance
  auto* balance = app.add_subcommand("balance", "Run the local balancing heuristic");
  std::string balance_path, trace_path, balance_out;
  double theta = 0.5, balance_tol = 1e-3;
  int max_iter = 1000;
  bool gauss_seidel = false;
  balance->add_option("input", balance_path, "Matrix CSV or system JSON")
      ->required()
      ->check(CLI::ExistingFile);
  balance->add_option("--theta", theta, "Interpolation weight in (0, 1]")
      ->default_val(0.5);
  balance->add_option("--max-iter", max_iter, "Iteration cap")
      ->default_val(1000)
      ->check(CLI::PositiveNumber);
  balance->add_option("--tol", balance_tol, "Relative tolerance")
      ->default_val(1e-3)
      ->check(CLI::PositiveNumber);
  balance->add_option("--trace", trace_path, "Per-iteration CSV");
  balance->add_flag("--gauss-seidel", gauss_seidel,
                    "Update coordinates in place instead of synchronously");
  balance->add_option("--out", balance_out, "Summary path (default stdout)");

  // grid2x2
  auto* grid = app.add_subcommand("grid2x2", "mu, nu and nubar on [x w; w y]");
  int steps = 11;
  std::string grid_out;
  grid->add_option("--steps", steps, "Grid points per axis")
      ->default_val(11)
      ->check(CLI::Range(2, 1000));
  grid->add_option("--out", grid_out, "CSV path (default stdout)");

  // bench
  auto* bench = app.add_subcommand("bench", "Iteration counts on random matrices");
  std::string mode = "tol", bench_out, counter_out, distribution = "uniform";
  int trials = 100, bench_n = 128, tol_count = 11, bench_max_iter = 1000;
  double tol_min = 1e-6, tol_max = 1e-1, size_tol = 1e-3, density = 0.2;
  std::vector<double> thetas{0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<int> sizes{2, 4, 8, 16, 32, 64, 128};
  bench->add_option("--mode", mode, "tol: sweep tolerances; size: sweep n")
      ->check(CLI::IsMember({"tol", "size"}));
  bench->add_option("--trials", trials, "Matrices per setting")
      ->check(CLI::PositiveNumber);
  bench->add_option("--thetas", thetas, "Interpolation weights")->delimiter(',');
  bench->add_option("--n", bench_n, "Dimension for --mode tol")
      ->check(CLI::PositiveNumber);
  bench->add_option("--sizes", sizes, "Dimensions for --mode size")->delimiter(',');
  bench->add_option("--tol-min", tol_min, "Tightest tolerance (--mode tol)")
      ->check(CLI::PositiveNumber);
  bench->add_option("--tol-max", tol_max, "Loosest tolerance (--mode tol)")
      ->check(CLI::PositiveNumber);
  bench->add_option("--tol-count", tol_count, "Log-spaced tolerances (--mode tol)")
      ->check(CLI::PositiveNumber);
  bench->add_option("--tol", size_tol, "Tolerance for --mode size")
      ->check(CLI::PositiveNumber);
  bench->add_option("--max-iter", bench_max_iter, "Iteration cap")
      ->check(CLI::PositiveNumber);
  bench->add_option("--distribution", distribution, "uniform or sparse")
      ->check(CLI::IsMember({"uniform", "sparse"}));
  bench->add_option("--density", density, "Keep probability for sparse")
      ->check(CLI::Range(0.0, 1.0));
  bench->add_option("--out", bench_out, "Study CSV path (default stdout)");
  bench->add_option("--counterexamples", counter_out,
                    "CSV of runs that missed a tolerance or the optimum");

  // ring
  auto* ring = app.add_subcommand("ring", "Report for a weighted ring");
  int ring_n = 0;
  std::vector<double> weights;
  std::string ring_out;
  ring->add_option("--n", ring_n, "Ring size (unit weights)")
      ->check(CLI::PositiveNumber);
  ring->add_option("--weights", weights, "Gains w_1..w_n")->delimiter(',');
  ring->add_option("--out", ring_out, "Report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*analyze) {
    const nu::MagnitudeMatrix m = load_input(analyze_path);
    aopt.threads = threads;
    if (aopt.oracle && m.n() > 4) {
      log("--oracle ignored for n = " + std::to_string(m.n()) +
          " (limit 4); reporting the lower bound only");
    }
    if (aopt.subset_max > m.n()) {
      throw nu::ValidationError("--subset-max exceeds n = " + std::to_string(m.n()));
    }
    emit(analyze_out, nu::report_to_json(nu::analyze(m, aopt)));
  } else if (*balance) {
    const nu::MagnitudeMatrix m = load_input(balance_path);
    nu::BalanceOptions bopt;
    bopt.order = gauss_seidel ? nu::UpdateOrder::kGaussSeidel
                              : nu::UpdateOrder::kSynchronous;
    const nu::BalanceTrace trace =
        nu::heuristic_balance(m, theta, max_iter, balance_tol, bopt);
    if (!trace_path.empty()) {
      std::ofstream out(trace_path, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + trace_path);
      nu::write_trace(out, trace, m.n());
    }
    const auto& last = trace.iterations.back();
    const double optimum = nu::nubar_exact(m).value;
    if (trace.oscillating) log("oscillation detected");
    log(std::string(trace.converged ? "converged" : "not converged") +
        " after " + std::to_string(last.t) + " iterations");
    nlohmann::json summary = {{"converged", trace.converged},
                              {"oscillating", trace.oscillating},
                              {"iterations", last.t},
                              {"objective", last.objective},
                              {"rel_change", last.rel_change},
                              {"nubar", optimum},
                              {"scaling", trace.final_scaling.values()}};
    emit(balance_out, summary.dump(2) + "\n");
  } else if (*grid) {
    const auto records = nu::grid2x2(steps);
    if (grid_out.empty()) {
      nu::write_grid(std::cout, records);
    } else {
      nu::write_grid(records, grid_out);
    }
  } else if (*bench) {
    nu::StudyOptions sopt;
    sopt.threads = threads;
    sopt.max_iter = bench_max_iter;
    sopt.density = density;
    sopt.distribution = distribution == "sparse"
                            ? nu::RandomDistribution::kSparseUniform
                            : nu::RandomDistribution::kUniform;
    std::vector<int> ns;
    std::vector<double> tols;
    if (mode == "tol") {
      if (tol_min > tol_max) throw nu::ValidationError("--tol-min exceeds --tol-max");
      ns = {bench_n};
      tols = log_spaced(tol_min, tol_max, tol_count);
    } else {
      ns = sizes;
      tols = {size_tol};
    }
    log("running " + std::to_string(trials) + " trials per setting on " +
        std::to_string(nu::resolve_threads(threads)) + " threads");
    const nu::StudyResult result =
        nu::convergence_study(ns, trials, thetas, tols, seed, sopt);
    if (bench_out.empty()) {
      nu::write_study(std::cout, result.rows);
    } else {
      nu::write_study(result.rows, bench_out, mode);
    }
    if (!result.counterexamples.empty()) {
      log(std::to_string(result.counterexamples.size()) +
          " runs missed a tolerance or stopped away from the optimum");
    }
    if (!counter_out.empty()) {
      std::ofstream out(counter_out, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + counter_out);
      nu::write_counterexamples(out, result.counterexamples);
    }
  } else if (*ring) {
    if (weights.empty()) {
      if (ring_n < 1) throw nu::ValidationError("ring needs --n or --weights");
      weights.assign(ring_n, 1.0);
    } else if (ring_n > 0 && ring_n != static_cast<int>(weights.size())) {
      throw nu::ValidationError("--n does not match the number of weights");
    }
    const int n = static_cast<int>(weights.size());
    nu::MagnitudeMatrix m(n);
    for (int k = 0; k < n; ++k) m.set(k, (k + 1) % n, weights[k]);
    nu::AnalysisOptions opt;
    opt.threads = threads;
    emit(ring_out, nu::report_to_json(nu::analyze(m, opt)));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const nu::ValidationError& e) {
    log(std::string("error: ") + e.what());
    return 2;
  } catch (const std::exception& e) {
    log(std::string("internal error: ") + e.what());
    return 1;
  }
}
