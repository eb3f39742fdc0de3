#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sceig/fock.hpp"
#include "sceig/problem.hpp"
#include "sceig/solvers.hpp"

namespace sceig {

/// hcore and hybrid rows describe the guess handed to SCF: energy and wall
/// time of the guess, convergence and iteration count of the SCF that follows.
enum class BenchMethod { hcore, hybrid, scgled, scgled_vanilla, scf };

std::string_view to_string(BenchMethod method) noexcept;
BenchMethod parse_bench_method(std::string_view name);  // InvalidConfig on unknown names

struct BenchCell {
  BenchMethod method = BenchMethod::hybrid;
  std::size_t t = 1000;
  std::size_t i_f = 50;
  double eta = 1e-2;
  Acceleration accel = Acceleration::damping;
  bool early_stop = false;
};

struct BenchRow {
  std::string label;
  std::string method;
  std::size_t t = 0;
  std::size_t i_f = 0;
  double eta = 0.0;
  std::string accel;
  double wall_ms = 0.0;
  double total_energy = 0.0;
  std::optional<double> energy_error;
  bool converged = false;
  std::size_t scf_iters = 0;
};

/// "default", "full", or "key=v,v;key=v" with keys method, t, i_f, eta,
/// accel, early_stop. The grid is the Cartesian product in that key order;
/// hcore and scf cells ignore t, i_f, eta and accel and appear once.
std::vector<BenchCell> parse_grid(std::string_view grid);

SolverConfig cell_config(const BenchCell& cell);
BenchRow run_cell(const Problem& problem, const BenchCell& cell);

/// Runs every (problem x cell) pair, problems outermost. Jobs run on up to
/// `threads` workers (0: SCEIG_THREADS, else hardware concurrency); the
/// output order never depends on scheduling.
std::vector<BenchRow> run_bench(const std::vector<Problem>& problems,
                                const std::vector<BenchCell>& cells, std::size_t threads = 0);

/// Problem files (*.json) in `dir`, sorted by file name.
std::vector<std::filesystem::path> problem_files(const std::filesystem::path& dir);

std::string bench_csv_header();
std::string bench_csv_row(const BenchRow& row);
std::string bench_csv(const std::vector<BenchRow>& rows, bool with_header = true);
std::vector<BenchRow> parse_bench_csv(std::string_view text);

struct CurvePoint {
  std::string method;     // empty in the I_F table
  std::size_t i_f = 0;    // 0 in the method table
  std::size_t t = 0;
  std::size_t rows = 0;
  std::size_t with_error = 0;
  double mean_energy_error = 0.0;  // NaN when no row carries an error
  std::size_t not_converged = 0;
  double log_mean_wall_ms = 0.0;   // exp(mean(log wall_ms))
};

struct BenchCurves {
  std::vector<CurvePoint> by_method;  // keyed by (method, T)
  std::vector<CurvePoint> by_i_f;     // keyed by (I_F, T)
};

/// Throws EmptyInput on an empty row set.
BenchCurves bench_curves(const std::vector<BenchRow>& rows);
std::string curves_csv(const BenchCurves& curves);

}  // namespace sceig
