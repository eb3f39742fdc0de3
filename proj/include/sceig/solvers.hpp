#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sceig/fock.hpp"
#include "sceig/linalg.hpp"
#include "sceig/problem.hpp"

namespace sceig {

using Milliseconds = std::chrono::duration<double, std::milli>;

enum class Method { scgled_vanilla, scgled, scf, hybrid };
enum class InitGuess { identity_block, seeded_random, hcore };

std::string_view to_string(Method method) noexcept;
std::string_view to_string(InitGuess init) noexcept;

struct SolverConfig {
  Method method = Method::scgled;
  double eta = 1e-2;
  double alpha = 0.2;
  double beta = 0.9;
  /// F is rebuilt every i_f iterations of the gradient loop.
  std::size_t i_f = 50;
  /// Gradient-loop budget T.
  std::size_t t_max = 1000;
  /// Conditioning of F inside the gradient loop. `diis` means damping for
  /// the first (1 - diis_tail_fraction) T iterations and DIIS afterwards.
  Acceleration accel = Acceleration::damping;
  /// Conditioning of F inside the SCF loop (scf, and phase two of hybrid).
  Acceleration scf_accel = Acceleration::vanilla;
  double diis_tail_fraction = 0.1;
  double energy_tol = 1e-10;
  double density_tol = 1e-8;
  std::size_t scf_max_iters = 200;
  InitGuess init = InitGuess::identity_block;
  std::uint64_t seed = 0;
  /// Trace cadence of the gradient loop; 0 means i_f.
  std::size_t checkpoint_every = 0;
  /// Stop the gradient loop at the first checkpoint that passes the
  /// one-step SCF convergence check.
  bool early_stop = false;

  /// Settings used for stand-alone full solves: I_F = 100, damping with a
  /// DIIS tail over the last 10% of T, early stopping.
  static SolverConfig full_solve(std::size_t t_max = 100000);
};

/// Throws InvalidConfig unless 0 < alpha <= 1, 0 <= beta < 1, eta >= 0,
/// i_f >= 1, i_f <= t_max (when t_max > 0), 0 <= diis_tail_fraction <= 1,
/// positive tolerances and scf_max_iters >= 1.
void validate_config(const SolverConfig& config);

struct TraceRecord {
  std::size_t iteration = 0;
  double total_energy = 0.0;
  double residual = 0.0;
  double density_change = 0.0;
  Milliseconds wall_time_so_far{0.0};
};

struct ConvergenceReport {
  Method method = Method::scgled;
  Matrix v_star;
  /// Rayleigh quotients of F(V*), ascending; columns of v_star follow the same order.
  Vector eigenvalues;
  double total_energy = 0.0;
  std::optional<double> energy_error;
  double residual = 0.0;
  bool converged = false;
  std::size_t iterations_used = 0;
  std::size_t scf_iterations_used = 0;
  Milliseconds wall_time{0.0};
  /// Energy of the guess handed to SCF (hybrid, scf); absent otherwise.
  std::optional<double> guess_energy;
  Milliseconds guess_wall_time{0.0};
  std::vector<TraceRecord> trace;
  std::vector<std::string> warnings;
  std::size_t degenerate_utility_events = 0;
  std::size_t diis_fallbacks = 0;
};

/// Columns of the lowest k generalized eigenvectors of (H, S); S-orthonormal.
Matrix initial_guess_hcore(const Problem& problem);
/// [I_k; 0]. Throws BadOccupation if k > n or k == 0.
Matrix initial_guess_identity(std::size_t n, std::size_t k);
/// Uniform entries in [-1, 1) from a seeded generator, columns normalized.
Matrix initial_guess_random(std::size_t n, std::size_t k, std::uint64_t seed);

/// The starting V' of the gradient solvers for config.init.
Matrix initial_v_prime(const Problem& problem, const SolverConfig& config);

/// One vanilla SCF step from V: true when both |dE| < energy_tol and
/// max|dP| < density_tol.
bool one_step_converged(const Problem& problem, const Orthogonalizer& x, const Matrix& v,
                        const SolverConfig& config);

/// Oja-based loop with F rebuilt every iteration. Stops when the Frobenius
/// change of V' drops below density_tol (converged) or after t_max steps.
ConvergenceReport scgled_vanilla(const Problem& problem, const SolverConfig& config);

/// EigenGame + momentum + damped/DIIS F updated every i_f iterations.
ConvergenceReport scgled(const Problem& problem, const SolverConfig& config);

/// Fixed-point SCF from initial_v. Converged when max|dP| < density_tol and
/// |dE| < energy_tol; scf_iterations_used excludes the confirming step.
ConvergenceReport scf(const Problem& problem, const Matrix& initial_v, const SolverConfig& config);

/// scgled for t_max iterations, then scf from its V*. Falls back to the
/// H_core guess if the first phase diverges.
ConvergenceReport hybrid(const Problem& problem, const SolverConfig& config);

/// Dispatches on config.method. For Method::scf the start comes from
/// config.init (hcore by default at the CLI).
ConvergenceReport solve(const Problem& problem, const SolverConfig& config);

}  // namespace sceig
