#include "sceig/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "sceig/errors.hpp"
#include "sceig/log.hpp"
#include "sceig/steppers.hpp"

namespace sceig {

namespace {

using Clock = std::chrono::steady_clock;

Milliseconds since(Clock::time_point start) { return Clock::now() - start; }

constexpr double kLevelGapTol = 1e-8;

struct Snapshot {
  Matrix p;
  Matrix f;
  double energy = 0.0;
};

Snapshot evaluate(const Problem& problem, const Matrix& v) {
  Snapshot s;
  s.p = density(v);
  s.f = fock(problem, s.p);
  s.energy = electronic_energy(s.p, problem.core_hamiltonian(), s.f) + problem.nuclear_repulsion();
  return s;
}

double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

std::size_t checkpoint_interval(const SolverConfig& config) {
  return config.checkpoint_every > 0 ? config.checkpoint_every : config.i_f;
}

// Rayleigh quotients of F(V*) in ascending order, with the columns of V*
// permuted to match, plus the derived report fields.
void finish_report(ConvergenceReport& report, const Problem& problem, Matrix v) {
  const Snapshot snap = evaluate(problem, v);
  Vector lambda = rayleigh_quotients(snap.f, v);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(lambda.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return lambda(a) < lambda(b); });
  Matrix sorted_v(v.rows(), v.cols());
  Vector sorted_lambda(lambda.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    sorted_v.col(static_cast<Eigen::Index>(i)) = v.col(order[i]);
    sorted_lambda(static_cast<Eigen::Index>(i)) = lambda(order[i]);
  }
  report.v_star = std::move(sorted_v);
  report.eigenvalues = std::move(sorted_lambda);
  report.total_energy = snap.energy;
  if (problem.reference_energy())
    report.energy_error = std::abs(snap.energy - *problem.reference_energy());
  report.residual = (snap.f * report.v_star -
                     problem.overlap() * report.v_star * report.eigenvalues.asDiagonal())
                        .norm();
  if (report.converged && report.eigenvalues.size() > 0 && report.eigenvalues.maxCoeff() >= 0.0)
    report.warnings.push_back("occupied eigenvalues are not all negative at convergence");
}

void check_finite(const Matrix& m, const char* what, const std::vector<TraceRecord>& trace) {
  if (!m.allFinite()) throw Diverged(std::string(what) + " became non-finite", trace);
}

}  // namespace

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::scgled_vanilla:
      return "scgled-vanilla";
    case Method::scgled:
      return "scgled";
    case Method::scf:
      return "scf";
    case Method::hybrid:
      return "hybrid";
  }
  return "unknown";
}

std::string_view to_string(InitGuess init) noexcept {
  switch (init) {
    case InitGuess::identity_block:
      return "identity";
    case InitGuess::seeded_random:
      return "random";
    case InitGuess::hcore:
      return "hcore";
  }
  return "unknown";
}

SolverConfig SolverConfig::full_solve(std::size_t t_max) {
  SolverConfig c;
  c.method = Method::scgled;
  c.t_max = t_max;
  c.i_f = 100;
  c.accel = Acceleration::diis;
  c.early_stop = true;
  return c;
}

void validate_config(const SolverConfig& c) {
  if (!(c.alpha > 0.0 && c.alpha <= 1.0)) throw InvalidConfig("alpha must lie in (0, 1]");
  if (!(c.beta >= 0.0 && c.beta < 1.0)) throw InvalidConfig("beta must lie in [0, 1)");
  if (!(c.eta >= 0.0) || !std::isfinite(c.eta)) throw InvalidConfig("eta must be non-negative");
  if (c.i_f < 1) throw InvalidConfig("i_f must be at least 1");
  if (c.t_max > 0 && c.i_f > c.t_max) throw InvalidConfig("i_f must not exceed t_max");
  if (!(c.diis_tail_fraction >= 0.0 && c.diis_tail_fraction <= 1.0))
    throw InvalidConfig("diis_tail_fraction must lie in [0, 1]");
  if (!(c.energy_tol > 0.0) || !(c.density_tol > 0.0))
    throw InvalidConfig("tolerances must be positive");
  if (c.scf_max_iters < 1) throw InvalidConfig("scf_max_iters must be at least 1");
}

Matrix initial_guess_hcore(const Problem& problem) {
  const Orthogonalizer x(problem.overlap_spectrum());
  const EigenDecomposition eig = sym_eig(x.to_orthonormal(problem.core_hamiltonian()));
  return x.back_transform(eig.eigenvectors.leftCols(static_cast<Eigen::Index>(problem.k())));
}

Matrix initial_guess_identity(std::size_t n, std::size_t k) {
  if (k == 0 || k > n) throw BadOccupation(static_cast<long>(k), static_cast<long>(n));
  return Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
}

Matrix initial_guess_random(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k == 0 || k > n) throw BadOccupation(static_cast<long>(k), static_cast<long>(n));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Matrix v(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  for (Eigen::Index j = 0; j < v.cols(); ++j)
    for (Eigen::Index i = 0; i < v.rows(); ++i) v(i, j) = dist(rng);
  v.colwise().normalize();
  return v;
}

Matrix initial_v_prime(const Problem& problem, const SolverConfig& config) {
  switch (config.init) {
    case InitGuess::identity_block:
      return initial_guess_identity(problem.n_basis(), problem.k());
    case InitGuess::seeded_random:
      return initial_guess_random(problem.n_basis(), problem.k(), config.seed);
    case InitGuess::hcore: {
      const Orthogonalizer x(problem.overlap_spectrum());
      return sym_eig(x.to_orthonormal(problem.core_hamiltonian()))
          .eigenvectors.leftCols(static_cast<Eigen::Index>(problem.k()));
    }
  }
  return {};
}

bool one_step_converged(const Problem& problem, const Orthogonalizer& x, const Matrix& v,
                        const SolverConfig& config) {
  const Snapshot before = evaluate(problem, v);
  const EigenDecomposition eig = sym_eig(x.to_orthonormal(before.f));
  const Matrix next =
      x.back_transform(eig.eigenvectors.leftCols(static_cast<Eigen::Index>(problem.k())));
  const Snapshot after = evaluate(problem, next);
  return max_abs_diff(after.p, before.p) < config.density_tol &&
         std::abs(after.energy - before.energy) < config.energy_tol;
}

ConvergenceReport scgled_vanilla(const Problem& problem, const SolverConfig& config) {
  validate_config(config);
  const auto start = Clock::now();
  ConvergenceReport report;
  report.method = Method::scgled_vanilla;

  const Orthogonalizer x(problem.overlap_spectrum());
  Matrix v_prime = initial_v_prime(problem, config);
  const std::size_t every = checkpoint_interval(config);
  Matrix last_p = density(x.back_transform(v_prime));

  for (std::size_t t = 0; t < config.t_max; ++t) {
    const Snapshot snap = evaluate(problem, x.back_transform(v_prime));
    check_finite(snap.f, "Fock matrix", report.trace);
    const Matrix neg_f_prime = -x.to_orthonormal(snap.f);
    Matrix next;
    try {
      next = oja_step(neg_f_prime, v_prime, config.eta);
    } catch (const RankDeficient& e) {
      throw Diverged(std::string("Oja step lost rank: ") + e.what(), report.trace);
    }
    check_finite(next, "V'", report.trace);
    const double movement = (next - v_prime).norm();
    v_prime = std::move(next);
    report.iterations_used = t + 1;

    const bool done = movement < config.density_tol;
    if ((t + 1) % every == 0 || done || t + 1 == config.t_max) {
      const Matrix v = x.back_transform(v_prime);
      const Snapshot cp = evaluate(problem, v);
      const Vector lambda = rayleigh_quotients(cp.f, v);
      report.trace.push_back({t + 1, cp.energy,
                              (cp.f * v - problem.overlap() * v * lambda.asDiagonal()).norm(),
                              max_abs_diff(cp.p, last_p), since(start)});
      last_p = cp.p;
    }
    if (done) {
      report.converged = true;
      break;
    }
  }

  finish_report(report, problem, x.back_transform(v_prime));
  report.wall_time = since(start);
  return report;
}

ConvergenceReport scgled(const Problem& problem, const SolverConfig& config) {
  validate_config(config);
  const auto start = Clock::now();
  ConvergenceReport report;
  report.method = Method::scgled;

  const Orthogonalizer x(problem.overlap_spectrum());
  const Matrix& s = problem.overlap();
  const std::size_t T = config.t_max;
  const std::size_t every = checkpoint_interval(config);

  StepperState stepper{initial_v_prime(problem, config), Matrix(), config.eta, config.beta};
  stepper.momentum = Matrix::Zero(stepper.v_prime.rows(), stepper.v_prime.cols());

  const bool diis_tail = config.accel == Acceleration::diis;
  FockState fock_state(problem.core_hamiltonian(),
                       diis_tail ? Acceleration::damping : config.accel, config.alpha);
  const auto tail_length =
      diis_tail ? static_cast<std::size_t>(std::llround(config.diis_tail_fraction * static_cast<double>(T)))
                : std::size_t{0};
  const std::size_t tail_start = T - std::min(tail_length, T);

  Matrix last_p = density(x.back_transform(stepper.v_prime));
  // F(V) at the latest checkpoint, reused by an F update on the same V'
  std::optional<std::pair<std::size_t, Snapshot>> cached;

  for (std::size_t t = 0; t < T; ++t) {
    if (t % config.i_f == 0) {
      if (diis_tail && t >= tail_start && fock_state.mode() != Acceleration::diis)
        fock_state.set_mode(Acceleration::diis);
      Snapshot snap = (cached && cached->first == t) ? std::move(cached->second)
                                                      : evaluate(problem, x.back_transform(stepper.v_prime));
      check_finite(snap.f, "Fock matrix", report.trace);
      fock_state.update(snap.f, snap.p, s, x);
      check_finite(fock_state.f(), "conditioned Fock matrix", report.trace);
    }

    const EigenGameGradient grad = eigengame_gradient(-fock_state.f_prime(), stepper.v_prime);
    report.degenerate_utility_events += grad.degenerate_columns.size();
    try {
      momentum_normalize_step(stepper, grad.gradient);
    } catch (const VanishingColumn& e) {
      throw Diverged(e.what(), report.trace);
    }
    check_finite(stepper.v_prime, "V'", report.trace);
    report.iterations_used = t + 1;

    if ((t + 1) % every == 0 || t + 1 == T) {
      const Matrix v = x.back_transform(stepper.v_prime);
      Snapshot cp = evaluate(problem, v);
      const Vector lambda = rayleigh_quotients(cp.f, v);
      report.trace.push_back({t + 1, cp.energy,
                              (cp.f * v - s * v * lambda.asDiagonal()).norm(),
                              max_abs_diff(cp.p, last_p), since(start)});
      last_p = cp.p;
      cached.emplace(t + 1, std::move(cp));
      if (config.early_stop && one_step_converged(problem, x, v, config)) break;
    }
  }

  const Matrix v_star = x.back_transform(stepper.v_prime);
  report.converged = report.iterations_used > 0 && one_step_converged(problem, x, v_star, config);
  report.diis_fallbacks = fock_state.diis_fallbacks();
  if (report.degenerate_utility_events > 0)
    report.warnings.push_back("degenerate EigenGame utility encountered " +
                              std::to_string(report.degenerate_utility_events) + " times");
  if (report.diis_fallbacks > 0)
    report.warnings.push_back("singular DIIS system, fell back to the undamped Fock matrix " +
                              std::to_string(report.diis_fallbacks) + " times");
  finish_report(report, problem, v_star);
  report.wall_time = since(start);
  return report;
}

ConvergenceReport scf(const Problem& problem, const Matrix& initial_v, const SolverConfig& config) {
  validate_config(config);
  const auto start = Clock::now();
  ConvergenceReport report;
  report.method = Method::scf;

  const std::size_t n = problem.n_basis();
  const std::size_t k = problem.k();
  if (initial_v.rows() != static_cast<Eigen::Index>(n) || initial_v.cols() != static_cast<Eigen::Index>(k))
    throw DimensionMismatch("initial guess size", n * k, static_cast<std::size_t>(initial_v.size()));

  const Orthogonalizer x(problem.overlap_spectrum());
  Matrix v = initial_v;
  Snapshot current = evaluate(problem, v);
  check_finite(current.f, "Fock matrix", report.trace);
  report.guess_energy = current.energy;
  FockState fock_state(current.f, config.scf_accel, config.alpha);
  bool gap_warned = false;

  for (std::size_t step = 1; step <= config.scf_max_iters; ++step) {
    fock_state.update(current.f, current.p, problem.overlap(), x);
    check_finite(fock_state.f(), "conditioned Fock matrix", report.trace);
    const EigenDecomposition eig = sym_eig(fock_state.f_prime());
    if (k < n && !gap_warned &&
        eig.eigenvalues(static_cast<Eigen::Index>(k)) - eig.eigenvalues(static_cast<Eigen::Index>(k) - 1) <
            kLevelGapTol) {
      gap_warned = true;
      report.warnings.push_back("near-degenerate frontier levels; kept the lower-index eigenvectors");
    }
    Matrix next_v = x.back_transform(eig.eigenvectors.leftCols(static_cast<Eigen::Index>(k)));
    Snapshot next = evaluate(problem, next_v);
    check_finite(next.f, "Fock matrix", report.trace);

    const double dp = max_abs_diff(next.p, current.p);
    const double de = std::abs(next.energy - current.energy);
    const Vector lambda = rayleigh_quotients(next.f, next_v);
    report.trace.push_back({step, next.energy,
                            (next.f * next_v - problem.overlap() * next_v * lambda.asDiagonal()).norm(),
                            dp, since(start)});
    v = std::move(next_v);
    current = std::move(next);
    if (dp < config.density_tol && de < config.energy_tol) {
      report.converged = true;
      report.scf_iterations_used = step - 1;
      break;
    }
    report.scf_iterations_used = step;
  }
  if (!report.converged)
    report.warnings.push_back("SCF did not converge within " + std::to_string(config.scf_max_iters) +
                              " iterations");

  report.diis_fallbacks = fock_state.diis_fallbacks();
  finish_report(report, problem, v);
  report.wall_time = since(start);
  return report;
}

ConvergenceReport hybrid(const Problem& problem, const SolverConfig& config) {
  validate_config(config);
  const auto start = Clock::now();

  SolverConfig guess_config = config;
  guess_config.method = Method::scgled;
  guess_config.early_stop = false;
  // DIIS belongs to the SCF phase only
  if (guess_config.accel == Acceleration::diis) guess_config.accel = Acceleration::damping;

  Matrix guess;
  std::vector<TraceRecord> guess_trace;
  std::vector<std::string> warnings;
  std::size_t guess_iterations = 0;
  std::size_t degenerate_events = 0;
  std::optional<double> guess_energy;
  try {
    ConvergenceReport phase1 = scgled(problem, guess_config);
    guess = std::move(phase1.v_star);
    guess_trace = std::move(phase1.trace);
    guess_iterations = phase1.iterations_used;
    degenerate_events = phase1.degenerate_utility_events;
    guess_energy = phase1.total_energy;
    warnings = std::move(phase1.warnings);
  } catch (const Diverged& e) {
    const std::string msg = std::string("gradient phase diverged (") + e.what() +
                            "); falling back to the H_core guess";
    log_warning(msg);
    warnings.push_back(msg);
    guess_trace = e.trace();
    guess = initial_guess_hcore(problem);
  }
  const Milliseconds guess_wall = since(start);

  ConvergenceReport report = scf(problem, guess, config);
  report.method = Method::hybrid;
  report.iterations_used = guess_iterations;
  report.degenerate_utility_events = degenerate_events;
  report.guess_energy = guess_energy ? guess_energy : report.guess_energy;
  report.guess_wall_time = guess_wall;
  const std::size_t offset = guess_trace.empty() ? guess_iterations
                                                 : std::max(guess_iterations, guess_trace.back().iteration);
  for (auto& rec : report.trace) {
    rec.iteration += offset;
    rec.wall_time_so_far += guess_wall;
  }
  guess_trace.insert(guess_trace.end(), report.trace.begin(), report.trace.end());
  report.trace = std::move(guess_trace);
  warnings.insert(warnings.end(), report.warnings.begin(), report.warnings.end());
  report.warnings = std::move(warnings);
  report.wall_time = since(start);
  return report;
}

ConvergenceReport solve(const Problem& problem, const SolverConfig& config) {
  switch (config.method) {
    case Method::scgled_vanilla:
      return scgled_vanilla(problem, config);
    case Method::scgled:
      return scgled(problem, config);
    case Method::hybrid:
      return hybrid(problem, config);
    case Method::scf: {
      const Matrix v = config.init == InitGuess::hcore
                           ? initial_guess_hcore(problem)
                           : Orthogonalizer(problem.overlap_spectrum()).back_transform(initial_v_prime(problem, config));
      return scf(problem, v, config);
    }
  }
  throw InvalidConfig("unknown method");
}

}  // namespace sceig
