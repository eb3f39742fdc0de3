#include <doctest.h>

#include <random>

#include "sceig/errors.hpp"
#include "sceig/fock.hpp"
#include "sceig/solvers.hpp"
#include "sceig/toy.hpp"
#include "support.hpp"

using namespace sceig;

namespace {

// SCF oracle on the toy: fixed-point loop built on Eigen's generalized solver
double toy_oracle_energy(const Problem& toy) {
  Matrix v = Matrix::Constant(2, 1, 0.5);
  for (int it = 0; it < 300; ++it) {
    const Matrix f = toy.core_hamiltonian() + testing::naive_u_eff(toy.eri(), 2.0 * v * v.transpose());
    v = testing::generalized_eig(f, toy.overlap()).eigenvectors.leftCols(1);
  }
  const Matrix p = 2.0 * v * v.transpose();
  const Matrix f = toy.core_hamiltonian() + testing::naive_u_eff(toy.eri(), p);
  return 0.5 * p.cwiseProduct(toy.core_hamiltonian() + f).sum();
}

}  // namespace

TEST_CASE("config validation") {
  SolverConfig c;
  CHECK_NOTHROW(validate_config(c));
  c.alpha = 0.0;
  CHECK_THROWS_AS(validate_config(c), InvalidConfig);
  c = {};
  c.beta = 1.0;
  CHECK_THROWS_AS(validate_config(c), InvalidConfig);
  c = {};
  c.i_f = 2000;
  CHECK_THROWS_AS(validate_config(c), InvalidConfig);
  c = {};
  c.i_f = 0;
  CHECK_THROWS_AS(validate_config(c), InvalidConfig);
  c = {};
  c.t_max = 0;
  CHECK_NOTHROW(validate_config(c));

  const SolverConfig full = SolverConfig::full_solve();
  CHECK(full.i_f == 100);
  CHECK(full.accel == Acceleration::diis);
  CHECK(full.diis_tail_fraction == 0.1);
}

TEST_CASE("initial guesses") {
  CHECK(initial_guess_identity(2, 1) == (Matrix(2, 1) << 1.0, 0.0).finished());
  CHECK(initial_guess_identity(3, 3) == Matrix::Identity(3, 3));
  CHECK_THROWS_AS(initial_guess_identity(2, 3), BadOccupation);

  const Matrix r1 = initial_guess_random(5, 2, 7);
  CHECK(r1 == initial_guess_random(5, 2, 7));
  CHECK(r1 != initial_guess_random(5, 2, 8));
  CHECK(r1.colwise().norm().isApprox(Vector::Ones(2).transpose()));

  const ProblemData d = testing::linear_instance(5, 6, 3);
  const Problem lin = validate_problem(d);
  const Matrix v = initial_guess_hcore(lin);
  CHECK((v.transpose() * d.overlap * v - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(residual(lin, v) < 1e-10);

  ProblemData full = testing::linear_instance(6, 4, 4);
  const Problem pf = validate_problem(full);
  const Matrix vf = initial_guess_hcore(pf);
  CHECK(testing::projector_distance(vf, Matrix::Identity(4, 4)) < 1e-8);
}

TEST_CASE("SCF on the toy") {
  const Problem toy = toy_problem();
  SolverConfig c;
  const ConvergenceReport r = scf(toy, initial_guess_hcore(toy), c);
  CHECK(r.converged);
  CHECK(std::abs(std::abs(r.v_star(0, 0)) - toy_golden::v_entry) <= 1e-4);
  CHECK(std::abs(std::abs(r.v_star(1, 0)) - toy_golden::v_entry) <= 1e-4);
  CHECK(r.total_energy == doctest::Approx(toy_oracle_energy(toy)).epsilon(1e-12));
  CHECK(r.guess_energy.has_value());

  // already converged start
  const ConvergenceReport again = scf(toy, r.v_star, c);
  CHECK(again.converged);
  CHECK(again.scf_iterations_used <= 1);

  CHECK_THROWS_AS(scf(toy, Matrix::Zero(3, 1), c), DimensionMismatch);
}

TEST_CASE("SCF on linear instances converges in one step from any guess") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Problem lin = validate_problem(testing::linear_instance(seed, 6, 2));
    SolverConfig c;
    const ConvergenceReport r = scf(lin, initial_guess_random(6, 2, seed), c);
    CHECK(r.converged);
    CHECK(r.scf_iterations_used <= 1);
  }
}

TEST_CASE("SCF reports non-convergence without throwing") {
  const Problem toy = toy_problem();
  SolverConfig c;
  c.scf_max_iters = 1;
  c.energy_tol = 1e-300;
  c.density_tol = 1e-300;
  const ConvergenceReport r = scf(toy, initial_guess_random(2, 1, 3), c);
  CHECK_FALSE(r.converged);
  CHECK(r.scf_iterations_used == 1);
  CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("SCGLED on the toy matches the SCF oracle") {
  const Problem toy = toy_problem();
  SolverConfig c;
  c.t_max = 20000;
  const ConvergenceReport r = scgled(toy, c);
  CHECK(r.converged);
  CHECK(std::abs(r.total_energy - toy_oracle_energy(toy)) <= 1e-8);
  CHECK(r.residual < 1e-6);
  CHECK(r.iterations_used == 20000);
  CHECK(r.trace.size() == 20000 / 50);
  for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].iteration > r.trace[i - 1].iteration);
}

TEST_CASE("SCGLED from a random start on the toy") {
  const Problem toy = toy_problem();
  SolverConfig c;
  c.t_max = 20000;
  c.init = InitGuess::seeded_random;
  c.seed = 3;
  const ConvergenceReport r = scgled(toy, c);
  CHECK(r.converged);
  CHECK(std::abs(r.total_energy - toy_oracle_energy(toy)) <= 1e-8);
}

TEST_CASE("SCGLED with no budget echoes the guess") {
  const Problem toy = toy_problem();
  SolverConfig c;
  c.t_max = 0;
  const ConvergenceReport r = scgled(toy, c);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations_used == 0);
  const Orthogonalizer x(toy.overlap_spectrum());
  CHECK(r.v_star == x.back_transform(initial_guess_identity(2, 1)));
}

TEST_CASE("SCGLED full-solve preset stops early") {
  const Problem toy = toy_problem();
  SolverConfig c = SolverConfig::full_solve(20000);
  c.init = InitGuess::seeded_random;
  c.seed = 11;
  const ConvergenceReport r = scgled(toy, c);
  CHECK(r.converged);
  CHECK(r.iterations_used < 20000);
}

TEST_CASE("vanilla SCGLED") {
  const Problem toy = toy_problem();
  SolverConfig c;
  c.method = Method::scgled_vanilla;
  c.t_max = 100000;
  c.init = InitGuess::seeded_random;
  c.seed = 2;
  const ConvergenceReport r = scgled_vanilla(toy, c);
  CHECK(r.converged);
  CHECK(std::abs(std::abs(r.v_star(0, 0)) - toy_golden::v_entry) <= 1e-3);
  CHECK(r.eigenvalues(0) == doctest::Approx(toy_golden::lambda1).epsilon(1e-3));

  const ProblemData d = testing::linear_instance(4, 6, 2);
  const Problem lin = validate_problem(d);
  const ConvergenceReport rl = scgled_vanilla(lin, c);
  CHECK(rl.converged);
  const testing::GeneralizedOracle o = testing::generalized_eig(d.core_hamiltonian, d.overlap);
  CHECK(testing::projector_distance(rl.v_star, o.eigenvectors.leftCols(2), d.overlap) < 1e-6);
}

TEST_CASE("hybrid") {
  const Problem toy = toy_problem();
  SolverConfig c;
  c.method = Method::hybrid;
  c.t_max = 1000;
  const ConvergenceReport h = hybrid(toy, c);
  const ConvergenceReport s = scf(toy, initial_guess_hcore(toy), c);
  CHECK(h.converged);
  CHECK(h.iterations_used == 1000);
  CHECK(h.scf_iterations_used <= s.scf_iterations_used);
  CHECK(h.guess_energy.has_value());
  for (std::size_t i = 1; i < h.trace.size(); ++i) CHECK(h.trace[i].iteration > h.trace[i - 1].iteration);

  c.t_max = 0;
  c.init = InitGuess::identity_block;
  const ConvergenceReport h0 = hybrid(toy, c);
  const Orthogonalizer x(toy.overlap_spectrum());
  const ConvergenceReport direct = scf(toy, x.back_transform(initial_guess_identity(2, 1)), c);
  CHECK(h0.total_energy == direct.total_energy);
  CHECK(h0.scf_iterations_used == direct.scf_iterations_used);
}

TEST_CASE("hybrid falls back to the core guess when the gradient phase blows up") {
  const Problem toy = toy_problem();
  SolverConfig c;
  c.t_max = 50;
  c.i_f = 50;
  c.eta = 1e308;
  c.init = InitGuess::seeded_random;
  CHECK_THROWS_AS(scgled(toy, c), Diverged);
  const ConvergenceReport r = hybrid(toy, c);
  CHECK(r.converged);
  CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("solve is deterministic") {
  const Problem toy = toy_problem();
  SolverConfig c;
  c.init = InitGuess::seeded_random;
  c.seed = 99;
  c.t_max = 3000;
  for (Method m : {Method::scgled, Method::scgled_vanilla, Method::scf, Method::hybrid}) {
    c.method = m;
    const ConvergenceReport a = solve(toy, c);
    const ConvergenceReport b = solve(toy, c);
    CHECK(a.v_star == b.v_star);
    CHECK(a.total_energy == b.total_energy);
    CHECK(a.trace.size() == b.trace.size());
  }
}

TEST_CASE("eigenvalues ascending and converged reports satisfy the residual bound") {
  const ProblemData d = testing::linear_instance(8, 7, 3);
  const Problem lin = validate_problem(d);
  SolverConfig c;
  c.t_max = 100000;
  c.early_stop = true;
  const ConvergenceReport r = scgled(lin, c);
  REQUIRE(r.converged);
  for (Eigen::Index i = 1; i < r.eigenvalues.size(); ++i) CHECK(r.eigenvalues(i - 1) <= r.eigenvalues(i));
  CHECK(residual(lin, r.v_star) < 1e-5);
  const testing::GeneralizedOracle o = testing::generalized_eig(d.core_hamiltonian, d.overlap);
  CHECK((r.eigenvalues - o.eigenvalues.head(3)).cwiseAbs().maxCoeff() < 1e-6);
}
