#pragma once

// Independent oracles and generators shared by the test binaries. Nothing
// here calls into the library's own eigensolver.

#include <Eigen/Dense>
#include <cstdint>
#include <random>

#include "sceig/problem.hpp"

namespace sceig::testing {

inline Matrix random_symmetric(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  Matrix a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = d(rng);
  return 0.5 * (a + a.transpose());
}

// A A^T + I, rescaled to unit diagonal like an overlap matrix
inline Matrix random_spd(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Matrix a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = d(rng) / std::sqrt(static_cast<double>(n));
  Matrix s = a * a.transpose() + Matrix::Identity(a.rows(), a.cols());
  const Vector inv = s.diagonal().cwiseSqrt().cwiseInverse();
  s = inv.asDiagonal() * s * inv.asDiagonal();
  return 0.5 * (s + s.transpose());
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  Matrix a(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = d(rng);
  return a;
}

struct GeneralizedOracle {
  Vector eigenvalues;   // ascending
  Matrix eigenvectors;  // S-orthonormal columns
};

inline GeneralizedOracle generalized_eig(const Matrix& h, const Matrix& s) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(h, s);
  return {es.eigenvalues(), es.eigenvectors()};
}

// S-orthogonal projector onto span(V): V (V^T S V)^-1 V^T S
inline Matrix s_projector(const Matrix& v, const Matrix& s) {
  return v * (v.transpose() * s * v).ldlt().solve(v.transpose() * s);
}

inline double projector_distance(const Matrix& a, const Matrix& b, const Matrix& s) {
  return (s_projector(a, s) - s_projector(b, s)).norm();
}

// Euclidean projector distance
inline double projector_distance(const Matrix& a, const Matrix& b) {
  const Matrix id = Matrix::Identity(a.rows(), a.rows());
  return projector_distance(a, b, id);
}

// E = 0 instance whose k lowest generalized eigenvalues are negative and
// separated from the rest by at least `gap`. Gradient solvers on -F' need
// the occupied block to be the positive part of the spectrum.
inline ProblemData linear_instance(std::uint64_t seed, std::size_t n, std::size_t k, double gap = 0.05) {
  std::mt19937_64 rng(seed);
  for (;;) {
    ProblemData d;
    d.n_basis = n;
    d.k = static_cast<long>(k);
    d.overlap = random_spd(n, rng);
    d.core_hamiltonian = random_symmetric(n, rng);
    d.eri = EriTensor::zeros(n);
    d.label = "linear-" + std::to_string(seed);
    const GeneralizedOracle o = generalized_eig(d.core_hamiltonian, d.overlap);
    const auto kk = static_cast<Eigen::Index>(k);
    if (kk < o.eigenvalues.size() && o.eigenvalues(kk) - o.eigenvalues(kk - 1) < gap) continue;
    const double shift = o.eigenvalues(kk - 1) + 0.1;
    if (shift > 0.0) d.core_hamiltonian -= shift * d.overlap;
    d.core_hamiltonian = 0.5 * (d.core_hamiltonian + d.core_hamiltonian.transpose());
    return d;
  }
}

// U_eff by the defining quadruple sums
inline Matrix naive_u_eff(const EriTensor& e, const Matrix& p) {
  const std::size_t n = e.n();
  Matrix u = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      double sum = 0.0;
      for (std::size_t l = 0; l < n; ++l)
        for (std::size_t s = 0; s < n; ++s) {
          const double pls = p(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(s));
          sum += pls * e(a, b, l, s) - 0.5 * pls * e(a, l, s, b);
        }
      u(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = sum;
    }
  return u;
}

// Random tensor with exact 8-fold symmetry
inline EriTensor random_symmetric_eri(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(0.0, 1.0);
  EriTensor e = EriTensor::zeros(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v <= u; ++v)
      for (std::size_t l = 0; l < n; ++l)
        for (std::size_t s = 0; s <= l; ++s) {
          if (u * (u + 1) / 2 + v < l * (l + 1) / 2 + s) continue;
          const double x = d(rng);
          e(u, v, l, s) = e(v, u, l, s) = e(u, v, s, l) = e(v, u, s, l) = x;
          e(l, s, u, v) = e(s, l, u, v) = e(l, s, v, u) = e(s, l, v, u) = x;
        }
  return e;
}

}  // namespace sceig::testing
