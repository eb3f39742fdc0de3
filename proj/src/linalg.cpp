#include "sceig/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "sceig/errors.hpp"

namespace sceig {

namespace {

constexpr int kMaxSweeps = 100;

double off_diagonal_sum_of_squares(const Matrix& a) {
  double sum = 0.0;
  for (Eigen::Index q = 1; q < a.cols(); ++q)
    for (Eigen::Index p = 0; p < q; ++p) sum += a(p, q) * a(p, q);
  return 2.0 * sum;
}

// A <- J^T A J and V <- V J for the plane rotation J acting on (p, q).
void rotate(Matrix& a, Matrix& v, Eigen::Index p, Eigen::Index q, double c, double s) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    const double apk = a(p, k);
    const double aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

}  // namespace

EigenDecomposition sym_eig(const Matrix& m) {
  if (m.rows() != m.cols())
    throw DimensionMismatch("sym_eig expects a square matrix (columns)", m.rows(), m.cols());
  const Eigen::Index n = m.rows();
  Matrix a = 0.5 * (m + m.transpose());
  Matrix v = Matrix::Identity(n, n);

  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    const double off = off_diagonal_sum_of_squares(a);
    if (off == 0.0) {
      converged = true;
      break;
    }
    if (!std::isfinite(off)) break;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        const double g = 100.0 * std::abs(apq);
        // After a few sweeps, entries below the precision of both diagonal
        // elements are dropped; this is what makes the loop terminate.
        if (sweep > 3 && std::abs(app) + g == std::abs(app) && std::abs(aqq) + g == std::abs(aqq)) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        rotate(a, v, p, q, c, s);
      }
    }
  }
  if (!converged) throw NoConvergence("Jacobi eigensolver", std::sqrt(off_diagonal_sum_of_squares(a)));

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });

  EigenDecomposition out{Vector(n), Matrix(n, n)};
  for (Eigen::Index c = 0; c < n; ++c) {
    const Eigen::Index src = order[static_cast<std::size_t>(c)];
    out.eigenvalues(c) = a(src, src);
    Eigen::Index pivot = 0;
    for (Eigen::Index r = 1; r < n; ++r)
      if (std::abs(v(r, src)) > std::abs(v(pivot, src))) pivot = r;
    const double sign = v(pivot, src) < 0.0 ? -1.0 : 1.0;
    out.eigenvectors.col(c) = sign * v.col(src);
  }
  return out;
}

Orthogonalizer::Orthogonalizer(const Matrix& s) : Orthogonalizer(sym_eig(s)) {}

Orthogonalizer::Orthogonalizer(const EigenDecomposition& spectrum) {
  const Eigen::Index n = spectrum.eigenvalues.size();
  if (n > 0 && spectrum.eigenvalues(0) <= kPositiveDefiniteFloor)
    throw NotPositiveDefinite(spectrum.eigenvalues(0));
  // Columns by descending overlap eigenvalue, ties kept in sym_eig order. In
  // ascending order the [I; 0] start of the gradient solvers sits exactly on
  // the antibonding stationary point of symmetric dimers and never leaves it.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return spectrum.eigenvalues(a) > spectrum.eigenvalues(b);
  });
  x_.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index src = order[static_cast<std::size_t>(j)];
    x_.col(j) = spectrum.eigenvectors.col(src) / std::sqrt(spectrum.eigenvalues(src));
  }
  xt_ = x_.transpose();
}

Orthogonalizer canonical_orthogonalizer(const Matrix& s) { return Orthogonalizer(s); }

Matrix gram_schmidt_qr(const Matrix& v) {
  constexpr double kRankFloor = 1e-12;
  constexpr double kReorthTol = 1e-10;
  const Eigen::Index n = v.rows();
  const Eigen::Index k = v.cols();
  if (k > n) throw RankDeficient(static_cast<std::size_t>(n), 0.0);
  Matrix q(n, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    Vector r = v.col(j);
    if (j > 0) {
      const auto basis = q.leftCols(j);
      const Vector coeffs = basis.transpose() * v.col(j);
      r -= basis * coeffs;
    }
    double norm = r.norm();
    if (!(norm >= kRankFloor)) throw RankDeficient(static_cast<std::size_t>(j), norm);
    if (j > 0) {
      const auto basis = q.leftCols(j);
      Vector overlap = basis.transpose() * r;
      if (overlap.cwiseAbs().maxCoeff() > kReorthTol * norm) {
        r -= basis * overlap;
        norm = r.norm();
        if (!(norm >= kRankFloor)) throw RankDeficient(static_cast<std::size_t>(j), norm);
      }
    }
    q.col(j) = r / norm;
  }
  return q;
}

}  // namespace sceig
