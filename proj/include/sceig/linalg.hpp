#pragma once

#include <Eigen/Dense>

namespace sceig {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Full spectrum of a real symmetric matrix. Eigenvalues ascend; column i of
/// `eigenvectors` pairs with eigenvalue i. Each eigenvector has its entry of
/// largest magnitude non-negative (first such entry on ties).
struct EigenDecomposition {
  Vector eigenvalues;
  Matrix eigenvectors;
};

/// Cyclic Jacobi eigensolver. The input is symmetrized as (M + M^T)/2 first.
/// Bitwise deterministic for identical input. Throws NoConvergence if the
/// sweep cap is hit.
EigenDecomposition sym_eig(const Matrix& m);

/// Canonical orthogonalizer X = U diag(s^{-1/2}) with X^T S X = I. Columns are
/// ordered by descending overlap eigenvalue s (stable on ties).
class Orthogonalizer {
 public:
  /// Builds X from S. Throws NotPositiveDefinite if min eig(S) <= 1e-10.
  explicit Orthogonalizer(const Matrix& s);
  /// Builds X from an already computed decomposition of S.
  explicit Orthogonalizer(const EigenDecomposition& overlap_spectrum);

  const Matrix& x() const noexcept { return x_; }
  const Matrix& x_transpose() const noexcept { return xt_; }

  /// X^T A X
  Matrix to_orthonormal(const Matrix& a) const { return xt_ * a * x_; }
  /// X V'
  Matrix back_transform(const Matrix& v_prime) const { return x_ * v_prime; }

 private:
  Matrix x_;
  Matrix xt_;
};

Orthogonalizer canonical_orthogonalizer(const Matrix& s);

/// Classical Gram-Schmidt on the columns of v, left to right. A column whose
/// first pass leaves more than 1e-10 of overlap with earlier columns gets a
/// second pass. Throws RankDeficient if a residual norm drops below 1e-12.
Matrix gram_schmidt_qr(const Matrix& v);

/// Eigenvalue threshold below which S counts as singular.
inline constexpr double kPositiveDefiniteFloor = 1e-10;

}  // namespace sceig
