#pragma once

#include <cstddef>
#include <vector>

#include "sceig/linalg.hpp"

namespace sceig {

/// One Oja update towards the top-k LARGEST eigenvectors of the symmetric M:
/// QR(V + eta M V) by classical Gram-Schmidt.
Matrix oja_step(const Matrix& m, const Matrix& v, double eta);

enum class DegeneratePolicy {
  zero_term,  // drop the offending penalty term and report the column
  raise,      // throw DegenerateUtility
};

struct EigenGameGradient {
  Matrix gradient;
  /// Columns j whose utility v_j^T M v_j fell below 1e-12 ||M||_F.
  std::vector<std::size_t> degenerate_columns;
};

/// Riemannian EigenGame gradients for every column, all computed from the
/// same snapshot of V:
///   g_i = 2 M [v_i - sum_{j<i} (v_i^T M v_j)/(v_j^T M v_j) v_j]
///   grad_i = g_i - <g_i, v_i> v_i
EigenGameGradient eigengame_gradient(const Matrix& m, const Matrix& v,
                                     DegeneratePolicy policy = DegeneratePolicy::zero_term);

struct StepperState {
  Matrix v_prime;
  Matrix momentum;
  double eta = 1e-2;
  double beta = 0.9;
};

/// m <- beta m + eta grad; V' <- V' + m; then each column of V' is scaled to
/// unit length. The momentum buffer is left as is by the normalization.
/// Throws VanishingColumn when a column norm is below 1e-30 (or non-finite).
void momentum_normalize_step(StepperState& state, const Matrix& grad);

}  // namespace sceig
