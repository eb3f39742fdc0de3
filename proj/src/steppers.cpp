#include "sceig/steppers.hpp"

#include <algorithm>
#include <cmath>

#include "sceig/errors.hpp"

namespace sceig {

Matrix oja_step(const Matrix& m, const Matrix& v, double eta) {
  return gram_schmidt_qr(v + eta * (m * v));
}

EigenGameGradient eigengame_gradient(const Matrix& m, const Matrix& v, DegeneratePolicy policy) {
  const Eigen::Index k = v.cols();
  const Matrix mv = m * v;
  const double floor = 1e-12 * m.norm();

  EigenGameGradient out{Matrix(v.rows(), k), {}};
  Vector utility(k);
  for (Eigen::Index j = 0; j < k; ++j) utility(j) = v.col(j).dot(mv.col(j));

  std::vector<bool> degenerate(static_cast<std::size_t>(k), false);
  for (Eigen::Index j = 0; j + 1 < k; ++j) {
    if (std::abs(utility(j)) < floor) {
      if (policy == DegeneratePolicy::raise)
        throw DegenerateUtility(static_cast<std::size_t>(j), utility(j));
      degenerate[static_cast<std::size_t>(j)] = true;
      out.degenerate_columns.push_back(static_cast<std::size_t>(j));
    }
  }

  for (Eigen::Index i = 0; i < k; ++i) {
    Vector g = mv.col(i);
    for (Eigen::Index j = 0; j < i; ++j) {
      if (degenerate[static_cast<std::size_t>(j)]) continue;
      g -= (v.col(i).dot(mv.col(j)) / utility(j)) * mv.col(j);
    }
    g *= 2.0;
    out.gradient.col(i) = g - g.dot(v.col(i)) * v.col(i);
  }
  return out;
}

void momentum_normalize_step(StepperState& state, const Matrix& grad) {
  state.momentum = state.beta * state.momentum + state.eta * grad;
  state.v_prime += state.momentum;
  for (Eigen::Index i = 0; i < state.v_prime.cols(); ++i) {
    const double norm = state.v_prime.col(i).norm();
    if (!(norm >= 1e-30) || !std::isfinite(norm))
      throw VanishingColumn(static_cast<std::size_t>(i), norm);
    state.v_prime.col(i) /= norm;
  }
}

}  // namespace sceig
