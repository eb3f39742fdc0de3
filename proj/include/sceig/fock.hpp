#pragma once

#include <cstddef>
#include <deque>
#include <string_view>

#include "sceig/linalg.hpp"
#include "sceig/problem.hpp"

namespace sceig {

/// P(V) = 2 V V^T
Matrix density(const Matrix& v);

/// A map from a density matrix to the effective potential U_eff(P).
class EffectivePotential {
 public:
  virtual ~EffectivePotential() = default;
  virtual Matrix operator()(const Matrix& density) const = 0;
};

/// Closed-shell Hartree-Fock potential:
///   U[u,v] = sum_{l,s} P[l,s] E[u,v,l,s] - 1/2 sum_{l,s} P[l,s] E[u,l,s,v].
/// Holds a reference to the tensor; the tensor must outlive the potential.
class HartreeFockPotential final : public EffectivePotential {
 public:
  explicit HartreeFockPotential(const EriTensor& eri) : eri_(&eri) {}
  Matrix operator()(const Matrix& density) const override;

 private:
  const EriTensor* eri_;
};

/// Throws DimensionMismatch when P is not N x N.
Matrix u_eff_hf(const Matrix& p, const Problem& problem);

/// F = H + U_eff(P)
Matrix fock(const Problem& problem, const Matrix& p);
Matrix fock(const Matrix& h, const EffectivePotential& potential, const Matrix& p);

/// 1/2 sum_{uv} P[u,v] (H[u,v] + F[u,v]); add the nuclear repulsion for the total.
double electronic_energy(const Matrix& p, const Matrix& h, const Matrix& f);
double total_energy(const Problem& problem, const Matrix& v);

/// diag(v_i^T F v_i)
Vector rayleigh_quotients(const Matrix& f, const Matrix& v);

/// ||F(V) V - S V Lambda||_F with Lambda the Rayleigh quotients of F(V).
/// Columns of V must be S-normalized.
double residual(const Problem& problem, const Matrix& v);

enum class Acceleration { vanilla, damping, diis };

std::string_view to_string(Acceleration mode) noexcept;

/// The conditioned Fock matrix carried between updates, together with the
/// DIIS history. One solver run owns one state.
class FockState {
 public:
  static constexpr std::size_t kDefaultDiisCapacity = 8;

  FockState(Matrix initial, Acceleration mode, double alpha,
            std::size_t diis_capacity = kDefaultDiisCapacity);

  const Matrix& f() const noexcept { return f_; }
  const Matrix& f_prime() const noexcept { return f_prime_; }
  Acceleration mode() const noexcept { return mode_; }
  void set_mode(Acceleration mode) noexcept { mode_ = mode; }
  double alpha() const noexcept { return alpha_; }

  std::size_t diis_history_size() const noexcept { return history_.size(); }
  std::size_t diis_fallbacks() const noexcept { return fallbacks_; }
  /// Coefficients of the last successful extrapolation.
  const Vector& diis_coefficients() const noexcept { return coefficients_; }
  void clear_diis_history() { history_.clear(); }

  /// F <- (1 - alpha) F + alpha F_new
  void damp(const Matrix& f_new);

  /// Appends (F_new, X^T (F P S - S P F) X) to the history and replaces F
  /// by the Pulay extrapolation sum c_i F_i with sum c_i = 1. A singular
  /// system falls back to F_new and bumps diis_fallbacks().
  void diis_extrapolate(const Matrix& f_new, const Matrix& p, const Matrix& s,
                        const Orthogonalizer& x);

  /// Dispatches on mode() and refreshes f_prime() = X^T F X.
  void update(const Matrix& f_new, const Matrix& p, const Matrix& s, const Orthogonalizer& x);

 private:
  struct Entry {
    Matrix fock;
    Matrix error;
  };

  Matrix f_;
  Matrix f_prime_;
  Acceleration mode_;
  double alpha_;
  std::size_t capacity_;
  std::deque<Entry> history_;
  Vector coefficients_;
  std::size_t fallbacks_ = 0;
};

/// X^T (F P S - S P F) X
Matrix diis_error(const Matrix& f, const Matrix& p, const Matrix& s, const Orthogonalizer& x);

}  // namespace sceig
