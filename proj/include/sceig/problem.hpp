#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sceig/linalg.hpp"

namespace sceig {

/// Dense two-electron repulsion tensor E[u,v,l,s], row-major with flat index
/// ((u*N + v)*N + l)*N + s.
class EriTensor {
 public:
  EriTensor() = default;
  /// Throws DimensionMismatch if values.size() != n^4.
  EriTensor(std::size_t n, std::vector<double> values);
  static EriTensor zeros(std::size_t n);

  std::size_t n() const noexcept { return n_; }

  static constexpr std::size_t flat_index(std::size_t n, std::size_t u, std::size_t v,
                                          std::size_t l, std::size_t s) noexcept {
    return ((u * n + v) * n + l) * n + s;
  }

  double operator()(std::size_t u, std::size_t v, std::size_t l, std::size_t s) const noexcept {
    return values_[flat_index(n_, u, v, l, s)];
  }
  double& operator()(std::size_t u, std::size_t v, std::size_t l, std::size_t s) noexcept {
    return values_[flat_index(n_, u, v, l, s)];
  }
  /// Bounds-checked read; throws IndexOutOfRange.
  double at(std::size_t u, std::size_t v, std::size_t l, std::size_t s) const;

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  friend bool operator==(const EriTensor&, const EriTensor&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

/// Unvalidated problem data, as read from a file or assembled in code.
struct ProblemData {
  std::size_t n_basis = 0;
  long k = 0;
  Matrix overlap;           // S
  Matrix core_hamiltonian;  // H
  EriTensor eri;            // E
  double nuclear_repulsion = 0.0;
  std::optional<double> reference_energy;
  std::string label;
};

/// A validated, immutable problem instance. Only obtainable from
/// validate_problem, so holding one means every invariant holds.
class Problem {
 public:
  std::size_t n_basis() const noexcept { return data_.n_basis; }
  std::size_t k() const noexcept { return static_cast<std::size_t>(data_.k); }
  const Matrix& overlap() const noexcept { return data_.overlap; }
  const Matrix& core_hamiltonian() const noexcept { return data_.core_hamiltonian; }
  const EriTensor& eri() const noexcept { return data_.eri; }
  double nuclear_repulsion() const noexcept { return data_.nuclear_repulsion; }
  const std::optional<double>& reference_energy() const noexcept { return data_.reference_energy; }
  const std::string& label() const noexcept { return data_.label; }
  const ProblemData& data() const noexcept { return data_; }

  /// Spectrum of S, computed once during validation.
  const EigenDecomposition& overlap_spectrum() const noexcept { return overlap_spectrum_; }
  /// Largest 8-fold symmetry deviation found in E before repair (0 if exact).
  double eri_symmetry_repaired() const noexcept { return eri_repair_; }

 private:
  friend Problem validate_problem(ProblemData candidate);
  Problem(ProblemData data, EigenDecomposition spectrum, double eri_repair)
      : data_(std::move(data)), overlap_spectrum_(std::move(spectrum)), eri_repair_(eri_repair) {}

  ProblemData data_;
  EigenDecomposition overlap_spectrum_;
  double eri_repair_ = 0.0;
};

inline constexpr double kMatrixSymmetryTol = 1e-10;
inline constexpr double kEriSymmetryTol = 1e-8;

/// Checks dimensions, occupation, symmetry of S and H, 8-fold symmetry of E
/// and positive definiteness of S. E deviations up to 1e-8 are repaired by
/// averaging each symmetry orbit (with a warning); anything larger throws.
Problem validate_problem(ProblemData candidate);
/// Revalidation of an already validated instance returns an identical copy.
Problem validate_problem(const Problem& problem);

/// E[u,v,l,s]; throws IndexOutOfRange.
double eri_element(const Problem& problem, std::size_t u, std::size_t v, std::size_t l,
                   std::size_t s);

/// Largest |E[p] - E[partner]| over the three generators of the 8-fold
/// symmetry group, with the index where it occurs.
struct EriSymmetryReport {
  double max_deviation = 0.0;
  std::array<std::size_t, 4> worst{};
};
EriSymmetryReport check_eri_symmetry(const EriTensor& eri);

/// Replaces every element by the mean of its 8-fold orbit, summed in
/// ascending flat-index order.
void symmetrize_eri(EriTensor& eri);

}  // namespace sceig
