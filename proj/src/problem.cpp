#include "sceig/problem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sceig/errors.hpp"
#include "sceig/log.hpp"

namespace sceig {

EriTensor::EriTensor(std::size_t n, std::vector<double> values) : n_(n), values_(std::move(values)) {
  const std::size_t expected = n * n * n * n;
  if (values_.size() != expected) throw DimensionMismatch("eri length", expected, values_.size());
}

EriTensor EriTensor::zeros(std::size_t n) { return EriTensor(n, std::vector<double>(n * n * n * n, 0.0)); }

double EriTensor::at(std::size_t u, std::size_t v, std::size_t l, std::size_t s) const {
  if (u >= n_ || v >= n_ || l >= n_ || s >= n_)
    throw IndexOutOfRange("eri index (" + std::to_string(u) + "," + std::to_string(v) + "," +
                          std::to_string(l) + "," + std::to_string(s) + ") outside [0, " +
                          std::to_string(n_) + ")");
  return (*this)(u, v, l, s);
}

EriSymmetryReport check_eri_symmetry(const EriTensor& eri) {
  EriSymmetryReport report;
  const std::size_t n = eri.n();
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t l = 0; l < n; ++l)
        for (std::size_t s = 0; s < n; ++s) {
          const double x = eri(u, v, l, s);
          const double dev = std::max({std::abs(x - eri(v, u, l, s)), std::abs(x - eri(u, v, s, l)),
                                       std::abs(x - eri(l, s, u, v))});
          // NaN deviations must also be reported
          if (dev > report.max_deviation || std::isnan(dev)) {
            report.max_deviation = dev;
            report.worst = {u, v, l, s};
            if (std::isnan(dev)) return report;
          }
        }
  return report;
}

void symmetrize_eri(EriTensor& eri) {
  const std::size_t n = eri.n();
  auto values = eri.values();
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t l = 0; l < n; ++l)
        for (std::size_t s = 0; s < n; ++s) {
          std::array<std::size_t, 8> orbit = {
              EriTensor::flat_index(n, u, v, l, s), EriTensor::flat_index(n, v, u, l, s),
              EriTensor::flat_index(n, u, v, s, l), EriTensor::flat_index(n, v, u, s, l),
              EriTensor::flat_index(n, l, s, u, v), EriTensor::flat_index(n, s, l, u, v),
              EriTensor::flat_index(n, l, s, v, u), EriTensor::flat_index(n, s, l, v, u)};
          std::sort(orbit.begin(), orbit.end());
          // visit each orbit once, from its smallest member
          if (orbit[0] != EriTensor::flat_index(n, u, v, l, s)) continue;
          const auto last = std::unique(orbit.begin(), orbit.end());
          double sum = 0.0;
          for (auto it = orbit.begin(); it != last; ++it) sum += values[*it];
          const double mean = sum / static_cast<double>(last - orbit.begin());
          for (auto it = orbit.begin(); it != last; ++it) values[*it] = mean;
        }
}

namespace {

double max_asymmetry(const Matrix& m) { return (m - m.transpose()).cwiseAbs().maxCoeff(); }

}  // namespace

Problem validate_problem(ProblemData candidate) {
  const std::size_t n = candidate.n_basis;
  if (n == 0) throw DimensionMismatch("n_basis must be positive", 1, 0);
  const auto dim = static_cast<Eigen::Index>(n);
  if (candidate.overlap.rows() != dim || candidate.overlap.cols() != dim)
    throw DimensionMismatch("overlap size", n * n,
                            static_cast<std::size_t>(candidate.overlap.size()));
  if (candidate.core_hamiltonian.rows() != dim || candidate.core_hamiltonian.cols() != dim)
    throw DimensionMismatch("core_hamiltonian size", n * n,
                            static_cast<std::size_t>(candidate.core_hamiltonian.size()));
  if (candidate.eri.n() != n) throw DimensionMismatch("eri dimension", n, candidate.eri.n());
  if (candidate.k < 1 || candidate.k > static_cast<long>(n))
    throw BadOccupation(candidate.k, static_cast<long>(n));

  const auto all_finite = [](auto&& range) {
    return std::all_of(range.begin(), range.end(), [](double x) { return std::isfinite(x); });
  };
  if (!candidate.overlap.allFinite() || !candidate.core_hamiltonian.allFinite() ||
      !all_finite(candidate.eri.values()) || !std::isfinite(candidate.nuclear_repulsion) ||
      (candidate.reference_energy && !std::isfinite(*candidate.reference_energy)))
    throw InputError("problem contains non-finite values");

  if (const double d = max_asymmetry(candidate.overlap); d > kMatrixSymmetryTol)
    throw AsymmetricInput("S", d);
  if (const double d = max_asymmetry(candidate.core_hamiltonian); d > kMatrixSymmetryTol)
    throw AsymmetricInput("H", d);

  const EriSymmetryReport sym = check_eri_symmetry(candidate.eri);
  if (!(sym.max_deviation <= kEriSymmetryTol)) throw BadTensorSymmetry(sym.worst, sym.max_deviation);
  if (sym.max_deviation > 0.0) {
    symmetrize_eri(candidate.eri);
    log_warning("two-electron tensor symmetry repaired (max deviation " +
                std::to_string(sym.max_deviation) + ")");
  }

  EigenDecomposition spectrum = sym_eig(candidate.overlap);
  if (spectrum.eigenvalues(0) <= kPositiveDefiniteFloor)
    throw NotPositiveDefinite(spectrum.eigenvalues(0));

  return Problem(std::move(candidate), std::move(spectrum), sym.max_deviation);
}

Problem validate_problem(const Problem& problem) { return validate_problem(problem.data()); }

double eri_element(const Problem& problem, std::size_t u, std::size_t v, std::size_t l,
                   std::size_t s) {
  return problem.eri().at(u, v, l, s);
}

}  // namespace sceig
