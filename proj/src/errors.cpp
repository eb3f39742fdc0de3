#include "sceig/errors.hpp"

#include <cstdio>

#include "sceig/solvers.hpp"

namespace sceig {

namespace {

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

AsymmetricInput::AsymmetricInput(std::string matrix, double max_deviation)
    : InputError("matrix " + matrix + " is not symmetric (max deviation " +
                 fmt_double(max_deviation) + ")"),
      matrix_(std::move(matrix)),
      max_deviation_(max_deviation) {}

NotPositiveDefinite::NotPositiveDefinite(double smallest_eigenvalue)
    : InputError("overlap matrix is not positive definite (smallest eigenvalue " +
                 fmt_double(smallest_eigenvalue) + ")"),
      smallest_(smallest_eigenvalue) {}

BadTensorSymmetry::BadTensorSymmetry(std::array<std::size_t, 4> index, double deviation)
    : InputError("two-electron tensor violates 8-fold symmetry at (" + std::to_string(index[0]) +
                 "," + std::to_string(index[1]) + "," + std::to_string(index[2]) + "," +
                 std::to_string(index[3]) + "), deviation " + fmt_double(deviation)),
      index_(index),
      deviation_(deviation) {}

BadOccupation::BadOccupation(long k, long n_basis)
    : InputError("occupation k = " + std::to_string(k) + " outside [1, " +
                 std::to_string(n_basis) + "]") {}

DimensionMismatch::DimensionMismatch(const std::string& what, std::size_t expected,
                                     std::size_t actual)
    : InputError(what + ": expected " + std::to_string(expected) + ", got " +
                 std::to_string(actual)),
      expected_(expected),
      actual_(actual) {}

ParseError::ParseError(std::size_t position, const std::string& message)
    : InputError("parse error at byte " + std::to_string(position) + ": " + message),
      position_(position) {}

NoConvergence::NoConvergence(const std::string& what, double off_diagonal_norm)
    : Error(what + " did not converge (off-diagonal norm " + fmt_double(off_diagonal_norm) + ")"),
      off_norm_(off_diagonal_norm) {}

RankDeficient::RankDeficient(std::size_t column, double residual_norm)
    : Error("column " + std::to_string(column) + " is linearly dependent (residual norm " +
            fmt_double(residual_norm) + ")"),
      column_(column) {}

DegenerateUtility::DegenerateUtility(std::size_t column, double utility)
    : Error("utility of column " + std::to_string(column) + " is degenerate (" +
            fmt_double(utility) + ")"),
      column_(column) {}

VanishingColumn::VanishingColumn(std::size_t column, double norm)
    : Error("column " + std::to_string(column) + " vanished (norm " + fmt_double(norm) + ")"),
      column_(column) {}

Diverged::Diverged(const std::string& message, std::vector<TraceRecord> trace)
    : Error(message), trace_(std::move(trace)) {}

}  // namespace sceig
