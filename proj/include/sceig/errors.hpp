#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sceig {

struct TraceRecord;

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Errors caused by malformed or inconsistent input data (CLI exit status 2).
class InputError : public Error {
 public:
  using Error::Error;
};

class AsymmetricInput : public InputError {
 public:
  AsymmetricInput(std::string matrix, double max_deviation);
  const std::string& matrix() const noexcept { return matrix_; }
  double max_deviation() const noexcept { return max_deviation_; }

 private:
  std::string matrix_;
  double max_deviation_;
};

class NotPositiveDefinite : public InputError {
 public:
  explicit NotPositiveDefinite(double smallest_eigenvalue);
  double smallest_eigenvalue() const noexcept { return smallest_; }

 private:
  double smallest_;
};

class BadTensorSymmetry : public InputError {
 public:
  BadTensorSymmetry(std::array<std::size_t, 4> index, double deviation);
  const std::array<std::size_t, 4>& index() const noexcept { return index_; }
  double deviation() const noexcept { return deviation_; }

 private:
  std::array<std::size_t, 4> index_;
  double deviation_;
};

class BadOccupation : public InputError {
 public:
  BadOccupation(long k, long n_basis);
};

class IndexOutOfRange : public InputError {
 public:
  using InputError::InputError;
};

class DimensionMismatch : public InputError {
 public:
  DimensionMismatch(const std::string& what, std::size_t expected, std::size_t actual);
  std::size_t expected() const noexcept { return expected_; }
  std::size_t actual() const noexcept { return actual_; }

 private:
  std::size_t expected_;
  std::size_t actual_;
};

class ParseError : public InputError {
 public:
  ParseError(std::size_t position, const std::string& message);
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class InvalidConfig : public InputError {
 public:
  using InputError::InputError;
};

class EmptyInput : public InputError {
 public:
  using InputError::InputError;
};

/// Dense eigensolver exceeded its sweep cap.
class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, double off_diagonal_norm);
  double off_diagonal_norm() const noexcept { return off_norm_; }

 private:
  double off_norm_;
};

class RankDeficient : public Error {
 public:
  RankDeficient(std::size_t column, double residual_norm);
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

class DegenerateUtility : public Error {
 public:
  DegenerateUtility(std::size_t column, double utility);
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

class VanishingColumn : public Error {
 public:
  VanishingColumn(std::size_t column, double norm);
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

/// A solver run blew up (vanishing column or non-finite values). Carries the
/// trace collected up to the failure.
class Diverged : public Error {
 public:
  Diverged(const std::string& message, std::vector<TraceRecord> trace);
  const std::vector<TraceRecord>& trace() const noexcept { return trace_; }

 private:
  std::vector<TraceRecord> trace_;
};

}  // namespace sceig
