#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qbound {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands whose dimensions do not fit together.
class DimensionError : public Error {
 public:
  DimensionError(const std::string& what, std::size_t expected, std::size_t actual)
      : Error(what + " (expected dim " + std::to_string(expected) + ", got " +
              std::to_string(actual) + ")"),
        expected_(expected),
        actual_(actual) {}

  std::size_t expected() const noexcept { return expected_; }
  std::size_t actual() const noexcept { return actual_; }

 private:
  std::size_t expected_;
  std::size_t actual_;
};

/// Argument outside the mathematical domain (beta <= 0, non-PSD state, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input matrix that is not Hermitian within tolerance.
class NotHermitianError : public DomainError {
 public:
  NotHermitianError(double deviation)
      : DomainError("matrix is not Hermitian: max |A - A^H| = " + std::to_string(deviation)),
        deviation_(deviation) {}

  double deviation() const noexcept { return deviation_; }

 private:
  double deviation_;
};

/// A scalar function produced a non-finite value inside the spectral calculus.
class NonFiniteError : public DomainError {
 public:
  explicit NonFiniteError(double eigenvalue)
      : DomainError("function is not finite at eigenvalue " + std::to_string(eigenvalue)),
        eigenvalue_(eigenvalue) {}

  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

/// An iterative solver gave up.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::size_t dim, std::size_t iterations)
      : Error(what + " (dim " + std::to_string(dim) + ", " + std::to_string(iterations) +
              " iterations)"),
        dim_(dim),
        iterations_(iterations) {}

  std::size_t dim() const noexcept { return dim_; }
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  std::size_t dim_;
  std::size_t iterations_;
};

/// Model too large for dense storage.
class CapacityError : public Error {
 public:
  using Error::Error;
};

}  // namespace qbound
