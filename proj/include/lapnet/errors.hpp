#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lapnet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A matrix that must be positive definite is not. Carries the offending
/// (smallest) eigenvalue when it is known.
class NotPositiveDefinite : public Error {
 public:
  NotPositiveDefinite(const std::string& what, double min_eigenvalue)
      : Error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

class EigenNonConvergence : public Error {
 public:
  EigenNonConvergence(const std::string& what, long iterations)
      : Error(what), iterations_(iterations) {}
  long iterations() const { return iterations_; }

 private:
  long iterations_;
};

class SylvesterSingular : public Error {
 public:
  SylvesterSingular(const std::string& what, double pivot)
      : Error(what), pivot_(pivot) {}
  double pivot() const { return pivot_; }

 private:
  double pivot_;
};

class SafeguardFailed : public Error {
 public:
  SafeguardFailed(const std::string& what, double min_eigenvalue)
      : Error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

class NewtonStalled : public Error {
 public:
  NewtonStalled(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class GenerationFailed : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent input data (dimension mismatch, disconnected
/// graph, ids out of range, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Text input that could not be parsed. `line()` is 1-based.
class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : DataError(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

}  // namespace lapnet
