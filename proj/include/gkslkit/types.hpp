#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace gkslkit {

using cplx = std::complex<double>;

// Dense storage is row-major throughout; the kernels rely on it.
using Matrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;
using RealVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

/// Relative and absolute tolerances shared by every decision procedure.
struct Tolerance {
  double rtol = 1e-9;
  double atol = 1e-12;

  /// Throws std::invalid_argument unless both values are finite and nonnegative.
  void validate() const;
};

// Error hierarchy. Everything thrown by the library derives from Error.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class NotCpError : public Error {
 public:
  NotCpError(const std::string& what, double min_eigenvalue)
      : Error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

class NotDcpError : public Error {
 public:
  NotDcpError(const std::string& what, double compressed_min_eigenvalue)
      : Error(what), compressed_min_eigenvalue_(compressed_min_eigenvalue) {}
  double compressed_min_eigenvalue() const noexcept { return compressed_min_eigenvalue_; }

 private:
  double compressed_min_eigenvalue_;
};

class NonHermitianChoiError : public Error {
 public:
  using Error::Error;
};

class NotHermitianError : public Error {
 public:
  using Error::Error;
};

class NotMinimalError : public Error {
 public:
  using Error::Error;
};

class NotProjectionError : public Error {
 public:
  using Error::Error;
};

class NotProjectiveError : public Error {
 public:
  using Error::Error;
};

class NormBoundViolatedError : public Error {
 public:
  NormBoundViolatedError(const std::string& what, int n, double norm)
      : Error(what), n_(n), norm_(norm) {}
  int n() const noexcept { return n_; }
  double norm() const noexcept { return norm_; }

 private:
  int n_;
  double norm_;
};

class TimeMismatchError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace gkslkit
