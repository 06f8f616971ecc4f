#pragma once

#include <cstdint>
#include <random>

#include "gkslkit/types.hpp"

namespace gkslkit {

/// A linear map between finite-dimensional Hilbert spaces, dim_in -> dim_out,
/// held as a dense dim_out x dim_in matrix.
class Operator {
 public:
  Operator() = default;
  explicit Operator(Matrix entries);
  Operator(Eigen::Index dim_out, Eigen::Index dim_in);  // zero operator

  static Operator identity(Eigen::Index d);
  static Operator zero(Eigen::Index dim_out, Eigen::Index dim_in);
  /// |k><h| in a d_out x d_in space.
  static Operator dyad(Eigen::Index dim_out, Eigen::Index dim_in, Eigen::Index k, Eigen::Index h);
  static Operator ket_bra(const Vector& ket, const Vector& bra);
  static Operator diagonal(const RealVector& diag);

  Eigen::Index dim_in() const noexcept { return m_.cols(); }
  Eigen::Index dim_out() const noexcept { return m_.rows(); }
  bool is_square() const noexcept { return m_.rows() == m_.cols(); }

  const Matrix& matrix() const noexcept { return m_; }
  cplx operator()(Eigen::Index r, Eigen::Index c) const { return m_(r, c); }

  Operator dagger() const { return Operator(m_.adjoint()); }
  cplx trace() const;

  Operator& operator+=(const Operator& o);
  Operator& operator-=(const Operator& o);
  Operator& operator*=(cplx s);

 private:
  Matrix m_;
};

Operator operator+(Operator a, const Operator& b);
Operator operator-(Operator a, const Operator& b);
Operator operator-(const Operator& a);
Operator operator*(cplx s, Operator a);
Operator operator*(Operator a, cplx s);
Operator operator*(const Operator& a, const Operator& b);

bool same_dims(const Operator& a, const Operator& b) noexcept;

/// Tr(A^dagger B).
cplx hs_inner(const Operator& a, const Operator& b);
double frobenius_norm(const Operator& a);

struct PsdResult {
  bool psd = false;
  bool hermitian = false;
  double min_eigenvalue = 0.0;  // of the hermitian part
  double max_eigenvalue = 0.0;
};

// The hermiticity gate and the eigenvalue threshold are both relative:
//   ||A - A^dagger||_F <= rtol * max(1, ||A||_F)
//   lambda_min(herm A) >= -rtol * max(1, lambda_max)
PsdResult psd_check(const Matrix& a, const Tolerance& tol = {});
PsdResult is_positive_semidefinite(const Operator& a, const Tolerance& tol = {});
bool is_hermitian(const Matrix& a, const Tolerance& tol = {});
bool is_hermitian(const Operator& a, const Tolerance& tol = {});

struct HermitianSplit {
  Operator hermitian_part;
  Operator antihermitian_coefficient;  // A = hermitian_part + i * antihermitian_coefficient
};

HermitianSplit hermitian_split(const Operator& a);
Operator traceless_projection(const Operator& a);
double trace_norm(const Operator& a);
double operator_norm(const Operator& a);

// Random sampling. Every sampler takes an explicit engine or seed.

using Rng = std::mt19937_64;

/// Haar-distributed unitary from the QR decomposition of a complex Ginibre
/// matrix, with the phases of R's diagonal moved into Q.
Operator random_haar_unitary(int d, Rng& rng);
Operator random_haar_unitary(int d, std::uint64_t seed);

/// i.i.d. standard complex Gaussian entries (E|z|^2 = 1).
Operator random_ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng);
Operator random_hermitian(Eigen::Index d, Rng& rng);
Operator random_density_matrix(Eigen::Index d, Rng& rng, Eigen::Index rank = -1);
Vector random_unit_vector(Eigen::Index d, Rng& rng);

}  // namespace gkslkit
