#pragma once

// Dense helpers shared by every module. Matrix products and reductions route
// through the runtime-selected kernels; decompositions come from Eigen.

#include "gkslkit/types.hpp"

namespace gkslkit::linalg {

Matrix matmul(const Matrix& a, const Matrix& b);
Vector matvec(const Matrix& a, const Vector& x);

/// sum conj(a_ij) b_ij
cplx dotc(const Matrix& a, const Matrix& b);
double frobenius_norm(const Matrix& a);

Matrix kron(const Matrix& a, const Matrix& b);
Matrix identity(Eigen::Index n);

// Superoperator side: column stacking, vec(X)[h * rows + k] = X(k, h).
Vector vec(const Matrix& x);
Matrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols);

// Choi side: row-major grouping, vec(X)[m * cols + k] = X(m, k).
Vector choi_vec(const Matrix& x);
Matrix choi_unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols);

Matrix hermitian_part(const Matrix& a);

/// Eigenvalues (ascending) of the hermitian part of a square matrix.
RealVector hermitian_eigenvalues(const Matrix& a);

struct HermitianEigen {
  RealVector values;  // ascending
  Matrix vectors;     // columns
};
HermitianEigen hermitian_eigen(const Matrix& a);

RealVector singular_values(const Matrix& a);
double spectral_norm(const Matrix& a);

/// Raise a square matrix to a nonnegative integer power by repeated squaring.
Matrix power(const Matrix& a, long long n);

/// exp(a) by scaling and squaring around a diagonal Pade approximant of degree
/// 3, 5, 7, 9 or 13, chosen from the 1-norm.
Matrix expm(const Matrix& a);

double norm1(const Matrix& a);

}  // namespace gkslkit::linalg
