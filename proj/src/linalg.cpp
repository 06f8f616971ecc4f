#include "gkslkit/linalg.hpp"

#include <algorithm>

#include "gkslkit/kernels.hpp"

namespace gkslkit::linalg {

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matmul: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  if (c.size() == 0) return c;
  if (a.cols() == 0) {
    c.setZero();
    return c;
  }
  kernels::active().gemm(static_cast<std::size_t>(a.rows()), static_cast<std::size_t>(b.cols()),
                         static_cast<std::size_t>(a.cols()), a.data(), b.data(), c.data());
  return c;
}

Vector matvec(const Matrix& a, const Vector& x) {
  if (a.cols() != x.size()) throw DimensionError("matvec: dimension mismatch");
  Vector y(a.rows());
  if (y.size() == 0) return y;
  if (a.cols() == 0) {
    y.setZero();
    return y;
  }
  kernels::active().gemm(static_cast<std::size_t>(a.rows()), 1, static_cast<std::size_t>(a.cols()), a.data(),
                         x.data(), y.data());
  return y;
}

cplx dotc(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("dotc: shape mismatch");
  return kernels::active().dotc(static_cast<std::size_t>(a.size()), a.data(), b.data());
}

double frobenius_norm(const Matrix& a) {
  return std::sqrt(kernels::active().norm_sq(static_cast<std::size_t>(a.size()), a.data()));
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

Vector vec(const Matrix& x) {
  Vector v(x.size());
  for (Eigen::Index h = 0; h < x.cols(); ++h) {
    for (Eigen::Index k = 0; k < x.rows(); ++k) v(h * x.rows() + k) = x(k, h);
  }
  return v;
}

Matrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) throw DimensionError("unvec: length does not match shape");
  Matrix x(rows, cols);
  for (Eigen::Index h = 0; h < cols; ++h) {
    for (Eigen::Index k = 0; k < rows; ++k) x(k, h) = v(h * rows + k);
  }
  return x;
}

Vector choi_vec(const Matrix& x) {
  // Row-major storage already matches the grouping.
  return Eigen::Map<const Vector>(x.data(), x.size());
}

Matrix choi_unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) throw DimensionError("choi_unvec: length does not match shape");
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

Matrix hermitian_part(const Matrix& a) { return (a + a.adjoint()) * 0.5; }

RealVector hermitian_eigenvalues(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("hermitian_eigenvalues: matrix is not square");
  if (a.rows() == 0) return RealVector();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(hermitian_part(a)), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

HermitianEigen hermitian_eigen(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("hermitian_eigen: matrix is not square");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(hermitian_part(a)));
  return {es.eigenvalues(), Matrix(es.eigenvectors())};
}

RealVector singular_values(const Matrix& a) {
  if (a.size() == 0) return RealVector();
  const Eigen::MatrixXcd col = a;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(col);
  return svd.singularValues();
}

double spectral_norm(const Matrix& a) {
  const RealVector s = singular_values(a);
  return s.size() == 0 ? 0.0 : s(0);
}

Matrix power(const Matrix& a, long long n) {
  if (a.rows() != a.cols()) throw DimensionError("power: matrix is not square");
  if (n < 0) throw std::invalid_argument("power: negative exponent");
  Matrix result = identity(a.rows());
  Matrix base = a;
  bool first = true;
  while (n > 0) {
    if (n & 1) {
      result = first ? base : matmul(result, base);
      first = false;
    }
    n >>= 1;
    if (n > 0) base = matmul(base, base);
  }
  return result;
}

double norm1(const Matrix& a) {
  double best = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) best = std::max(best, a.col(j).cwiseAbs().sum());
  return best;
}

}  // namespace gkslkit::linalg
