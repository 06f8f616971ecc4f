#include "gkslkit/operator.hpp"

#include <algorithm>

#include "gkslkit/linalg.hpp"

namespace gkslkit {

void Tolerance::validate() const {
  if (!std::isfinite(rtol) || !std::isfinite(atol) || rtol < 0.0 || atol < 0.0) {
    throw std::invalid_argument("tolerances must be finite and nonnegative");
  }
}

Operator::Operator(Matrix entries) : m_(std::move(entries)) {
  if (m_.rows() < 1 || m_.cols() < 1) throw DimensionError("operator dimensions must be positive");
}

Operator::Operator(Eigen::Index dim_out, Eigen::Index dim_in) : Operator(Matrix::Zero(dim_out, dim_in)) {}

Operator Operator::identity(Eigen::Index d) { return Operator(linalg::identity(d)); }

Operator Operator::zero(Eigen::Index dim_out, Eigen::Index dim_in) { return Operator(dim_out, dim_in); }

Operator Operator::dyad(Eigen::Index dim_out, Eigen::Index dim_in, Eigen::Index k, Eigen::Index h) {
  Matrix m = Matrix::Zero(dim_out, dim_in);
  m(k, h) = 1.0;
  return Operator(std::move(m));
}

Operator Operator::ket_bra(const Vector& ket, const Vector& bra) { return Operator(ket * bra.adjoint()); }

Operator Operator::diagonal(const RealVector& diag) {
  Matrix m = Matrix::Zero(diag.size(), diag.size());
  for (Eigen::Index i = 0; i < diag.size(); ++i) m(i, i) = diag(i);
  return Operator(std::move(m));
}

cplx Operator::trace() const {
  if (!is_square()) throw DimensionError("trace of a non-square operator");
  return m_.trace();
}

Operator& Operator::operator+=(const Operator& o) {
  if (!same_dims(*this, o)) throw DimensionError("operator sum: dimension mismatch");
  m_ += o.m_;
  return *this;
}

Operator& Operator::operator-=(const Operator& o) {
  if (!same_dims(*this, o)) throw DimensionError("operator difference: dimension mismatch");
  m_ -= o.m_;
  return *this;
}

Operator& Operator::operator*=(cplx s) {
  m_ *= s;
  return *this;
}

Operator operator+(Operator a, const Operator& b) { return a += b; }
Operator operator-(Operator a, const Operator& b) { return a -= b; }
Operator operator-(const Operator& a) { return Operator(-a.matrix()); }
Operator operator*(cplx s, Operator a) { return a *= s; }
Operator operator*(Operator a, cplx s) { return a *= s; }
Operator operator*(const Operator& a, const Operator& b) {
  if (a.dim_in() != b.dim_out()) throw DimensionError("operator product: dimension mismatch");
  return Operator(linalg::matmul(a.matrix(), b.matrix()));
}

bool same_dims(const Operator& a, const Operator& b) noexcept {
  return a.dim_in() == b.dim_in() && a.dim_out() == b.dim_out();
}

cplx hs_inner(const Operator& a, const Operator& b) {
  if (!same_dims(a, b)) throw DimensionError("hs_inner: dimension mismatch");
  return linalg::dotc(a.matrix(), b.matrix());
}

double frobenius_norm(const Operator& a) { return linalg::frobenius_norm(a.matrix()); }

bool is_hermitian(const Matrix& a, const Tolerance& tol) {
  if (a.rows() != a.cols()) return false;
  const Matrix diff = a - a.adjoint();
  return linalg::frobenius_norm(diff) <= tol.rtol * std::max(1.0, linalg::frobenius_norm(a));
}

bool is_hermitian(const Operator& a, const Tolerance& tol) { return is_hermitian(a.matrix(), tol); }

PsdResult psd_check(const Matrix& a, const Tolerance& tol) {
  if (a.rows() != a.cols()) throw DimensionError("positivity test needs a square matrix");
  PsdResult r;
  r.hermitian = is_hermitian(a, tol);
  const RealVector ev = linalg::hermitian_eigenvalues(a);
  r.min_eigenvalue = ev(0);
  r.max_eigenvalue = ev(ev.size() - 1);
  r.psd = r.hermitian && r.min_eigenvalue >= -tol.rtol * std::max(1.0, r.max_eigenvalue);
  return r;
}

PsdResult is_positive_semidefinite(const Operator& a, const Tolerance& tol) { return psd_check(a.matrix(), tol); }

HermitianSplit hermitian_split(const Operator& a) {
  if (!a.is_square()) throw DimensionError("hermitian_split: operator is not square");
  const Matrix& m = a.matrix();
  return {Operator((m + m.adjoint()) * 0.5), Operator((m - m.adjoint()) * cplx(0.0, -0.5))};
}

Operator traceless_projection(const Operator& a) {
  if (!a.is_square()) throw DimensionError("traceless_projection: operator is not square");
  const auto d = static_cast<double>(a.dim_in());
  Matrix m = a.matrix();
  m.diagonal().array() -= a.trace() / d;
  return Operator(std::move(m));
}

double trace_norm(const Operator& a) { return linalg::singular_values(a.matrix()).sum(); }

double operator_norm(const Operator& a) { return linalg::spectral_norm(a.matrix()); }

Operator random_ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = cplx(re, im);
    }
  }
  return Operator(std::move(m));
}

Operator random_haar_unitary(int d, Rng& rng) {
  if (d < 1) throw std::invalid_argument("random_haar_unitary: dimension must be at least 1");
  const Eigen::MatrixXcd z = random_ginibre(d, d, rng).matrix();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    const cplx rjj = r(j, j);
    const double mag = std::abs(rjj);
    const cplx phase = mag > 0.0 ? rjj / mag : cplx(1.0, 0.0);
    q.col(j) *= phase;
  }
  return Operator(Matrix(q));
}

Operator random_haar_unitary(int d, std::uint64_t seed) {
  Rng rng(seed);
  return random_haar_unitary(d, rng);
}

Operator random_hermitian(Eigen::Index d, Rng& rng) {
  const Matrix g = random_ginibre(d, d, rng).matrix();
  return Operator((g + g.adjoint()) * 0.5);
}

Operator random_density_matrix(Eigen::Index d, Rng& rng, Eigen::Index rank) {
  if (rank < 1 || rank > d) rank = d;
  const Matrix g = random_ginibre(d, rank, rng).matrix();
  Matrix rho = linalg::matmul(g, g.adjoint());
  rho /= rho.trace();
  return Operator(linalg::hermitian_part(rho));
}

Vector random_unit_vector(Eigen::Index d, Rng& rng) {
  const Matrix g = random_ginibre(d, 1, rng).matrix();
  Vector v = g.col(0);
  return v / v.norm();
}

}  // namespace gkslkit
