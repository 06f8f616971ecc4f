#include "gkslkit/superoperator.hpp"

#include <algorithm>

#include "gkslkit/linalg.hpp"

namespace gkslkit {
namespace {

// Column-stacked position of entry (r, c) in an operator of the given shape.
inline Eigen::Index cs_index(const OpShape& s, Eigen::Index r, Eigen::Index c) { return c * s.rows + r; }

Matrix choi_from_matrix(const OpShape& in, const OpShape& out, const Matrix& m) {
  // C[(a, c), (b, d)] = T[a, b; c, d] = m[b * out.rows + a, d * in.rows + c]
  Matrix choi(out.rows * in.rows, out.cols * in.cols);
  for (Eigen::Index a = 0; a < out.rows; ++a) {
    for (Eigen::Index c = 0; c < in.rows; ++c) {
      const Eigen::Index row = a * in.rows + c;
      for (Eigen::Index b = 0; b < out.cols; ++b) {
        for (Eigen::Index d = 0; d < in.cols; ++d) {
          choi(row, b * in.cols + d) = m(cs_index(out, a, b), cs_index(in, c, d));
        }
      }
    }
  }
  return choi;
}

Matrix matrix_from_choi(const OpShape& in, const OpShape& out, const Matrix& choi) {
  Matrix m(out.size(), in.size());
  for (Eigen::Index a = 0; a < out.rows; ++a) {
    for (Eigen::Index c = 0; c < in.rows; ++c) {
      const Eigen::Index row = a * in.rows + c;
      for (Eigen::Index b = 0; b < out.cols; ++b) {
        for (Eigen::Index d = 0; d < in.cols; ++d) {
          m(cs_index(out, a, b), cs_index(in, c, d)) = choi(row, b * in.cols + d);
        }
      }
    }
  }
  return m;
}

}  // namespace

SuperOperator::SuperOperator(OpShape in, OpShape out, Matrix matrix) : in_(in), out_(out), m_(std::move(matrix)) {
  if (in_.rows < 1 || in_.cols < 1 || out_.rows < 1 || out_.cols < 1) {
    throw DimensionError("superoperator shapes must be positive");
  }
  if (m_.rows() != out_.size() || m_.cols() != in_.size()) {
    throw DimensionError("superoperator matrix does not match the declared shapes");
  }
  choi_ = choi_from_matrix(in_, out_, m_);
}

SuperOperator::SuperOperator(Eigen::Index dim_in, Eigen::Index dim_out, Matrix matrix)
    : SuperOperator(OpShape{dim_in, dim_in}, OpShape{dim_out, dim_out}, std::move(matrix)) {}

SuperOperator SuperOperator::identity(Eigen::Index d) { return SuperOperator(d, d, linalg::identity(d * d)); }

SuperOperator SuperOperator::zero(Eigen::Index dim_in, Eigen::Index dim_out) {
  return SuperOperator(dim_in, dim_out, Matrix::Zero(dim_out * dim_out, dim_in * dim_in));
}

SuperOperator SuperOperator::trace_to_identity(Eigen::Index d) {
  const Vector v = linalg::vec(linalg::identity(d));
  return SuperOperator(d, d, v * v.adjoint());
}

Operator SuperOperator::apply(const Operator& x) const {
  if (x.dim_out() != in_.rows || x.dim_in() != in_.cols) throw DimensionError("apply: operator shape mismatch");
  const Vector y = linalg::matvec(m_, linalg::vec(x.matrix()));
  return Operator(linalg::unvec(y, out_.rows, out_.cols));
}

SuperOperator SuperOperator::adjoint() const { return SuperOperator(out_, in_, m_.adjoint()); }

SuperOperator& SuperOperator::operator+=(const SuperOperator& o) {
  if (!same_shapes(*this, o)) throw DimensionError("superoperator sum: shape mismatch");
  m_ += o.m_;
  choi_ += o.choi_;
  return *this;
}

SuperOperator& SuperOperator::operator-=(const SuperOperator& o) {
  if (!same_shapes(*this, o)) throw DimensionError("superoperator difference: shape mismatch");
  m_ -= o.m_;
  choi_ -= o.choi_;
  return *this;
}

SuperOperator& SuperOperator::operator*=(cplx s) {
  m_ *= s;
  choi_ *= s;
  return *this;
}

SuperOperator operator+(SuperOperator a, const SuperOperator& b) { return a += b; }
SuperOperator operator-(SuperOperator a, const SuperOperator& b) { return a -= b; }
SuperOperator operator-(const SuperOperator& a) { return cplx(-1.0, 0.0) * a; }
SuperOperator operator*(cplx s, SuperOperator a) { return a *= s; }
SuperOperator operator*(SuperOperator a, cplx s) { return a *= s; }

SuperOperator compose(const SuperOperator& outer, const SuperOperator& inner) {
  if (!(outer.in_shape() == inner.out_shape())) throw DimensionError("compose: shapes are not composable");
  return SuperOperator(inner.in_shape(), outer.out_shape(), linalg::matmul(outer.matrix(), inner.matrix()));
}

SuperOperator operator*(const SuperOperator& a, const SuperOperator& b) { return compose(a, b); }

bool same_shapes(const SuperOperator& a, const SuperOperator& b) noexcept {
  return a.in_shape() == b.in_shape() && a.out_shape() == b.out_shape();
}

cplx hs_inner(const SuperOperator& a, const SuperOperator& b) {
  if (!same_shapes(a, b)) throw DimensionError("hs_inner: superoperator shape mismatch");
  return linalg::dotc(a.matrix(), b.matrix());
}

double frobenius_norm(const SuperOperator& a) { return linalg::frobenius_norm(a.matrix()); }

double distance(const SuperOperator& a, const SuperOperator& b) {
  if (!same_shapes(a, b)) throw DimensionError("distance: superoperator shape mismatch");
  return linalg::frobenius_norm(a.matrix() - b.matrix());
}

ChoiMatrix::ChoiMatrix(Eigen::Index dim_in, Eigen::Index dim_out, Matrix matrix)
    : dim_in_(dim_in), dim_out_(dim_out), m_(std::move(matrix)) {
  if (dim_in_ < 1 || dim_out_ < 1) throw DimensionError("Choi matrix dimensions must be positive");
  if (m_.rows() != dim_in_ * dim_out_ || m_.cols() != dim_in_ * dim_out_) {
    throw DimensionError("Choi matrix shape inconsistent with dimensions");
  }
}

cplx ChoiMatrix::quadratic_form(const Operator& t) const {
  if (t.dim_out() != dim_out_ || t.dim_in() != dim_in_) throw DimensionError("quadratic_form: operator shape mismatch");
  const Vector v = linalg::choi_vec(t.matrix());
  return v.dot(linalg::matvec(m_, v));
}

SuperOperator sandwich(const Operator& s, const Operator& t) {
  // X: s.dim_in x t.dim_out  ->  S X T: s.dim_out x t.dim_in
  const OpShape in{s.dim_in(), t.dim_out()};
  const OpShape out{s.dim_out(), t.dim_in()};
  return SuperOperator(in, out, linalg::kron(t.matrix().transpose(), s.matrix()));
}

ChoiMatrix jamiolkowski(const SuperOperator& map) {
  if (!map.acts_on_square()) throw DimensionError("jamiolkowski: map must act between square operators");
  return ChoiMatrix(map.dim_in(), map.dim_out(), map.choi());
}

SuperOperator jamiolkowski_inv(const ChoiMatrix& choi) {
  const OpShape in{choi.dim_in(), choi.dim_in()};
  const OpShape out{choi.dim_out(), choi.dim_out()};
  return SuperOperator(in, out, matrix_from_choi(in, out, choi.matrix()));
}

SuperOperator jamiolkowski_transform(const SuperOperator& map) {
  // T'[a, c; b, d] = T[a, b; c, d]
  const OpShape in = map.in_shape();
  const OpShape out = map.out_shape();
  const OpShape new_out{out.rows, in.rows};
  const OpShape new_in{out.cols, in.cols};
  const Matrix& m = map.matrix();
  Matrix t(new_out.size(), new_in.size());
  for (Eigen::Index a = 0; a < out.rows; ++a) {
    for (Eigen::Index b = 0; b < out.cols; ++b) {
      for (Eigen::Index c = 0; c < in.rows; ++c) {
        for (Eigen::Index d = 0; d < in.cols; ++d) {
          t(cs_index(new_out, a, c), cs_index(new_in, b, d)) = m(cs_index(out, a, b), cs_index(in, c, d));
        }
      }
    }
  }
  return SuperOperator(new_in, new_out, std::move(t));
}

SuperOperator tensor(const SuperOperator& x, const SuperOperator& y) {
  const OpShape xi = x.in_shape(), xo = x.out_shape(), yi = y.in_shape(), yo = y.out_shape();
  const OpShape in{xi.rows * yi.rows, xi.cols * yi.cols};
  const OpShape out{xo.rows * yo.rows, xo.cols * yo.cols};
  Matrix m = Matrix::Zero(out.size(), in.size());
  const Matrix& mx = x.matrix();
  const Matrix& my = y.matrix();
  for (Eigen::Index a1 = 0; a1 < xo.rows; ++a1)
    for (Eigen::Index b1 = 0; b1 < xo.cols; ++b1)
      for (Eigen::Index c1 = 0; c1 < xi.rows; ++c1)
        for (Eigen::Index d1 = 0; d1 < xi.cols; ++d1) {
          const cplx vx = mx(cs_index(xo, a1, b1), cs_index(xi, c1, d1));
          if (vx == cplx(0.0, 0.0)) continue;
          for (Eigen::Index a2 = 0; a2 < yo.rows; ++a2)
            for (Eigen::Index b2 = 0; b2 < yo.cols; ++b2)
              for (Eigen::Index c2 = 0; c2 < yi.rows; ++c2)
                for (Eigen::Index d2 = 0; d2 < yi.cols; ++d2) {
                  const cplx vy = my(cs_index(yo, a2, b2), cs_index(yi, c2, d2));
                  if (vy == cplx(0.0, 0.0)) continue;
                  const Eigen::Index r = cs_index(out, a1 * yo.rows + a2, b1 * yo.cols + b2);
                  const Eigen::Index c = cs_index(in, c1 * yi.rows + c2, d1 * yi.cols + d2);
                  m(r, c) = vx * vy;
                }
        }
  return SuperOperator(in, out, std::move(m));
}

SuperOperator tensor_with_identity(const SuperOperator& map, Eigen::Index n) {
  if (n < 1) throw std::invalid_argument("tensor_with_identity: N must be at least 1");
  return tensor(map, SuperOperator::identity(n));
}

cplx choi_quadratic_form(const SuperOperator& map, const Operator& t) { return jamiolkowski(map).quadratic_form(t); }

SuperOperator transpose_map(Eigen::Index d) {
  Matrix m = Matrix::Zero(d * d, d * d);
  // vec(X^T)[h * d + k] = X(h, k) = vec(X)[k * d + h]
  for (Eigen::Index k = 0; k < d; ++k) {
    for (Eigen::Index h = 0; h < d; ++h) m(h * d + k, k * d + h) = 1.0;
  }
  return SuperOperator(d, d, std::move(m));
}

bool is_dag_morphism(const SuperOperator& map, const Tolerance& tol) {
  return map.acts_on_square() && is_hermitian(map.choi(), tol);
}

double dag_morphism_sampled_defect(const SuperOperator& map, int samples, std::uint64_t seed) {
  if (!map.acts_on_square()) throw DimensionError("dag-morphism check needs square operator spaces");
  Rng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Operator a = random_ginibre(map.dim_in(), map.dim_in(), rng);
    const Operator lhs = map.apply(a.dagger());
    const Operator rhs = map.apply(a).dagger();
    worst = std::max(worst, frobenius_norm(lhs - rhs) / std::max(1.0, frobenius_norm(rhs)));
  }
  return worst;
}

CpVerdict is_cp(const SuperOperator& map, const Tolerance& tol) {
  if (!map.acts_on_square()) throw DimensionError("is_cp: map must act between square operators");
  const PsdResult r = psd_check(map.choi(), tol);
  return {r.psd, r.min_eigenvalue};
}

}  // namespace gkslkit
