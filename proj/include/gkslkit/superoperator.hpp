#pragma once

// Superoperator calculus.
//
// Conventions (fixed, tested against each other):
//  * A superoperator maps operators of shape in = (rows, cols) to operators of
//    shape out. Its matrix acts on column-stacked operators:
//        vec(X)[h * rows + k] = X(k, h),
//    so the basis dyad E_kh of a d-dimensional space sits at index h * d + k.
//  * The Jamiolkowski (Choi) matrix of a map L(H) -> L(K) has entries
//        C[(m, k), (n, h)] = [Lambda(E_kh)]_mn,   (m, k) -> m * d_H + k,
//    i.e. it acts on operators in L(H, K) vectorised row-major.
//  * In four-index form T[a, b; c, d] = <E_ab, Lambda(E_cd)>, the transform
//    swaps the two middle indices, which makes it an involution on the space
//    of all superoperators.

#include <optional>
#include <vector>

#include "gkslkit/operator.hpp"

namespace gkslkit {

struct OpShape {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;

  Eigen::Index size() const noexcept { return rows * cols; }
  bool square() const noexcept { return rows == cols; }
  friend bool operator==(const OpShape&, const OpShape&) = default;
};

class ChoiMatrix;

class SuperOperator {
 public:
  SuperOperator(OpShape in, OpShape out, Matrix matrix);
  /// Map L(C^dim_in) -> L(C^dim_out).
  SuperOperator(Eigen::Index dim_in, Eigen::Index dim_out, Matrix matrix);

  static SuperOperator identity(Eigen::Index d);
  static SuperOperator zero(Eigen::Index dim_in, Eigen::Index dim_out);
  /// rho -> Tr(rho) Id; its Choi matrix is the identity.
  static SuperOperator trace_to_identity(Eigen::Index d);

  OpShape in_shape() const noexcept { return in_; }
  OpShape out_shape() const noexcept { return out_; }
  /// Hilbert-space dimensions; only meaningful for maps between square operators.
  Eigen::Index dim_in() const noexcept { return in_.rows; }
  Eigen::Index dim_out() const noexcept { return out_.rows; }
  bool acts_on_square() const noexcept { return in_.square() && out_.square(); }
  bool is_endomorphism() const noexcept { return acts_on_square() && in_ == out_; }

  const Matrix& matrix() const noexcept { return m_; }
  /// Jamiolkowski matrix in the row-major grouping, computed at construction.
  const Matrix& choi() const noexcept { return choi_; }

  Operator apply(const Operator& x) const;
  /// Hilbert-Schmidt adjoint.
  SuperOperator adjoint() const;

  SuperOperator& operator+=(const SuperOperator& o);
  SuperOperator& operator-=(const SuperOperator& o);
  SuperOperator& operator*=(cplx s);

 private:
  OpShape in_;
  OpShape out_;
  Matrix m_;
  Matrix choi_;
};

SuperOperator operator+(SuperOperator a, const SuperOperator& b);
SuperOperator operator-(SuperOperator a, const SuperOperator& b);
SuperOperator operator-(const SuperOperator& a);
SuperOperator operator*(cplx s, SuperOperator a);
SuperOperator operator*(SuperOperator a, cplx s);
/// Composition: (a * b)(X) = a(b(X)).
SuperOperator operator*(const SuperOperator& a, const SuperOperator& b);
SuperOperator compose(const SuperOperator& outer, const SuperOperator& inner);

bool same_shapes(const SuperOperator& a, const SuperOperator& b) noexcept;
cplx hs_inner(const SuperOperator& a, const SuperOperator& b);
double frobenius_norm(const SuperOperator& a);
double distance(const SuperOperator& a, const SuperOperator& b);

/// Matrix of a map L(H) -> L(K) in the Choi grouping described above.
class ChoiMatrix {
 public:
  ChoiMatrix(Eigen::Index dim_in, Eigen::Index dim_out, Matrix matrix);

  Eigen::Index dim_in() const noexcept { return dim_in_; }
  Eigen::Index dim_out() const noexcept { return dim_out_; }
  const Matrix& matrix() const noexcept { return m_; }

  /// <T | C | T> for T in L(H, K), i.e. T of shape dim_out x dim_in.
  cplx quadratic_form(const Operator& t) const;

 private:
  Eigen::Index dim_in_;
  Eigen::Index dim_out_;
  Matrix m_;
};

/// X -> S X T.
SuperOperator sandwich(const Operator& s, const Operator& t);

ChoiMatrix jamiolkowski(const SuperOperator& map);
SuperOperator jamiolkowski_inv(const ChoiMatrix& choi);

/// The transform on arbitrary superoperators, L(L(H,K), L(M,N)) -> L(L(H,M), L(K,N)).
/// Applying it twice returns the input exactly.
SuperOperator jamiolkowski_transform(const SuperOperator& map);

/// Lambda (x) Gamma acting on Kronecker products of operators.
SuperOperator tensor(const SuperOperator& a, const SuperOperator& b);
/// Lambda (x) Id on L(C^N); input rho (x) sigma maps to Lambda(rho) (x) sigma.
SuperOperator tensor_with_identity(const SuperOperator& map, Eigen::Index n);

/// <T, J(Lambda) T>: the quantity whose sign defines rank-N positivity.
cplx choi_quadratic_form(const SuperOperator& map, const Operator& t);

/// The transposition map X -> X^T on d x d matrices. Monotone but not CP.
SuperOperator transpose_map(Eigen::Index d);

// Classifiers.

/// Choi matrix hermitian within tol.
bool is_dag_morphism(const SuperOperator& map, const Tolerance& tol = {});

/// Largest ||Lambda(A^dagger) - Lambda(A)^dagger||_F / max(1, ||Lambda(A)||_F) over
/// random A. Independent cross-check of is_dag_morphism.
double dag_morphism_sampled_defect(const SuperOperator& map, int samples, std::uint64_t seed);

struct CpVerdict {
  bool cp = false;
  double choi_min_eigenvalue = 0.0;
};

/// Exact: Choi matrix positive semidefinite within tol.
CpVerdict is_cp(const SuperOperator& map, const Tolerance& tol = {});

}  // namespace gkslkit
