#pragma once

// Nested truncations H_1 < H_2 < ... of an ambient space, used to exhibit the
// approximation-by-truncation argument for separable spaces at desk scale.
// Compressed objects keep ambient shape (zero-padded outside H_n).

#include <variant>
#include <vector>

#include "gkslkit/gksl.hpp"

namespace gkslkit {

class Filtration {
 public:
  /// dims strictly increasing, each in [1, ambient_dim]; basis columns orthonormal.
  Filtration(Eigen::Index ambient_dim, std::vector<Eigen::Index> dims, Matrix basis);
  /// Standard basis.
  Filtration(Eigen::Index ambient_dim, std::vector<Eigen::Index> dims);

  Eigen::Index ambient_dim() const noexcept { return ambient_; }
  const std::vector<Eigen::Index>& dims() const noexcept { return dims_; }
  const Matrix& basis() const noexcept { return basis_; }
  bool contains(Eigen::Index n) const noexcept;

  /// Orthoprojector P_n onto the span of the first n basis vectors.
  Operator projector(Eigen::Index n) const;
  /// First n basis vectors as columns (ambient x n).
  Matrix isometry(Eigen::Index n) const;

 private:
  Eigen::Index ambient_;
  std::vector<Eigen::Index> dims_;
  Matrix basis_;
};

/// P [.] P. Throws NotProjectionError unless P is hermitian and idempotent.
SuperOperator lift_projection(const Operator& p, const Tolerance& tol = {});

/// P^_n Gamma P^_n, kept at ambient shape.
SuperOperator compress(const SuperOperator& gamma, const Filtration& f, Eigen::Index n);
/// P_n A P_n.
Operator compress(const Operator& a, const Filtration& f, Eigen::Index n);

/// Gamma restricted to L(H_n), expressed in the first n basis vectors (n x n operators).
SuperOperator restrict_to(const SuperOperator& gamma, const Filtration& f, Eigen::Index n);

struct TruncationRow {
  Eigen::Index n = 0;
  double error = 0.0;   // ||exp(t L_n) P^_n rho - exp(t L) rho||_1
  bool cp = false;      // exp(t L_n) o P^_n passes is_cp
  double cp_min_eigenvalue = 0.0;
};

/// Throws NotDcpError unless the full generator is dCP.
std::vector<TruncationRow> truncation_study(const SuperOperator& generator, const Filtration& f, double t,
                                            const Operator& rho, const Tolerance& tol = {});

/// Items indexed by filtration dimension; each value must be invariant under
/// its own compression.
template <typename T>
struct AdaptedSequence {
  struct Item {
    Eigen::Index n;
    T value;
  };
  std::vector<Item> items;
};

template <typename T>
struct Reconstruction {
  T limit;
  double max_consistency_defect = 0.0;  // max_n ||compress(limit, n) - value_n||_F
  std::vector<double> norms;
};

/// Operator norm for operators; HS-induced (2 -> 2) norm for superoperators.
double sequence_norm(const Operator& a);
double sequence_norm(const SuperOperator& a);

/// Returns the last element as the limit after checking adaptedness,
/// projectivity (compress(value_m, n) = value_n for n <= m) and the norm
/// bound. Throws NotProjectiveError or NormBoundViolatedError.
Reconstruction<Operator> projective_reconstruction(const AdaptedSequence<Operator>& seq, const Filtration& f,
                                                   double norm_bound, const Tolerance& tol = {});
Reconstruction<SuperOperator> projective_reconstruction(const AdaptedSequence<SuperOperator>& seq,
                                                        const Filtration& f, double norm_bound,
                                                        const Tolerance& tol = {});

/// A_n = diag(1, 2, ..., n, 0, ..., 0): projective, with ||A_n|| = n unbounded.
AdaptedSequence<Operator> diverging_diagonal_sequence(const Filtration& f);

}  // namespace gkslkit
