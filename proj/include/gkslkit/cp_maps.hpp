#pragma once

#include <span>
#include <vector>

#include "gkslkit/superoperator.hpp"

namespace gkslkit {

/// Operators A_n presenting a CP map as sum_n A_n X A_n^dagger.
struct KrausFamily {
  std::vector<Operator> operators;
  /// Set by extraction when two retained Choi eigenvalues are closer than
  /// rtol * lambda_max; the basis inside such an eigenspace is solver-dependent.
  bool degenerate_spectrum = false;
};

/// Kraus operators from the spectral decomposition of the Choi matrix.
/// Eigenvalues below rtol * lambda_max are dropped. Output is ordered by
/// eigenvalue (descending) and each operator's largest-modulus entry is made
/// real positive (ties go to the lowest row-major index).
/// Throws NotCpError when the Choi matrix is not PSD within tol.
KrausFamily kraus_extract(const SuperOperator& map, const Tolerance& tol = {});

/// sum_n A_n [.] A_n^dagger.
SuperOperator kraus_assemble(const KrausFamily& family);
SuperOperator kraus_assemble(std::span<const Operator> ops);

/// Block form of a CP map's Choi matrix relative to C Id (+) traceless:
///   J(Lambda) = Theta + |Id><A| + |A><Id|,   A = B + (c/2) Id.
/// B is the traceless part of J(Lambda)|Id>/d, Theta is supported on the
/// traceless subspace. The sign and scaling of B follow from these formulas.
struct IntermediateForm {
  Matrix theta;    // Choi-space block, (d^2 x d^2)
  Operator a_op;   // B + (c/2) Id
  Operator b;      // traceless
  double c = 0.0;  // <Id|J(Lambda)|Id> / d^2

  /// Theta + |Id><A| + |A><Id| in the Choi grouping.
  Matrix reconstruct_choi() const;
};

IntermediateForm intermediate_form(const SuperOperator& map, const Tolerance& tol = {});

/// Orthogonal projector onto the traceless subspace of L(C^d), acting on
/// row-major vectorised operators.
Matrix traceless_projector(Eigen::Index d);

struct ClosureReport {
  bool inputs_cp = false;
  bool conic_combinations_cp = true;  // every sampled a*Lambda + b*Gamma
  double worst_conic_min_eigenvalue = 0.0;
  bool composition_cp = false;        // Gamma o Lambda
  std::optional<bool> limit_cp;       // last element of the supplied sequence
  int samples = 0;
};

/// Exercises closure of the CP cone on a concrete pair: nonnegative
/// combinations, composition, and (when a sequence is given) its last element
/// as the numerical limit. If an input is not CP the other entries are still
/// reported; failures are then permitted rather than contradictions.
ClosureReport cp_closure_checks(const SuperOperator& lambda, const SuperOperator& gamma, std::uint64_t seed,
                                int samples = 16, std::span<const SuperOperator> sequence = {},
                                const Tolerance& tol = {});

}  // namespace gkslkit
