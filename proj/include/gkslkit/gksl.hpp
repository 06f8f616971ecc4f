#pragma once

// Generators of CP semigroups in the form
//     L(Psi, G, H) rho = Psi(rho) - (G rho + rho G) - i (H rho - rho H),
// Psi CP, G and H hermitian.

#include <optional>

#include "gkslkit/properties.hpp"

namespace gkslkit {

struct GkslPresentation {
  SuperOperator psi;
  Operator g;
  Operator h;
  /// Choi(psi) annihilates |Id> and Tr h = 0.
  bool minimal = false;
};

/// Builds L(Psi, G, H). Throws NotHermitianError for non-hermitian g or h and
/// NotCpError when psi is not CP.
SuperOperator assemble_generator(const GkslPresentation& p, const Tolerance& tol = {});

/// G [.] + [.] G
SuperOperator anticommutator(const Operator& g);
/// H [.] - [.] H
SuperOperator commutator(const Operator& h);

struct DcpVerdict {
  bool is_dag_morphism_generator = false;  // Choi hermitian
  double compressed_choi_min_eig = 0.0;    // of P0 Choi P0 on the traceless subspace
  bool is_dcp = false;
  std::optional<GkslPresentation> extracted;
};

/// Exact decision: the Choi matrix is hermitian and its compression to the
/// traceless subspace is PSD. On success the minimal presentation is attached.
DcpVerdict is_dcp(const SuperOperator& generator, const Tolerance& tol = {});

/// The unique minimal presentation. Throws NonHermitianChoiError when the Choi
/// matrix (or its trace part) is not hermitian, NotDcpError when the traceless
/// compression is indefinite.
GkslPresentation minimal_presentation(const SuperOperator& generator, const Tolerance& tol = {});

/// Checks the minimality conditions on an explicit presentation.
bool is_minimal(const GkslPresentation& p, const Tolerance& tol = {});

enum class TraceKind { preserving, nonincreasing, neither };
std::string_view to_string(TraceKind k) noexcept;

struct TraceCondition {
  TraceKind kind = TraceKind::neither;
  Operator defect;  // Psi^dagger(Id) - 2G
};

TraceCondition trace_condition(const GkslPresentation& p, const Tolerance& tol = {});

/// Average of U A U^dagger over the unitary group: (Tr A / d) Id.
Operator haar_conjugation_average(const Operator& a);

struct MonteCarloEstimate {
  Operator mean;
  Operator std_error;  // per entry, real and imaginary parts combined in quadrature
  /// sqrt(sum of squared per-entry standard errors); the natural scale for
  /// comparing ||mean - exact||_F.
  double aggregate_std_error = 0.0;
  int samples = 0;
};

MonteCarloEstimate haar_conjugation_average_mc(const Operator& a, int samples, std::uint64_t seed);

/// <L(U) U^dagger> over Haar U, computed in closed form from the Choi matrix:
/// unvec(J(L)|Id>) / d. Requires a minimal presentation of the same generator
/// (throws NotMinimalError otherwise).
Operator lindblad_trick_average(const SuperOperator& generator, const GkslPresentation& minimal,
                                const Tolerance& tol = {});

/// -G - (Tr G / d) Id - i H, the value the average takes for a minimal presentation.
Operator lindblad_trick_expected(const GkslPresentation& minimal);

MonteCarloEstimate lindblad_trick_average_mc(const SuperOperator& generator, int samples, std::uint64_t seed);

/// max ||L(X)||_1 over ||X||_1 <= 1, estimated from below by ascent over rank-one
/// X = v w^dagger (the extreme points of the trace-norm ball).
double induced_trace_norm_estimate(const SuperOperator& map, std::uint64_t seed, int restarts = 20,
                                   int steps = 100);

struct NormBoundsReport {
  double generator_norm_estimate = 0.0;  // lower bound on the 1->1 induced norm
  double g_norm = 0.0;                   // operator norms
  double h_norm = 0.0;
  double psi_norm_estimate = 0.0;        // same estimator as for the generator
  double slack = 1.05;
  bool g_bound = false;    // ||G|| <= slack * est
  bool h_bound = false;    // ||H|| <= slack * est
  bool psi_bound = false;  // ||Psi|| <= 5 * slack * est
  bool heuristic = true;   // the estimate is a lower bound, so the checks are directional
};

NormBoundsReport norm_bounds_check(const SuperOperator& generator, const GkslPresentation& minimal,
                                   std::uint64_t seed, const Tolerance& tol = {});

struct GroupVerdict {
  bool is_group = false;  // L and -L both dCP
  std::optional<GkslPresentation> minimal;
  bool psi_vanishes = false;
  bool g_vanishes = false;
};

GroupVerdict is_cp_group_generator(const SuperOperator& generator, const Tolerance& tol = {});

}  // namespace gkslkit
