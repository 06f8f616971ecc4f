#pragma once

// Property classifiers beyond the exact CP test. The falsifiers can only
// refute: a returned witness is a certificate, an empty result is not a proof.

#include <optional>
#include <string_view>
#include <utility>

#include "gkslkit/superoperator.hpp"

namespace gkslkit {

enum class Evidence { exact, falsifier, monte_carlo };
std::string_view to_string(Evidence e) noexcept;

struct SearchBudget {
  int restarts = 200;
  int steps = 100;
};

struct RankWitness {
  int n = 0;
  Operator t;           // rank <= n, unit Hilbert-Schmidt norm
  double value = 0.0;   // Re <T, J(Lambda) T>
  double imag = 0.0;    // Im <T, J(Lambda) T>
  Evidence evidence = Evidence::falsifier;
};

/// Search for T of rank <= n with <T, J(Lambda) T> negative (or not real).
/// For n >= min(d_in, d_out) every T qualifies, so the answer comes from the
/// exact Choi spectrum instead of a search.
std::optional<RankWitness> rank_n_positive_falsifier(const SuperOperator& map, int n, std::uint64_t seed,
                                                     const SearchBudget& budget = {}, const Tolerance& tol = {});

struct MonotoneWitness {
  Vector v;          // unit input vector
  Operator rho;      // v v^dagger
  Vector w;          // unit vector with <w, Lambda(rho) w> = min_eigenvalue
  double min_eigenvalue = 0.0;
};

/// Search rank-one inputs v v^dagger for an output that is not positive.
/// Each restart alternates between the lowest eigenvector of Lambda(v v^dagger)
/// and the lowest eigenvector of Lambda^dagger(w w^dagger).
std::optional<MonotoneWitness> monotone_falsifier(const SuperOperator& map, std::uint64_t seed,
                                                  const SearchBudget& budget = {}, const Tolerance& tol = {});

/// Turn a rank-N witness T for J(Lambda) into a pure input psi for Lambda (x) Id_N
/// and a test vector phi with <phi, (Lambda (x) Id_N)(psi psi^dagger) phi> = <T, J(Lambda) T>.
struct AncillaWitness {
  Vector psi;
  Vector phi;
};
AncillaWitness witness_to_ancilla_state(const Operator& t, int n, const Tolerance& tol = {});

struct PropertyReport {
  bool is_dag_morphism = false;
  bool is_cp = false;
  double choi_min_eigenvalue = 0.0;
  std::optional<MonotoneWitness> monotone_counterexample;
  std::optional<RankWitness> rank_n_witness;
  // Evidence behind the two search-based entries; is_cp and is_dag_morphism are exact.
  Evidence monotone_evidence = Evidence::falsifier;
};

PropertyReport classify(const SuperOperator& map, std::uint64_t seed, const SearchBudget& budget = {},
                        const Tolerance& tol = {});

}  // namespace gkslkit
