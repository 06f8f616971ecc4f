#include "doctest.h"
#include "gkslkit/fixtures.hpp"
#include "gkslkit/linalg.hpp"
#include "gkslkit/properties.hpp"

using namespace gkslkit;

namespace {

/// rho -> Tr(rho) Id - rho. Positive; <T, J T> = ||T||^2 - |Tr T|^2, so it is
/// rank-1 positive and fails at rank 2.
SuperOperator reduction_map(Eigen::Index d) { return SuperOperator::trace_to_identity(d) - SuperOperator::identity(d); }

}  // namespace

TEST_CASE("transpose: positive, rank-1 positive, refuted at rank 2") {
  const SuperOperator t = transpose_map(2);
  CHECK_FALSE(monotone_falsifier(t, 1, {500, 50}).has_value());
  CHECK_FALSE(rank_n_positive_falsifier(t, 1, 2, {100, 100}).has_value());
  const auto w = rank_n_positive_falsifier(t, 2, 3);
  REQUIRE(w.has_value());
  CHECK(w->evidence == Evidence::exact);
  CHECK(w->value == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("reduction map in d = 3: the search finds the rank-2 witness") {
  const SuperOperator r = reduction_map(3);
  CHECK_FALSE(monotone_falsifier(r, 4, {200, 50}).has_value());
  CHECK_FALSE(rank_n_positive_falsifier(r, 1, 5, {100, 100}).has_value());
  const auto w = rank_n_positive_falsifier(r, 2, 6);
  REQUIRE(w.has_value());
  CHECK(w->evidence == Evidence::falsifier);
  CHECK(w->value < 0.0);
  CHECK(linalg::singular_values(w->t.matrix())(2) < 1e-9);
  // Independent evaluation of the quadratic form.
  const double direct = std::pow(frobenius_norm(w->t), 2) - std::norm(w->t.trace());
  CHECK(w->value == doctest::Approx(direct).epsilon(1e-9));
}

TEST_CASE("witnesses transfer to a negative expectation of Lambda (x) Id_N") {
  for (Eigen::Index d : {2, 3}) {
    const SuperOperator map = d == 2 ? transpose_map(2) : reduction_map(3);
    const auto w = rank_n_positive_falsifier(map, 2, 7);
    REQUIRE(w.has_value());
    const AncillaWitness a = witness_to_ancilla_state(w->t, 2);
    const Operator out = tensor_with_identity(map, 2).apply(Operator::ket_bra(a.psi, a.psi));
    const cplx value = a.phi.dot(out.matrix() * a.phi);
    CHECK(value.real() == doctest::Approx(w->value).epsilon(1e-10));
    CHECK(std::abs(value.imag()) < 1e-12);
  }
}

TEST_CASE("monotone falsifier refutes a non-positive map and returns a valid certificate") {
  // Lambda(rho) = rho - 2 <0|rho|0> |1><1| is not positive.
  const SuperOperator map = SuperOperator::identity(2) - cplx(2.0) * sandwich(Operator::dyad(2, 2, 1, 0), Operator::dyad(2, 2, 0, 1));
  const auto w = monotone_falsifier(map, 9);
  REQUIRE(w.has_value());
  CHECK(w->min_eigenvalue < 0.0);
  const Operator out = map.apply(w->rho);
  CHECK(w->w.dot(out.matrix() * w->w).real() == doctest::Approx(w->min_eigenvalue).epsilon(1e-10));
}

TEST_CASE("CP maps are never refuted") {
  Rng rng(10);
  for (int i = 0; i < 5; ++i) {
    const SuperOperator map = fixtures::random_cp_map(3, 2, rng);
    CHECK_FALSE(monotone_falsifier(map, i, {20, 20}).has_value());
    for (int n = 1; n <= 3; ++n) CHECK_FALSE(rank_n_positive_falsifier(map, n, i, {20, 20}).has_value());
  }
}

TEST_CASE("classify assembles exact and search-based evidence") {
  const PropertyReport cp = classify(SuperOperator::identity(2), 1);
  CHECK(cp.is_cp);
  CHECK(cp.is_dag_morphism);
  CHECK_FALSE(cp.rank_n_witness.has_value());

  const PropertyReport t = classify(transpose_map(2), 1, {100, 50});
  CHECK_FALSE(t.is_cp);
  CHECK(t.is_dag_morphism);
  CHECK(t.choi_min_eigenvalue == doctest::Approx(-1.0));
  CHECK_FALSE(t.monotone_counterexample.has_value());
  REQUIRE(t.rank_n_witness.has_value());
  CHECK(t.rank_n_witness->n == 2);
  CHECK(to_string(t.monotone_evidence) == "falsifier");
}

TEST_CASE("falsifier argument checks") {
  CHECK_THROWS_AS(rank_n_positive_falsifier(transpose_map(2), 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(rank_n_positive_falsifier(transpose_map(2), 3, 1), std::invalid_argument);
  Matrix t = Matrix::Identity(3, 3);
  CHECK_THROWS_AS(witness_to_ancilla_state(Operator(t), 2), std::invalid_argument);
}
