#include "doctest.h"
#include "gkslkit/cp_maps.hpp"
#include "gkslkit/fixtures.hpp"
#include "gkslkit/linalg.hpp"
#include "oracles.hpp"

using namespace gkslkit;

namespace {

// Largest-modulus entry, ties (to rounding) broken by the lowest row-major index.
double largest_modulus_phase_error(const Operator& a) {
  const Matrix& m = a.matrix();
  const double top = m.cwiseAbs().maxCoeff();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      if (std::abs(m(r, c)) >= top * (1.0 - 1e-12)) return std::abs(m(r, c).imag()) + (m(r, c).real() > 0.0 ? 0.0 : 1.0);
  return 1.0;
}

}  // namespace

TEST_CASE("Kraus extraction round-trips random CP maps") {
  Rng rng(1);
  for (int i = 0; i < 30; ++i) {
    const Eigen::Index d = 2 + i % 2;
    const int count = 1 + i % 5;
    const SuperOperator map = fixtures::random_cp_map(d, count, rng, i % 3 != 0);
    const KrausFamily k = kraus_extract(map);
    CHECK(static_cast<Eigen::Index>(k.operators.size()) <= d * d);
    CHECK(static_cast<int>(k.operators.size()) <= count);
    CHECK(distance(kraus_assemble(k), map) <= 1e-10 * frobenius_norm(map));
    // Descending weights and the phase rule.
    for (std::size_t j = 1; j < k.operators.size(); ++j) {
      CHECK(frobenius_norm(k.operators[j - 1]) >= frobenius_norm(k.operators[j]) - 1e-12);
    }
    for (const auto& a : k.operators) CHECK(largest_modulus_phase_error(a) < 1e-12);
    // Kraus operators are HS-orthogonal.
    for (std::size_t p = 0; p < k.operators.size(); ++p)
      for (std::size_t q = p + 1; q < k.operators.size(); ++q) CHECK(std::abs(hs_inner(k.operators[p], k.operators[q])) < 1e-10);
  }
}

TEST_CASE("Kraus extraction on named channels") {
  const KrausFamily id = kraus_extract(SuperOperator::identity(3));
  REQUIRE(id.operators.size() == 1);
  CHECK(frobenius_norm(id.operators[0] - Operator::identity(3)) < 1e-12);

  const KrausFamily deph = kraus_extract(fixtures::dephasing_channel(2, 1.0));
  REQUIRE(deph.operators.size() == 2);
  for (const auto& p : deph.operators) {
    CHECK(frobenius_norm(p * p - p) < 1e-12);
    CHECK(is_hermitian(p));
  }
  CHECK(frobenius_norm(deph.operators[0] + deph.operators[1] - Operator::identity(2)) < 1e-12);

  const double gamma = 0.3;
  const KrausFamily ad = kraus_extract(fixtures::amplitude_damping_channel(gamma));
  const KrausFamily ref = fixtures::amplitude_damping_kraus(gamma);
  REQUIRE(ad.operators.size() == 2);
  CHECK(frobenius_norm(ad.operators[0] - ref.operators[0]) < 1e-12);
  CHECK(frobenius_norm(ad.operators[1] - ref.operators[1]) < 1e-12);
  CHECK_FALSE(ad.degenerate_spectrum);
}

TEST_CASE("Kraus extraction rejects non-CP maps; assembly rejects empty families") {
  CHECK_THROWS_AS(kraus_extract(transpose_map(2)), NotCpError);
  try {
    kraus_extract(transpose_map(2));
  } catch (const NotCpError& e) {
    CHECK(e.min_eigenvalue() == doctest::Approx(-1.0));
  }
  CHECK_THROWS_AS(kraus_assemble(std::vector<Operator>{}), DimensionError);
  CHECK(kraus_extract(SuperOperator::zero(2, 2)).operators.empty());
}

TEST_CASE("kraus_assemble matches the oracle action") {
  Rng rng(2);
  const KrausFamily k = fixtures::random_kraus_family(3, 3, rng, false);
  std::vector<oracle::M> ops;
  for (const auto& a : k.operators) ops.push_back(a.matrix());
  const oracle::M x = oracle::random_matrix(3, 3, rng);
  const oracle::M ref = oracle::apply_kraus(ops, x);
  CHECK(oracle::rel_diff(oracle::M(kraus_assemble(k).apply(Operator(x)).matrix()), ref) < 1e-13);
}

TEST_CASE("traceless projector") {
  for (Eigen::Index d : {1, 2, 4}) {
    const Matrix p = traceless_projector(d);
    CHECK(linalg::frobenius_norm(p * p - p) < 1e-13);
    CHECK((p * linalg::choi_vec(linalg::identity(d))).norm() < 1e-13);
    CHECK(std::abs(p.trace() - cplx(static_cast<double>(d * d - 1))) < 1e-12);
  }
}

TEST_CASE("intermediate form reconstructs the Choi matrix") {
  Rng rng(3);
  for (int i = 0; i < 10; ++i) {
    const SuperOperator map = fixtures::random_cp_map(2 + i % 3, 2, rng, i % 2 == 0);
    const IntermediateForm f = intermediate_form(map);
    CHECK(linalg::frobenius_norm(f.reconstruct_choi() - map.choi()) < 1e-12 * std::max(1.0, linalg::frobenius_norm(map.choi())));
    CHECK(std::abs(f.b.trace()) < 1e-12);
    const Eigen::Index d = map.dim_in();
    CHECK((f.theta * linalg::choi_vec(linalg::identity(d))).norm() < 1e-12);
    CHECK(is_positive_semidefinite(Operator(f.theta)).psd);
  }
  // c for two channels with known Choi matrices.
  CHECK(intermediate_form(SuperOperator::identity(3)).c == doctest::Approx(1.0));
  CHECK(intermediate_form(fixtures::depolarizing_channel(3, 1.0)).c == doctest::Approx(1.0 / 9.0));
  CHECK_THROWS_AS(intermediate_form(transpose_map(2)), NotCpError);
}

TEST_CASE("CP cone closure on concrete pairs") {
  Rng rng(4);
  const SuperOperator a = fixtures::random_cp_map(2, 2, rng);
  const SuperOperator b = fixtures::amplitude_damping_channel(0.4);
  std::vector<SuperOperator> seq;
  for (int n = 1; n <= 5; ++n) seq.push_back(fixtures::depolarizing_channel(2, 1.0 / n));
  const ClosureReport r = cp_closure_checks(a, b, 5, 16, seq);
  CHECK(r.inputs_cp);
  CHECK(r.conic_combinations_cp);
  CHECK(r.composition_cp);
  REQUIRE(r.limit_cp.has_value());
  CHECK(*r.limit_cp);
  CHECK(r.samples == 16);

  const ClosureReport bad = cp_closure_checks(transpose_map(2), b, 5);
  CHECK_FALSE(bad.inputs_cp);
  CHECK_FALSE(bad.conic_combinations_cp);
}
