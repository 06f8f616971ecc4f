#include <algorithm>
#include <limits>

#include "gkslkit/linalg.hpp"
#include "gkslkit/properties.hpp"

namespace gkslkit {

std::string_view to_string(Evidence e) noexcept {
  switch (e) {
    case Evidence::exact:
      return "exact";
    case Evidence::falsifier:
      return "falsifier";
    case Evidence::monte_carlo:
      return "monte-carlo";
  }
  return "unknown";
}

namespace {

Matrix truncate_rank(const Matrix& t, int n) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Eigen::MatrixXcd(t), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto k = std::min<Eigen::Index>(n, svd.singularValues().size());
  const Eigen::MatrixXcd u = svd.matrixU().leftCols(k);
  const Eigen::MatrixXcd v = svd.matrixV().leftCols(k);
  return u * svd.singularValues().head(k).asDiagonal() * v.adjoint();
}

Matrix normalized(const Matrix& t) {
  const double nrm = linalg::frobenius_norm(t);
  return nrm > 0.0 ? Matrix(t / nrm) : t;
}

}  // namespace

std::optional<RankWitness> rank_n_positive_falsifier(const SuperOperator& map, int n, std::uint64_t seed,
                                                     const SearchBudget& budget, const Tolerance& tol) {
  if (!map.acts_on_square()) throw DimensionError("rank-N falsifier needs a map between square operators");
  const Eigen::Index dh = map.dim_in();
  const Eigen::Index dk = map.dim_out();
  const Eigen::Index full_rank = std::min(dh, dk);
  if (n < 1 || n > std::max(dh, dk)) throw std::invalid_argument("rank-N falsifier: N out of range");

  const ChoiMatrix choi = jamiolkowski(map);
  const Matrix& c = choi.matrix();
  const Matrix ch = linalg::hermitian_part(c);
  const Matrix ca = (c - c.adjoint()) * cplx(0.0, -0.5);  // C = ch + i ca
  const linalg::HermitianEigen eh = linalg::hermitian_eigen(ch);
  const double scale = std::max({1.0, std::abs(eh.values(0)), std::abs(eh.values(eh.values.size() - 1))});
  const double threshold = tol.rtol * scale + tol.atol;

  auto make = [&](const Matrix& t, Evidence ev) {
    const Operator top(t);
    const cplx val = choi.quadratic_form(top);
    return RankWitness{n, top, val.real(), val.imag(), ev};
  };

  if (n >= full_rank) {
    // Every operator has rank <= n: decide on the full spectrum.
    if (!is_hermitian(c, tol)) {
      const linalg::HermitianEigen ea = linalg::hermitian_eigen(ca);
      const Eigen::Index last = ea.values.size() - 1;
      const Eigen::Index pick = std::abs(ea.values(0)) > std::abs(ea.values(last)) ? 0 : last;
      return make(linalg::choi_unvec(ea.vectors.col(pick), dk, dh), Evidence::exact);
    }
    if (eh.values(0) < -threshold) return make(linalg::choi_unvec(eh.vectors.col(0), dk, dh), Evidence::exact);
    return std::nullopt;
  }

  Rng rng(seed);
  const double shift = scale;
  for (int r = 0; r < budget.restarts; ++r) {
    Matrix t = normalized(truncate_rank(random_ginibre(dk, dh, rng).matrix(), n));
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s < budget.steps; ++s) {
      const Vector tv = linalg::choi_vec(t);
      const cplx full = tv.dot(linalg::matvec(c, tv));
      if (full.real() < -threshold || std::abs(full.imag()) > threshold) return make(t, Evidence::falsifier);
      if (full.real() >= best - 1e-15 * scale) break;
      best = full.real();
      // Gradient step on Re<T, C T> (shifted power iteration), then project
      // back onto rank <= n and the unit sphere.
      const Vector step = shift * tv - linalg::matvec(ch, tv);
      t = normalized(truncate_rank(linalg::choi_unvec(step, dk, dh), n));
    }
  }
  return std::nullopt;
}

std::optional<MonotoneWitness> monotone_falsifier(const SuperOperator& map, std::uint64_t seed,
                                                  const SearchBudget& budget, const Tolerance& tol) {
  if (!map.acts_on_square()) throw DimensionError("monotone falsifier needs a map between square operators");
  const Eigen::Index din = map.dim_in();
  const SuperOperator adj = map.adjoint();
  Rng rng(seed);
  for (int r = 0; r < budget.restarts; ++r) {
    Vector v = random_unit_vector(din, rng);
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s < budget.steps; ++s) {
      const Operator rho = Operator::ket_bra(v, v);
      const Operator out = map.apply(rho);
      const PsdResult psd = is_positive_semidefinite(out, tol);
      const linalg::HermitianEigen eo = linalg::hermitian_eigen(out.matrix());
      const Vector w = eo.vectors.col(0);
      if (!psd.psd) return MonotoneWitness{v, rho, w, psd.min_eigenvalue};
      const double scale = std::max(1.0, std::abs(psd.max_eigenvalue));
      if (psd.min_eigenvalue >= best - 1e-15 * scale) break;
      best = psd.min_eigenvalue;
      const Operator back = adj.apply(Operator::ket_bra(w, w));
      const linalg::HermitianEigen eb = linalg::hermitian_eigen(back.matrix());
      v = eb.vectors.col(0);
      v /= v.norm();
    }
  }
  return std::nullopt;
}

AncillaWitness witness_to_ancilla_state(const Operator& t, int n, const Tolerance& tol) {
  const Eigen::Index dk = t.dim_out();
  const Eigen::Index dh = t.dim_in();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Eigen::MatrixXcd(t.matrix()), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& sv = svd.singularValues();
  for (Eigen::Index i = n; i < sv.size(); ++i) {
    if (sv(i) > tol.rtol * std::max(1.0, sv(0))) throw std::invalid_argument("witness has rank larger than N");
  }
  const auto k = std::min<Eigen::Index>(n, sv.size());
  Vector psi = Vector::Zero(dh * n);
  Vector phi = Vector::Zero(dk * n);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index s = 0; s < dh; ++s) psi(s * n + i) = svd.matrixV()(s, i);
    for (Eigen::Index s = 0; s < dk; ++s) phi(s * n + i) = sv(i) * svd.matrixU()(s, i);
  }
  return {psi, phi};
}

PropertyReport classify(const SuperOperator& map, std::uint64_t seed, const SearchBudget& budget,
                        const Tolerance& tol) {
  PropertyReport rep;
  rep.is_dag_morphism = is_dag_morphism(map, tol);
  const CpVerdict cp = is_cp(map, tol);
  rep.is_cp = cp.cp;
  rep.choi_min_eigenvalue = cp.choi_min_eigenvalue;
  if (rep.is_cp) return rep;

  rep.monotone_counterexample = monotone_falsifier(map, seed, budget, tol);
  const int full_rank = static_cast<int>(std::min(map.dim_in(), map.dim_out()));
  for (int n = 1; n <= full_rank; ++n) {
    if (auto w = rank_n_positive_falsifier(map, n, seed + static_cast<std::uint64_t>(n), budget, tol)) {
      rep.rank_n_witness = std::move(w);
      break;
    }
  }
  return rep;
}

}  // namespace gkslkit
