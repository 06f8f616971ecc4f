#include "gkslkit/cp_maps.hpp"

#include <algorithm>
#include <sstream>

#include "gkslkit/linalg.hpp"

namespace gkslkit {
namespace {

Matrix phase_fixed(const Matrix& a) {
  double max_mod = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) max_mod = std::max(max_mod, std::abs(a.data()[i]));
  if (max_mod == 0.0) return a;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const cplx z = a.data()[i];
    if (std::abs(z) >= max_mod * (1.0 - 1e-12)) return a * (std::conj(z) / std::abs(z));
  }
  return a;
}

}  // namespace

KrausFamily kraus_extract(const SuperOperator& map, const Tolerance& tol) {
  const CpVerdict cp = is_cp(map, tol);
  if (!cp.cp) {
    std::ostringstream os;
    os << "map is not CP: Choi minimum eigenvalue " << cp.choi_min_eigenvalue;
    throw NotCpError(os.str(), cp.choi_min_eigenvalue);
  }
  const Eigen::Index dh = map.dim_in();
  const Eigen::Index dk = map.dim_out();
  const linalg::HermitianEigen eig = linalg::hermitian_eigen(map.choi());
  const Eigen::Index n = eig.values.size();
  const double lmax = eig.values(n - 1);

  KrausFamily family;
  if (lmax <= 0.0) return family;  // zero map
  const double cutoff = tol.rtol * lmax;
  double prev = 0.0;
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    const double lam = eig.values(i);
    if (lam <= cutoff) break;
    if (!family.operators.empty() && prev - lam < cutoff) family.degenerate_spectrum = true;
    prev = lam;
    const Matrix a = std::sqrt(lam) * linalg::choi_unvec(eig.vectors.col(i), dk, dh);
    family.operators.emplace_back(phase_fixed(a));
  }
  return family;
}

SuperOperator kraus_assemble(std::span<const Operator> ops) {
  if (ops.empty()) throw DimensionError("kraus_assemble: empty family has no dimensions");
  const Operator& first = ops.front();
  Matrix m = Matrix::Zero(first.dim_out() * first.dim_out(), first.dim_in() * first.dim_in());
  for (const Operator& a : ops) {
    if (!same_dims(a, first)) throw DimensionError("kraus_assemble: Kraus operators differ in shape");
    m += sandwich(a, a.dagger()).matrix();
  }
  return SuperOperator(first.dim_in(), first.dim_out(), std::move(m));
}

SuperOperator kraus_assemble(const KrausFamily& family) { return kraus_assemble(family.operators); }

Matrix traceless_projector(Eigen::Index d) {
  const Vector u = linalg::choi_vec(linalg::identity(d)) / std::sqrt(static_cast<double>(d));
  return linalg::identity(d * d) - u * u.adjoint();
}

Matrix IntermediateForm::reconstruct_choi() const {
  const Eigen::Index d = a_op.dim_in();
  const Vector id = linalg::choi_vec(linalg::identity(d));
  const Vector a = linalg::choi_vec(a_op.matrix());
  return theta + id * a.adjoint() + a * id.adjoint();
}

IntermediateForm intermediate_form(const SuperOperator& map, const Tolerance& tol) {
  if (!map.is_endomorphism()) throw DimensionError("intermediate_form: map must send L(H) to itself");
  const CpVerdict cp = is_cp(map, tol);
  if (!cp.cp) throw NotCpError("intermediate_form: map is not CP", cp.choi_min_eigenvalue);

  const Eigen::Index d = map.dim_in();
  const auto dd = static_cast<double>(d);
  const Matrix& choi = map.choi();
  const Vector id = linalg::choi_vec(linalg::identity(d));
  const Vector did = linalg::matvec(choi, id);

  IntermediateForm f;
  f.c = id.dot(did).real() / (dd * dd);
  f.b = traceless_projection(Operator(linalg::choi_unvec(did, d, d) / dd));
  f.a_op = f.b + cplx(f.c / 2.0) * Operator::identity(d);
  const Matrix p0 = traceless_projector(d);
  f.theta = linalg::matmul(p0, linalg::matmul(choi, p0));

  const PsdResult theta_psd = psd_check(f.theta, tol);
  if (!theta_psd.psd) {
    throw NotCpError("intermediate_form: traceless block is not PSD (inconsistent input)", theta_psd.min_eigenvalue);
  }
  return f;
}

ClosureReport cp_closure_checks(const SuperOperator& lambda, const SuperOperator& gamma, std::uint64_t seed,
                                int samples, std::span<const SuperOperator> sequence, const Tolerance& tol) {
  ClosureReport rep;
  rep.inputs_cp = is_cp(lambda, tol).cp && is_cp(gamma, tol).cp;
  rep.samples = samples;

  if (same_shapes(lambda, gamma)) {
    Rng rng(seed);
    std::uniform_real_distribution<double> coef(0.0, 2.0);
    rep.worst_conic_min_eigenvalue = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
      // First sample is the zero combination.
      const double a = i == 0 ? 0.0 : coef(rng);
      const double b = i == 0 ? 0.0 : coef(rng);
      const CpVerdict v = is_cp(cplx(a) * lambda + cplx(b) * gamma, tol);
      rep.conic_combinations_cp = rep.conic_combinations_cp && v.cp;
      rep.worst_conic_min_eigenvalue = std::min(rep.worst_conic_min_eigenvalue, v.choi_min_eigenvalue);
    }
  } else {
    rep.conic_combinations_cp = false;
  }

  if (gamma.in_shape() == lambda.out_shape()) {
    rep.composition_cp = is_cp(compose(gamma, lambda), tol).cp;
  } else {
    throw DimensionError("cp_closure_checks: Gamma o Lambda is not defined");
  }

  if (!sequence.empty()) rep.limit_cp = is_cp(sequence.back(), tol).cp;
  return rep;
}

}  // namespace gkslkit
