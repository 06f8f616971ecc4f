#include "gkslkit/filtration.hpp"

#include <algorithm>
#include <sstream>

#include "gkslkit/evolution.hpp"
#include "gkslkit/linalg.hpp"

namespace gkslkit {

Filtration::Filtration(Eigen::Index ambient_dim, std::vector<Eigen::Index> dims, Matrix basis)
    : ambient_(ambient_dim), dims_(std::move(dims)), basis_(std::move(basis)) {
  if (ambient_ < 1) throw DimensionError("filtration: ambient dimension must be positive");
  if (dims_.empty()) throw DimensionError("filtration: no dimensions given");
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (dims_[i] < 1 || dims_[i] > ambient_) throw DimensionError("filtration: dimension out of range");
    if (i > 0 && dims_[i] <= dims_[i - 1]) throw DimensionError("filtration: dimensions must strictly increase");
  }
  if (basis_.rows() != ambient_ || basis_.cols() != ambient_) throw DimensionError("filtration: basis shape");
  const Matrix gram = basis_.adjoint() * basis_;
  if (linalg::frobenius_norm(gram - linalg::identity(ambient_)) > 1e-10) {
    throw std::invalid_argument("filtration: basis is not orthonormal");
  }
}

Filtration::Filtration(Eigen::Index ambient_dim, std::vector<Eigen::Index> dims)
    : Filtration(ambient_dim, std::move(dims), linalg::identity(ambient_dim)) {}

bool Filtration::contains(Eigen::Index n) const noexcept {
  return std::find(dims_.begin(), dims_.end(), n) != dims_.end();
}

Matrix Filtration::isometry(Eigen::Index n) const {
  if (n < 0 || n > ambient_) throw DimensionError("filtration: n out of range");
  return basis_.leftCols(n);
}

Operator Filtration::projector(Eigen::Index n) const {
  const Matrix v = isometry(n);
  return Operator(v * v.adjoint());
}

SuperOperator lift_projection(const Operator& p, const Tolerance& tol) {
  if (!p.is_square()) throw NotProjectionError("lift_projection: not square");
  const double scale = std::max(1.0, frobenius_norm(p));
  if (!is_hermitian(p, tol) || frobenius_norm(p * p - p) > tol.rtol * scale + tol.atol) {
    throw NotProjectionError("lift_projection: operator is not an orthoprojection");
  }
  return sandwich(p, p);
}

namespace {

void require_level(const Filtration& f, Eigen::Index n) {
  if (!f.contains(n)) {
    std::ostringstream os;
    os << "dimension " << n << " is not part of the filtration";
    throw DimensionError(os.str());
  }
}

}  // namespace

SuperOperator compress(const SuperOperator& gamma, const Filtration& f, Eigen::Index n) {
  require_level(f, n);
  if (!gamma.is_endomorphism() || gamma.dim_in() != f.ambient_dim()) {
    throw DimensionError("compress: superoperator does not act on the ambient space");
  }
  const SuperOperator lift = sandwich(f.projector(n), f.projector(n));
  return compose(lift, compose(gamma, lift));
}

Operator compress(const Operator& a, const Filtration& f, Eigen::Index n) {
  require_level(f, n);
  const Operator p = f.projector(n);
  return p * a * p;
}

SuperOperator restrict_to(const SuperOperator& gamma, const Filtration& f, Eigen::Index n) {
  require_level(f, n);
  const Operator v(f.isometry(n));
  // X (n x n) -> V^dagger Gamma(V X V^dagger) V
  const SuperOperator embed = sandwich(v, v.dagger());
  const SuperOperator extract = sandwich(v.dagger(), v);
  return compose(extract, compose(gamma, embed));
}

std::vector<TruncationRow> truncation_study(const SuperOperator& generator, const Filtration& f, double t,
                                            const Operator& rho, const Tolerance& tol) {
  const DcpVerdict v = is_dcp(generator, tol);
  if (!v.is_dcp) throw NotDcpError("truncation_study: generator is not dCP", v.compressed_choi_min_eig);
  if (generator.dim_in() != f.ambient_dim()) throw DimensionError("truncation_study: generator/filtration mismatch");

  const Operator reference = exp_generator(generator, t).apply(rho);
  std::vector<TruncationRow> rows;
  for (Eigen::Index n : f.dims()) {
    const SuperOperator lift = sandwich(f.projector(n), f.projector(n));
    const SuperOperator evolved = compose(exp_generator(compress(generator, f, n), t), lift);
    const CpVerdict cp = is_cp(evolved, tol);
    rows.push_back({n, trace_norm(evolved.apply(rho) - reference), cp.cp, cp.choi_min_eigenvalue});
  }
  return rows;
}

double sequence_norm(const Operator& a) { return operator_norm(a); }
double sequence_norm(const SuperOperator& a) { return linalg::spectral_norm(a.matrix()); }

namespace {

double diff_norm(const Operator& a, const Operator& b) { return frobenius_norm(a - b); }
double diff_norm(const SuperOperator& a, const SuperOperator& b) { return distance(a, b); }
double value_scale(const Operator& a) { return std::max(1.0, frobenius_norm(a)); }
double value_scale(const SuperOperator& a) { return std::max(1.0, frobenius_norm(a)); }

template <typename T>
Reconstruction<T> reconstruct(const AdaptedSequence<T>& seq, const Filtration& f, double norm_bound,
                              const Tolerance& tol) {
  if (seq.items.empty()) throw NotProjectiveError("projective_reconstruction: empty sequence");
  for (std::size_t i = 1; i < seq.items.size(); ++i) {
    if (seq.items[i].n <= seq.items[i - 1].n) throw NotProjectiveError("sequence indices must strictly increase");
  }
  std::vector<double> norms;
  for (const auto& item : seq.items) {
    const double nrm = sequence_norm(item.value);
    norms.push_back(nrm);
    if (nrm > norm_bound) {
      std::ostringstream os;
      os << "norm " << nrm << " at n = " << item.n << " exceeds the bound " << norm_bound;
      throw NormBoundViolatedError(os.str(), static_cast<int>(item.n), nrm);
    }
  }
  double worst = 0.0;
  for (std::size_t j = 0; j < seq.items.size(); ++j) {
    const auto& hi = seq.items[j];
    for (std::size_t i = 0; i <= j; ++i) {
      const auto& lo = seq.items[i];
      const double defect = diff_norm(compress(hi.value, f, lo.n), lo.value);
      if (defect > tol.rtol * value_scale(lo.value) + tol.atol) {
        std::ostringstream os;
        os << (i == j ? "item at n = " : "compression of item ") << hi.n;
        if (i != j) os << " to n = " << lo.n;
        os << (i == j ? " is not adapted" : " disagrees with the item there") << " (defect " << defect << ")";
        throw NotProjectiveError(os.str());
      }
      worst = std::max(worst, defect);
    }
  }
  return {seq.items.back().value, worst, std::move(norms)};
}

}  // namespace

Reconstruction<Operator> projective_reconstruction(const AdaptedSequence<Operator>& seq, const Filtration& f,
                                                   double norm_bound, const Tolerance& tol) {
  return reconstruct(seq, f, norm_bound, tol);
}

Reconstruction<SuperOperator> projective_reconstruction(const AdaptedSequence<SuperOperator>& seq,
                                                        const Filtration& f, double norm_bound,
                                                        const Tolerance& tol) {
  return reconstruct(seq, f, norm_bound, tol);
}

AdaptedSequence<Operator> diverging_diagonal_sequence(const Filtration& f) {
  AdaptedSequence<Operator> seq;
  const Eigen::Index dim = f.ambient_dim();
  for (Eigen::Index n : f.dims()) {
    RealVector diag = RealVector::Zero(dim);
    for (Eigen::Index i = 0; i < n; ++i) diag(i) = static_cast<double>(i + 1);
    const Matrix v = f.basis();
    seq.items.push_back({n, Operator(v * Operator::diagonal(diag).matrix() * v.adjoint())});
  }
  return seq;
}

}  // namespace gkslkit
