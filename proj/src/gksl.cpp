#include "gkslkit/gksl.hpp"

#include <algorithm>
#include <sstream>

#include "gkslkit/cp_maps.hpp"
#include "gkslkit/linalg.hpp"

namespace gkslkit {
namespace {

// Orthonormal basis (columns) of the traceless subspace in the Choi grouping.
Matrix traceless_basis(Eigen::Index d) {
  const linalg::HermitianEigen e = linalg::hermitian_eigen(traceless_projector(d));
  // Eigenvalues are {0, 1, ..., 1}; the zero belongs to |Id>.
  return e.vectors.rightCols(d * d - 1);
}

struct Compressed {
  Matrix xi;          // P0 herm(C) P0, full d^2 x d^2
  double min_eig = 0.0;
  double max_eig = 0.0;
};

Compressed compress_traceless(const Matrix& choi, Eigen::Index d) {
  const Matrix ch = linalg::hermitian_part(choi);
  Compressed out;
  const Matrix p0 = traceless_projector(d);
  out.xi = linalg::hermitian_part(linalg::matmul(p0, linalg::matmul(ch, p0)));
  if (d == 1) return out;  // no traceless directions
  const Matrix v = traceless_basis(d);
  const Matrix block = linalg::matmul(Matrix(v.adjoint()), linalg::matmul(ch, v));
  const RealVector ev = linalg::hermitian_eigenvalues(block);
  out.min_eig = ev(0);
  out.max_eig = ev(ev.size() - 1);
  return out;
}

double scale_of(const Matrix& m) { return std::max(1.0, linalg::frobenius_norm(m)); }

void require_generator_shape(const SuperOperator& l) {
  if (!l.is_endomorphism()) throw DimensionError("generator must map L(H) to itself");
}

}  // namespace

std::string_view to_string(TraceKind k) noexcept {
  switch (k) {
    case TraceKind::preserving:
      return "preserving";
    case TraceKind::nonincreasing:
      return "nonincreasing";
    case TraceKind::neither:
      return "neither";
  }
  return "unknown";
}

SuperOperator anticommutator(const Operator& g) {
  const Operator id = Operator::identity(g.dim_in());
  return sandwich(g, id) + sandwich(id, g);
}

SuperOperator commutator(const Operator& h) {
  const Operator id = Operator::identity(h.dim_in());
  return sandwich(h, id) - sandwich(id, h);
}

SuperOperator assemble_generator(const GkslPresentation& p, const Tolerance& tol) {
  if (!p.psi.is_endomorphism() || !p.g.is_square() || !p.h.is_square() || p.g.dim_in() != p.psi.dim_in() ||
      p.h.dim_in() != p.psi.dim_in()) {
    throw DimensionError("assemble_generator: inconsistent dimensions");
  }
  if (!is_hermitian(p.g, tol)) throw NotHermitianError("assemble_generator: G is not hermitian");
  if (!is_hermitian(p.h, tol)) throw NotHermitianError("assemble_generator: H is not hermitian");
  const CpVerdict cp = is_cp(p.psi, tol);
  if (!cp.cp) throw NotCpError("assemble_generator: Psi is not CP", cp.choi_min_eigenvalue);
  return p.psi - anticommutator(p.g) - kI * commutator(p.h);
}

GkslPresentation minimal_presentation(const SuperOperator& generator, const Tolerance& tol) {
  require_generator_shape(generator);
  const Eigen::Index d = generator.dim_in();
  const auto dd = static_cast<double>(d);
  const Matrix& choi = generator.choi();
  if (!is_hermitian(choi, tol)) throw NonHermitianChoiError("generator Choi matrix is not hermitian");

  const Vector id = linalg::choi_vec(linalg::identity(d));
  const Vector did = linalg::matvec(choi, id);
  const cplx tau = id.dot(did) / (2.0 * dd);
  if (std::abs(tau.imag()) > tol.rtol * std::max(1.0, std::abs(tau)) + tol.atol) {
    throw NonHermitianChoiError("trace part of the generator is not real");
  }

  const Compressed comp = compress_traceless(choi, d);
  if (comp.min_eig < -tol.rtol * std::max(1.0, comp.max_eig)) {
    std::ostringstream os;
    os << "generator is not dCP: compressed Choi minimum eigenvalue " << comp.min_eig;
    throw NotDcpError(os.str(), comp.min_eig);
  }

  Matrix a = linalg::choi_unvec(did, d, d);
  a.diagonal().array() -= tau.real();
  a /= dd;
  GkslPresentation p{jamiolkowski_inv(ChoiMatrix(d, d, comp.xi)), Operator((a + a.adjoint()) * -0.5),
                     Operator((a.adjoint() - a) * cplx(0.0, -0.5)), true};
  return p;
}

DcpVerdict is_dcp(const SuperOperator& generator, const Tolerance& tol) {
  require_generator_shape(generator);
  DcpVerdict v;
  const Eigen::Index d = generator.dim_in();
  v.is_dag_morphism_generator = is_hermitian(generator.choi(), tol);
  const Compressed comp = compress_traceless(generator.choi(), d);
  v.compressed_choi_min_eig = comp.min_eig;
  const bool compressed_psd = comp.min_eig >= -tol.rtol * std::max(1.0, comp.max_eig);
  v.is_dcp = v.is_dag_morphism_generator && compressed_psd;
  if (v.is_dcp) v.extracted = minimal_presentation(generator, tol);
  return v;
}

bool is_minimal(const GkslPresentation& p, const Tolerance& tol) {
  const Eigen::Index d = p.psi.dim_in();
  const Matrix& c = p.psi.choi();
  const Vector residual = linalg::matvec(c, linalg::choi_vec(linalg::identity(d)));
  const bool annihilates = residual.norm() <= tol.rtol * scale_of(c) * std::sqrt(static_cast<double>(d)) + tol.atol;
  const bool traceless_h = std::abs(p.h.trace()) <= tol.rtol * scale_of(p.h.matrix()) + tol.atol;
  return annihilates && traceless_h;
}

TraceCondition trace_condition(const GkslPresentation& p, const Tolerance& tol) {
  const Eigen::Index d = p.psi.dim_in();
  const Operator psi_dag_id = p.psi.adjoint().apply(Operator::identity(d));
  const Operator two_g = cplx(2.0) * p.g;
  TraceCondition tc{TraceKind::neither, psi_dag_id - two_g};
  const double scale = std::max({1.0, frobenius_norm(psi_dag_id), frobenius_norm(two_g)});
  if (frobenius_norm(tc.defect) <= tol.rtol * scale + tol.atol) {
    tc.kind = TraceKind::preserving;
  } else if (is_positive_semidefinite(-tc.defect, tol).psd) {
    tc.kind = TraceKind::nonincreasing;
  }
  return tc;
}

Operator haar_conjugation_average(const Operator& a) {
  if (!a.is_square()) throw DimensionError("haar_conjugation_average: operator is not square");
  const auto d = static_cast<double>(a.dim_in());
  return (a.trace() / d) * Operator::identity(a.dim_in());
}

namespace {

template <typename Sampler>
MonteCarloEstimate monte_carlo_mean(Eigen::Index rows, Eigen::Index cols, int samples, Sampler&& draw) {
  if (samples < 2) throw std::invalid_argument("Monte-Carlo estimate needs at least two samples");
  Matrix sum = Matrix::Zero(rows, cols);
  Eigen::MatrixXd sq_re = Eigen::MatrixXd::Zero(rows, cols);
  Eigen::MatrixXd sq_im = Eigen::MatrixXd::Zero(rows, cols);
  for (int s = 0; s < samples; ++s) {
    const Matrix x = draw();
    sum += x;
    sq_re.array() += x.real().array().square();
    sq_im.array() += x.imag().array().square();
  }
  const double n = samples;
  const Matrix mean = sum / n;
  const Eigen::MatrixXd var_re = ((sq_re / n).array() - mean.real().array().square()) * (n / (n - 1.0));
  const Eigen::MatrixXd var_im = ((sq_im / n).array() - mean.imag().array().square()) * (n / (n - 1.0));
  const Eigen::MatrixXd se2 = (var_re.array().max(0.0) + var_im.array().max(0.0)) / n;
  MonteCarloEstimate est{Operator(mean), Operator(Matrix(se2.array().sqrt().cast<cplx>())), std::sqrt(se2.sum()),
                         samples};
  return est;
}

}  // namespace

MonteCarloEstimate haar_conjugation_average_mc(const Operator& a, int samples, std::uint64_t seed) {
  if (!a.is_square()) throw DimensionError("haar_conjugation_average_mc: operator is not square");
  Rng rng(seed);
  const int d = static_cast<int>(a.dim_in());
  return monte_carlo_mean(d, d, samples, [&] {
    const Operator u = random_haar_unitary(d, rng);
    return Matrix((u * a * u.dagger()).matrix());
  });
}

Operator lindblad_trick_average(const SuperOperator& generator, const GkslPresentation& minimal,
                                const Tolerance& tol) {
  require_generator_shape(generator);
  if (minimal.psi.dim_in() != generator.dim_in()) throw DimensionError("presentation does not match the generator");
  if (!is_minimal(minimal, tol)) throw NotMinimalError("lindblad_trick_average needs the minimal presentation");
  const Eigen::Index d = generator.dim_in();
  const Vector did = linalg::matvec(generator.choi(), linalg::choi_vec(linalg::identity(d)));
  return Operator(linalg::choi_unvec(did, d, d) / static_cast<double>(d));
}

Operator lindblad_trick_expected(const GkslPresentation& minimal) {
  const Eigen::Index d = minimal.g.dim_in();
  const cplx tr_g_over_d = minimal.g.trace() / static_cast<double>(d);
  return -minimal.g - tr_g_over_d * Operator::identity(d) - kI * minimal.h;
}

MonteCarloEstimate lindblad_trick_average_mc(const SuperOperator& generator, int samples, std::uint64_t seed) {
  require_generator_shape(generator);
  Rng rng(seed);
  const int d = static_cast<int>(generator.dim_in());
  return monte_carlo_mean(d, d, samples, [&] {
    const Operator u = random_haar_unitary(d, rng);
    return Matrix((generator.apply(u) * u.dagger()).matrix());
  });
}

double induced_trace_norm_estimate(const SuperOperator& map, std::uint64_t seed, int restarts, int steps) {
  const OpShape in = map.in_shape();
  const SuperOperator adj = map.adjoint();
  Rng rng(seed);

  auto ascend = [&](Vector v, Vector w) {
    double value = trace_norm(map.apply(Operator::ket_bra(v, w)));
    for (int s = 0; s < steps; ++s) {
      const Matrix y = map.apply(Operator::ket_bra(v, w)).matrix();
      Eigen::JacobiSVD<Eigen::MatrixXcd> sy(Eigen::MatrixXcd(y), Eigen::ComputeThinU | Eigen::ComputeThinV);
      const Matrix polar = sy.matrixU() * sy.matrixV().adjoint();
      const Matrix z = adj.apply(Operator(polar)).matrix();
      Eigen::JacobiSVD<Eigen::MatrixXcd> sz(Eigen::MatrixXcd(z), Eigen::ComputeThinU | Eigen::ComputeThinV);
      Vector nv = sz.matrixU().col(0);
      Vector nw = sz.matrixV().col(0);
      const double next = trace_norm(map.apply(Operator::ket_bra(nv, nw)));
      if (next <= value * (1.0 + 1e-13)) {
        value = std::max(value, next);
        break;
      }
      value = next;
      v = std::move(nv);
      w = std::move(nw);
    }
    return value;
  };

  double best = 0.0;
  for (Eigen::Index i = 0; i < in.rows; ++i) {
    for (Eigen::Index j = 0; j < in.cols; ++j) {
      best = std::max(best, ascend(Vector::Unit(in.rows, i), Vector::Unit(in.cols, j)));
    }
  }
  for (int r = 0; r < restarts; ++r) {
    Vector v = random_unit_vector(in.rows, rng);
    Vector w = random_unit_vector(in.cols, rng);
    best = std::max(best, ascend(std::move(v), std::move(w)));
  }
  return best;
}

NormBoundsReport norm_bounds_check(const SuperOperator& generator, const GkslPresentation& minimal,
                                   std::uint64_t seed, const Tolerance& tol) {
  NormBoundsReport r;
  r.generator_norm_estimate = induced_trace_norm_estimate(generator, seed);
  r.g_norm = operator_norm(minimal.g);
  r.h_norm = operator_norm(minimal.h);
  r.psi_norm_estimate = induced_trace_norm_estimate(minimal.psi, seed + 1);
  const double bound = r.slack * r.generator_norm_estimate + tol.atol;
  r.g_bound = r.g_norm <= bound;
  r.h_bound = r.h_norm <= bound;
  r.psi_bound = r.psi_norm_estimate <= 5.0 * bound;
  return r;
}

GroupVerdict is_cp_group_generator(const SuperOperator& generator, const Tolerance& tol) {
  GroupVerdict g;
  DcpVerdict fwd = is_dcp(generator, tol);
  const DcpVerdict bwd = is_dcp(-generator, tol);
  g.is_group = fwd.is_dcp && bwd.is_dcp;
  if (g.is_group) {
    g.minimal = std::move(fwd.extracted);
    const double scale = scale_of(generator.choi());
    g.psi_vanishes = linalg::frobenius_norm(g.minimal->psi.choi()) <= tol.rtol * scale + tol.atol;
    g.g_vanishes = frobenius_norm(g.minimal->g) <= tol.rtol * scale + tol.atol;
  }
  return g;
}

}  // namespace gkslkit
