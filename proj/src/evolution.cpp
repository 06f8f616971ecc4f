#include "gkslkit/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gkslkit/linalg.hpp"

namespace gkslkit {

SuperOperator exp_generator(const SuperOperator& generator, double t) {
  if (!(generator.in_shape() == generator.out_shape())) {
    throw DimensionError("exp_generator: generator must map a space to itself");
  }
  return SuperOperator(generator.in_shape(), generator.out_shape(), linalg::expm(generator.matrix() * t));
}

EulerFactor euler_factor(const SuperOperator& generator, long long n) {
  if (n < 1) throw std::invalid_argument("euler_factor: n must be at least 1");
  if (!generator.is_endomorphism()) throw DimensionError("euler_factor: generator must map L(H) to itself");
  const Eigen::Index d = generator.dim_in();
  const double eps = 1.0 / static_cast<double>(n);
  const Vector id = linalg::choi_vec(linalg::identity(d));
  const Matrix test = id * id.adjoint() + eps * linalg::hermitian_part(generator.choi());
  const double lmin = linalg::hermitian_eigenvalues(test)(0);
  const double eta = std::max(0.0, -lmin / eps) * (1.0 + 1e-6);
  const SuperOperator shifted = generator + cplx(eta) * SuperOperator::trace_to_identity(d);
  return {SuperOperator::identity(d) + cplx(eps) * shifted, eta};
}

SuperOperator euler_limit_exp(const SuperOperator& generator, long long n, const Tolerance& tol) {
  const DcpVerdict v = is_dcp(generator, tol);
  if (!v.is_dcp) throw NotDcpError("euler_limit_exp: generator is not dCP", v.compressed_choi_min_eig);
  const EulerFactor f = euler_factor(generator, n);
  const SuperOperator& x = f.factor;
  return SuperOperator(x.in_shape(), x.out_shape(), linalg::power(x.matrix(), n));
}

void GeneratorSchedule::validate() const {
  if (!(t_start < t_end)) throw std::invalid_argument("schedule: t_start must precede t_end");
  if (!eval) throw std::invalid_argument("schedule: no generator function");
}

GeneratorSchedule GeneratorSchedule::constant(const SuperOperator& generator, double t_start, double t_end) {
  GeneratorSchedule s;
  s.t_start = t_start;
  s.t_end = t_end;
  s.eval = [generator](double) { return generator; };
  s.continuity_modulus = 0.0;
  return s;
}

Propagator propagate(const GeneratorSchedule& schedule, double s, double t, double eps, const PropagateOptions& opts) {
  schedule.validate();
  if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("propagate: eps must be positive");
  if (s > t) throw TimeMismatchError("propagate: s must not exceed t");
  if (!(schedule.t_start < s) || !(t < schedule.t_end)) {
    throw TimeMismatchError("propagate: [s, t] must lie inside the schedule's open interval");
  }

  const double span = t - s;
  auto steps = static_cast<long long>(std::floor(span / eps + 1e-9));
  double remainder = span - static_cast<double>(steps) * eps;
  if (remainder <= 1e-12 * std::max(1.0, std::abs(t))) remainder = 0.0;

  std::optional<SuperOperator> map;
  std::optional<OpShape> shape;
  Propagator p{s, t, SuperOperator::identity(1), 0, std::nullopt};
  bool all_dcp = true;

  auto push = [&](double tn, double dt) {
    const SuperOperator gen = schedule.eval(tn);
    if (!shape) {
      shape = gen.in_shape();
    } else if (!(gen.in_shape() == *shape) || !(gen.out_shape() == *shape)) {
      throw DimensionError("propagate: schedule changed dimensions");
    }
    if (opts.certify) all_dcp = all_dcp && is_dcp(gen, opts.tol).is_dcp;
    const SuperOperator step = exp_generator(gen, dt);
    map = map ? compose(step, *map) : step;
    ++p.factors;
  };

  for (long long n = 0; n < steps; ++n) push(s + static_cast<double>(n) * eps, eps);
  if (remainder > 0.0) push(s + static_cast<double>(steps) * eps, remainder);

  if (!map) {
    // t == s: identity on the schedule's space.
    const SuperOperator gen = schedule.eval(s);
    map = SuperOperator(gen.in_shape(), gen.in_shape(), linalg::identity(gen.in_shape().size()));
  }
  p.map = *map;
  if (opts.certify) p.all_generators_dcp = all_dcp;
  return p;
}

CocycleResult cocycle_check(const Propagator& ut, const Propagator& ts, const Propagator& us, double tol) {
  const auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); };
  if (!close(ut.s, ts.t) || !close(ts.s, us.s) || !close(ut.t, us.t)) {
    throw TimeMismatchError("cocycle_check: propagator times do not chain");
  }
  CocycleResult r;
  r.defect = distance(compose(ut.map, ts.map), us.map);
  r.scale = std::max(1.0, frobenius_norm(us.map));
  r.ok = r.defect <= tol * r.scale;
  return r;
}

double invertibility_check(const Propagator& p) {
  const RealVector sv = linalg::singular_values(p.map.matrix());
  const double smin = sv(sv.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / smin;
}

std::vector<ConvergenceRow> splicing_study(const GeneratorSchedule& schedule, double s, double t, double eps0,
                                           int halvings) {
  if (halvings < 1) throw std::invalid_argument("splicing_study: need at least one halving");
  std::vector<SuperOperator> maps;
  double eps = eps0;
  for (int k = 0; k <= halvings + 1; ++k) {
    maps.push_back(propagate(schedule, s, t, eps).map);
    eps *= 0.5;
  }
  std::vector<ConvergenceRow> rows;
  eps = eps0;
  for (int k = 0; k <= halvings; ++k) {
    ConvergenceRow r{eps, distance(maps[k], maps[k + 1]), 0.0};
    if (!rows.empty()) r.ratio = rows.back().difference / r.difference;
    rows.push_back(r);
    eps *= 0.5;
  }
  return rows;
}

std::vector<ConvergenceRow> euler_limit_study(const SuperOperator& generator, const std::vector<long long>& ns,
                                              const Tolerance& tol) {
  const SuperOperator reference = exp_generator(generator, 1.0);
  std::vector<ConvergenceRow> rows;
  for (long long n : ns) {
    ConvergenceRow r{1.0 / static_cast<double>(n), distance(euler_limit_exp(generator, n, tol), reference), 0.0};
    if (!rows.empty()) r.ratio = rows.back().difference / r.difference;
    rows.push_back(r);
  }
  return rows;
}

double empirical_order(const std::vector<ConvergenceRow>& rows) {
  if (rows.size() < 2) throw std::invalid_argument("empirical_order: need at least two rows");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(rows.size());
  for (const auto& r : rows) {
    const double x = std::log(r.step);
    const double y = std::log(r.difference);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace gkslkit
