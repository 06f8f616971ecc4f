#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "gkslkit/gksl.hpp"

namespace gkslkit {

/// exp(t L) by scaling and squaring.
SuperOperator exp_generator(const SuperOperator& generator, double t);

struct EulerFactor {
  SuperOperator factor;  // Id + (1/n)(L + eta * Pi), Pi(rho) = Tr(rho) Id
  double eta = 0.0;      // shift that makes |Id><Id| + (1/n)(J(L) + eta) PSD
};

/// One factor of the Euler-limit construction. Its Choi matrix is PSD by
/// construction, so the factor is CP.
EulerFactor euler_factor(const SuperOperator& generator, long long n);

/// [Id + (1/n)(L + eta(1/n) Pi)]^n. Converges to exp(L) as n grows.
/// Throws NotDcpError unless the generator is dCP.
SuperOperator euler_limit_exp(const SuperOperator& generator, long long n, const Tolerance& tol = {});

/// Time-dependent generator on the open interval (t_start, t_end). eval must
/// be a pure function of t and return maps of fixed shape.
struct GeneratorSchedule {
  double t_start = 0.0;
  double t_end = 1.0;
  std::function<SuperOperator(double)> eval;
  std::optional<double> continuity_modulus;

  void validate() const;
  static GeneratorSchedule constant(const SuperOperator& generator, double t_start = -1e300, double t_end = 1e300);
};

/// Two-time evolution map Lambda(t, s).
struct Propagator {
  double s = 0.0;
  double t = 0.0;
  SuperOperator map;
  int factors = 0;
  /// Set when propagate() was asked to certify: every sampled generator dCP.
  std::optional<bool> all_generators_dcp;
};

struct PropagateOptions {
  bool certify = false;
  Tolerance tol{};
};

/// Lambda_eps(t, s) = exp[(t - t_N) L(t_N)] ... exp[eps L(t_0)], t_n = s + n eps,
/// with the generator sampled at the left end of each step.
Propagator propagate(const GeneratorSchedule& schedule, double s, double t, double eps,
                     const PropagateOptions& opts = {});

struct CocycleResult {
  bool ok = false;
  double defect = 0.0;  // ||P1 P2 - P3||_F
  double scale = 1.0;   // max(1, ||P3||_F)
};

/// Checks Lambda(u, t) Lambda(t, s) = Lambda(u, s). A splicing defect is a
/// result, not an error; mismatched times throw TimeMismatchError.
CocycleResult cocycle_check(const Propagator& ut, const Propagator& ts, const Propagator& us, double tol);

/// sigma_max / sigma_min of the propagator's matrix.
double invertibility_check(const Propagator& p);

struct ConvergenceRow {
  double step = 0.0;        // eps, or 1/n for the Euler limit
  double difference = 0.0;  // ||X(step) - X(step/2)||_F (self-convergence) or error vs reference
  double ratio = 0.0;       // previous difference / this difference (0 for the first row)
};

/// Self-convergence of propagate() under eps-halving: row k compares eps_k and eps_k / 2.
std::vector<ConvergenceRow> splicing_study(const GeneratorSchedule& schedule, double s, double t, double eps0,
                                           int halvings);

/// ||euler_limit_exp(L, n) - exp(L)||_F for the given n.
std::vector<ConvergenceRow> euler_limit_study(const SuperOperator& generator, const std::vector<long long>& ns,
                                              const Tolerance& tol = {});

/// Least-squares slope of log(difference) against log(step).
double empirical_order(const std::vector<ConvergenceRow>& rows);

}  // namespace gkslkit
