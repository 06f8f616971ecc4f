// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "gkslkit/evolution.hpp"
#include "gkslkit/filtration.hpp"
#include "gkslkit/fixtures.hpp"
#include "gkslkit/io.hpp"
#include "gkslkit/linalg.hpp"
#include "gkslkit/properties.hpp"
#include "oracles.hpp"

using namespace gkslkit;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double rel(double num, double den) { return num / std::max(den, 1e-300); }

fixtures::RandomPresentationOptions trace_opts(fixtures::RandomTrace t, int kraus) {
  fixtures::RandomPresentationOptions o;
  o.trace = t;
  o.kraus_count = kraus;
  return o;
}

Outcome transpose_counterexample() {
  Outcome o;
  const SuperOperator t = transpose_map(2);
  Matrix tm(2, 2);
  tm << 0.0, 1.0, -1.0, 0.0;
  const cplx q = choi_quadratic_form(t, Operator(tm));
  o.require(std::abs(q - cplx(-2.0)) <= 1e-12, "<T, J T> = " + fmt(q.real()));

  // Oracle Choi matrix built from the definition of the transpose.
  const oracle::M c = oracle::choi([](const oracle::M& x) { return oracle::M(x.transpose()); }, 2, 2);
  oracle::V vt(4);
  for (int m = 0; m < 2; ++m)
    for (int k = 0; k < 2; ++k) vt(m * 2 + k) = tm(m, k);
  const cplx q_oracle = vt.dot(c * vt);
  o.require(std::abs(q_oracle - cplx(-2.0)) <= 1e-12, "oracle form = " + fmt(q_oracle.real()));

  const CpVerdict v = is_cp(t);
  o.require(!v.cp, "transpose reported CP");
  o.require(std::abs(v.choi_min_eigenvalue + 1.0) <= 1e-12, "lambda_min = " + fmt(v.choi_min_eigenvalue));
  o.require(std::abs(oracle::min_eigenvalue(c) + 1.0) <= 1e-12, "oracle lambda_min");
  const auto w = monotone_falsifier(t, 1, {100, 100});
  o.require(!w.has_value(), "monotone falsifier reported a witness for a positive map");
  if (o.pass) o.detail = "<T,JT> = -2, lambda_min = -1, no monotone witness in 1e4 trials";
  return o;
}

Outcome jamiolkowski_involution() {
  Outcome o;
  Rng rng(2);
  double worst_inv = 0.0, worst_ip = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Eigen::Index d = 2 + i % 3;
    const SuperOperator a = fixtures::random_superoperator(d, d, rng);
    const SuperOperator b = fixtures::random_superoperator(d, d, rng);
    const SuperOperator ja = jamiolkowski_transform(a);
    worst_inv = std::max(worst_inv, rel(distance(jamiolkowski_transform(ja), a), frobenius_norm(a)));
    const cplx lhs = hs_inner(ja, jamiolkowski_transform(b));
    const cplx rhs = hs_inner(a, b);
    worst_ip = std::max(worst_ip, rel(std::abs(lhs - rhs), frobenius_norm(a) * frobenius_norm(b)));
  }
  o.require(worst_inv <= 1e-12, "involution defect " + fmt(worst_inv));
  o.require(worst_ip <= 1e-12, "inner-product defect " + fmt(worst_ip));
  o.detail = o.pass ? "max involution defect " + fmt(worst_inv) + ", max inner-product defect " + fmt(worst_ip)
                    : o.detail;
  return o;
}

Outcome kraus_round_trip() {
  Outcome o;
  Rng rng(3);
  double worst = 0.0;
  std::size_t max_count = 0;
  for (int i = 0; i < 100; ++i) {
    const Eigen::Index d = 2 + i % 2;
    const int count = 1 + static_cast<int>(i % (d * d + 2));
    const SuperOperator map = fixtures::random_cp_map(d, count, rng, i % 2 == 0);
    const KrausFamily k = kraus_extract(map);
    worst = std::max(worst, rel(distance(kraus_assemble(k), map), frobenius_norm(map)));
    o.require(static_cast<Eigen::Index>(k.operators.size()) <= d * d, "Kraus count above d^2");
    max_count = std::max(max_count, k.operators.size());
  }
  o.require(worst <= 1e-10, "residual " + fmt(worst));
  if (o.pass) o.detail = "max relative residual " + fmt(worst) + ", max Kraus count " + std::to_string(max_count);
  return o;
}

Outcome generation_forward() {
  Outcome o;
  Rng rng(4);
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 100; ++i) {
    const Eigen::Index d = 2 + i % 2;
    const GkslPresentation p =
        fixtures::random_minimal_presentation(d, rng, trace_opts(fixtures::RandomTrace::nonincreasing, 1 + i % 4));
    const SuperOperator l = assemble_generator(p);
    for (double t : {0.01, 0.1, 1.0, 10.0}) {
      const double m = oracle::min_eigenvalue(exp_generator(l, t).choi());
      worst = std::min(worst, m);
    }
  }
  o.require(worst >= -1e-9, "min Choi eigenvalue " + fmt(worst));
  if (o.pass) o.detail = "min Choi eigenvalue over 400 propagators " + fmt(worst);
  return o;
}

Outcome generation_reverse() {
  Outcome o;
  Rng rng(5);
  double worst_rt = 0.0, worst_trh = 0.0, worst_psi = 0.0;
  const fixtures::RandomTrace kinds[] = {fixtures::RandomTrace::preserving, fixtures::RandomTrace::nonincreasing,
                                         fixtures::RandomTrace::arbitrary};
  for (int i = 0; i < 100; ++i) {
    const Eigen::Index d = 2 + i % 2;
    const SuperOperator l = fixtures::random_dcp_generator(d, rng, trace_opts(kinds[i % 3], 1 + i % 4));
    const GkslPresentation m = minimal_presentation(l);
    worst_rt = std::max(worst_rt, rel(distance(assemble_generator(m), l), frobenius_norm(l)));
    worst_trh = std::max(worst_trh, std::abs(m.h.trace()));
    const oracle::V vid = Eigen::Map<const oracle::V>(oracle::M(oracle::M::Identity(d, d)).data(), d * d);
    worst_psi = std::max(worst_psi, (oracle::M(m.psi.choi()) * vid).norm());
  }
  o.require(worst_rt <= 1e-10, "round trip " + fmt(worst_rt));
  o.require(worst_trh <= 1e-12, "|Tr H| " + fmt(worst_trh));
  o.require(worst_psi <= 1e-10, "|Choi(Psi) vec(Id)| " + fmt(worst_psi));
  if (o.pass)
    o.detail = "round trip " + fmt(worst_rt) + ", |Tr H| " + fmt(worst_trh) + ", |Choi(Psi) vId| " + fmt(worst_psi);
  return o;
}

Outcome trace_conditions() {
  Outcome o;
  Rng rng(6);
  std::vector<SuperOperator> tp{fixtures::amplitude_damping_generator(1.0), fixtures::depolarizing_generator(3, 0.7),
                                fixtures::dephasing_generator(2, 1.3),
                                fixtures::commutator_generator(fixtures::reference_hamiltonian(3))};
  std::vector<GkslPresentation> tp_presentations;
  for (int i = 0; i < 6; ++i) {
    tp_presentations.push_back(fixtures::random_minimal_presentation(
        2 + i % 2, rng, trace_opts(fixtures::RandomTrace::preserving, 1 + i % 3)));
    tp.push_back(assemble_generator(tp_presentations.back()));
  }
  double drift = 0.0;
  for (const auto& l : tp) {
    o.require(trace_condition(minimal_presentation(l)).kind == TraceKind::preserving, "fixture not classified TP");
    for (int s = 0; s < 3; ++s) {
      const Operator rho = random_density_matrix(l.dim_in(), rng);
      for (double t : {0.1, 1.0, 5.0, 10.0}) drift = std::max(drift, std::abs(exp_generator(l, t).apply(rho).trace() - 1.0));
    }
  }
  o.require(drift <= 1e-9, "trace drift " + fmt(drift));

  // Shifted: G + s Id with s > 0 makes the trace decay like exp(-2 s t).
  std::vector<GkslPresentation> shifted;
  shifted.push_back(fixtures::amplitude_damping_presentation(1.0));
  for (const auto& p : tp_presentations) shifted.push_back(p);
  int decreasing = 0;
  for (auto p : shifted) {
    p.g += cplx(0.1) * Operator::identity(p.g.dim_in());
    o.require(trace_condition(p).kind == TraceKind::nonincreasing, "shifted generator not classified nonincreasing");
    const SuperOperator l = assemble_generator(p);
    const Operator rho = random_density_matrix(l.dim_in(), rng);
    double prev = 1.0;
    bool strict = true;
    for (double t : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
      const double tr = exp_generator(l, t).apply(rho).trace().real();
      strict = strict && tr < prev;
      prev = tr;
    }
    o.require(strict, "trace not strictly decreasing");
    decreasing += strict ? 1 : 0;
  }
  if (o.pass)
    o.detail = "max drift " + fmt(drift) + " over " + std::to_string(tp.size()) + " TP generators; " +
               std::to_string(decreasing) + " shifted generators strictly decreasing";
  return o;
}

Outcome lindblad_trick() {
  Outcome o;
  Rng rng(7);
  double worst = 0.0, worst_sigma = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Eigen::Index d = 2 + i % 2;
    const GkslPresentation p =
        fixtures::random_minimal_presentation(d, rng, trace_opts(fixtures::RandomTrace::nonincreasing, 1 + i % 3));
    const SuperOperator l = assemble_generator(p);
    const Operator closed = lindblad_trick_average(l, minimal_presentation(l));
    const oracle::M g = p.g.matrix();
    const oracle::M expected =
        -g - (g.trace() / static_cast<double>(d)) * oracle::M::Identity(d, d) - oracle::cd(0.0, 1.0) * oracle::M(p.h.matrix());
    worst = std::max(worst, (oracle::M(closed.matrix()) - expected).norm());
    const MonteCarloEstimate mc = lindblad_trick_average_mc(l, 10000, 100 + static_cast<std::uint64_t>(i));
    worst_sigma = std::max(worst_sigma, frobenius_norm(mc.mean - closed) / mc.aggregate_std_error);
  }
  o.require(worst <= 1e-10, "closed form defect " + fmt(worst));
  o.require(worst_sigma <= 3.0, "Monte-Carlo deviation " + fmt(worst_sigma) + " sigma");
  if (o.pass) o.detail = "closed form defect " + fmt(worst) + ", max MC deviation " + fmt(worst_sigma) + " sigma";
  return o;
}

Outcome euler_limit() {
  Outcome o;
  const SuperOperator l = fixtures::amplitude_damping_generator(1.0);
  std::vector<long long> ns;
  for (long long n = 16; n <= 1024; n *= 2) ns.push_back(n);
  const auto rows = euler_limit_study(l, ns);
  for (std::size_t i = 1; i < rows.size(); ++i) o.require(rows[i].difference < rows[i - 1].difference, "not decreasing");
  const double order = empirical_order(rows);
  o.require(order >= 0.7 && order <= 1.3, "order " + fmt(order));
  const EulerFactor f = euler_factor(l, 16);
  o.require(is_cp(f.factor).cp, "factor at n = 16 not CP");
  o.require(oracle::min_eigenvalue(f.factor.choi()) >= -1e-12, "oracle: factor Choi not PSD");
  if (o.pass)
    o.detail = "error " + fmt(rows.front().difference) + " -> " + fmt(rows.back().difference) + ", order " + fmt(order);
  return o;
}

Outcome splicing() {
  Outcome o;
  const GeneratorSchedule sched = fixtures::rotating_schedule(1.0, 0.5);
  const auto rows = splicing_study(sched, 0.0, 2.0, 0.1, 4);
  std::string ratios;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    o.require(rows[i].ratio >= 1.6 && rows[i].ratio <= 2.4, "ratio " + fmt(rows[i].ratio));
    ratios += (i > 1 ? "," : "") + fmt(rows[i].ratio);
  }
  o.require(rows.size() == 5, "expected 4 halvings");

  double worst_cocycle = 0.0;
  const double eps = 1.0 / 16.0;
  const double cuts[][3] = {{0.0, 0.5, 1.0}, {0.25, 1.0, 2.0}, {-1.0, 0.0, 0.75}};
  for (const auto& c : cuts) {
    const CocycleResult r = cocycle_check(propagate(sched, c[1], c[2], eps), propagate(sched, c[0], c[1], eps),
                                          propagate(sched, c[0], c[2], eps), 1e-10);
    worst_cocycle = std::max(worst_cocycle, r.defect / r.scale);
    o.require(r.ok, "cocycle defect " + fmt(r.defect));
  }

  Rng rng(9);
  double worst_const = 0.0;
  for (int i = 0; i < 5; ++i) {
    const SuperOperator l = fixtures::random_dcp_generator(2, rng);
    const Propagator p = propagate(GeneratorSchedule::constant(l), 0.0, 1.0 + 0.3 * i, 0.07);
    const oracle::M ref = oracle::expm(oracle::M(l.matrix()) * (1.0 + 0.3 * i));
    worst_const = std::max(worst_const, (oracle::M(p.map.matrix()) - ref).norm() / std::max(1.0, ref.norm()));
  }
  o.require(worst_const <= 1e-12, "constant schedule defect " + fmt(worst_const));
  if (o.pass)
    o.detail = "ratios [" + ratios + "], cocycle " + fmt(worst_cocycle) + ", constant schedule " + fmt(worst_const);
  return o;
}

Outcome filtration() {
  Outcome o;
  Rng rng(10);
  const Eigen::Index dim = 16;
  const SuperOperator l = fixtures::random_dcp_generator(dim, rng);
  std::vector<Eigen::Index> dims;
  for (Eigen::Index n = 1; n <= dim; ++n) dims.push_back(n);
  const Filtration f(dim, dims);
  const auto rows = truncation_study(l, f, 1.0, random_density_matrix(dim, rng));
  const double e4 = rows[3].error;
  const double ed = rows.back().error;
  o.require(ed <= 1e-10, "e_D = " + fmt(ed));
  for (const auto& r : rows) {
    if (r.n >= 8) o.require(r.error <= e4, "e_" + std::to_string(r.n) + " = " + fmt(r.error) + " > e_4 = " + fmt(e4));
    o.require(r.cp, "truncation n = " + std::to_string(r.n) + " not CP (" + fmt(r.cp_min_eigenvalue) + ")");
  }
  bool rejected = false;
  try {
    projective_reconstruction(diverging_diagonal_sequence(f), f, 10.0);
  } catch (const NormBoundViolatedError& e) {
    rejected = e.n() == 11;
  }
  o.require(rejected, "diverging diagonal sequence not rejected at n = 11");
  if (o.pass) o.detail = "e_4 = " + fmt(e4) + ", e_8 = " + fmt(rows[7].error) + ", e_D = " + fmt(ed);
  return o;
}

struct CliRun {
  int code;
  std::string out;
};

CliRun cli_run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str()};
}

Outcome cli_replay() {
  Outcome o;
  int commands = 0;
  auto check = [&](const std::vector<std::string>& args, int expected) {
    const CliRun a = cli_run(args);
    const CliRun b = cli_run(args);
    ++commands;
    std::string line;
    for (const auto& s : args) line += s + " ";
    o.require(a.out == b.out, "report differs on replay: " + line);
    o.require(a.code == expected, line + "exited " + std::to_string(a.code) + ", expected " + std::to_string(expected));
  };
  for (const auto& name : fixtures::builtin_names()) {
    const std::string uri = "builtin:" + name;
    const auto as_map = fixtures::resolve_builtin(fixtures::parse_builtin_uri(uri), fixtures::Role::map, 5);
    const auto as_gen = fixtures::resolve_builtin(fixtures::parse_builtin_uri(uri), fixtures::Role::generator, 5);
    const bool cp = is_cp(as_map.map).cp;
    check({"--seed", "5", "check-cp", uri, "--restarts", "10", "--steps", "20"}, cp ? cli::kHolds : cli::kFalse);
    check({"--seed", "5", "kraus", uri}, cp ? cli::kHolds : cli::kFalse);
    check({"--seed", "5", "check-generator", uri}, is_dcp(as_gen.map).is_dcp ? cli::kHolds : cli::kFalse);
  }
  check({"--seed", "5", "evolve", "builtin:rotating", "--t1", "1", "--eps", "0.1", "--certify"}, cli::kHolds);
  check({"--seed", "5", "evolve", "builtin:transpose-minus-identity", "--t1", "0.2", "--certify"}, cli::kFalse);
  check({"--seed", "5", "truncate-study", "builtin:random-dcp?d=4"}, cli::kHolds);
  check({"--seed", "5", "truncate-study", "builtin:transpose-minus-identity"}, cli::kFalse);
  check({"--seed", "5", "check-cp", "builtin:no-such-map"}, cli::kInputError);
  check({"--seed", "5", "check-cp", "builtin:depolarizing?p=x"}, cli::kInputError);
  check({"--seed", "5", "check-cp", "/nonexistent/map.json"}, cli::kInputError);
  if (o.pass) o.detail = std::to_string(commands) + " commands replayed byte-identically with expected exit codes";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "transpose counterexample", transpose_counterexample},
      {2, "Jamiolkowski involution and unitarity", jamiolkowski_involution},
      {3, "Choi-Kraus round trip", kraus_round_trip},
      {4, "generation: minimal triples give CP semigroups", generation_forward},
      {5, "generation: dCP generators have minimal presentations", generation_reverse},
      {6, "trace conditions", trace_conditions},
      {7, "Lindblad trick average", lindblad_trick},
      {8, "Euler-limit construction", euler_limit},
      {9, "semigroupoid splicing", splicing},
      {10, "filtration convergence", filtration},
      {11, "CLI replay and exit codes", cli_replay},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d: %s: %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", c.number, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
