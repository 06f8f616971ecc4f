#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ostream>

#include "CLI11.hpp"
#include "gkslkit/evolution.hpp"
#include "gkslkit/filtration.hpp"
#include "gkslkit/fixtures.hpp"
#include "gkslkit/io.hpp"
#include "gkslkit/linalg.hpp"

namespace gkslkit::cli {

namespace {

using io::Json;
using fixtures::Role;

constexpr std::uint64_t kDefaultSeed = 1;

struct Common {
  double rtol = 1e-9;
  double atol = 1e-12;
  std::uint64_t seed = kDefaultSeed;
  std::string json_out;

  Tolerance tol() const { return {rtol, atol}; }
};

/// Everything that went into a command, hashed into the report.
class Inputs {
 public:
  void add(const std::string& label, const std::string& content) {
    material_ += label;
    material_ += '\0';
    material_ += content;
    material_ += '\0';
  }
  std::string digest() const { return io::sha256_hex(material_); }

 private:
  std::string material_;
};

class Report {
 public:
  Report(std::string command, const Common& c) {
    j_["command"] = std::move(command);
    j_["version"] = io::kVersion;
    j_["seed"] = c.seed;
    j_["tolerances"] = {{"rtol", c.rtol}, {"atol", c.atol}};
    j_["claims"] = Json::object();
    j_["scalars"] = Json::object();
    j_["notes"] = Json::array();
  }

  void claim(const std::string& name, bool value, Evidence evidence) {
    j_["claims"][name] = {{"value", value}, {"evidence", to_string(evidence)}};
  }
  void scalar(const std::string& name, Json value) { j_["scalars"][name] = std::move(value); }
  void note(const std::string& text) { j_["notes"].push_back(text); }
  void set(const std::string& key, Json value) { j_[key] = std::move(value); }

  int finish(int code, const Inputs& inputs, const Common& c, std::ostream& out) {
    Inputs all = inputs;
    all.add("seed", std::to_string(c.seed));
    j_["inputs_sha256"] = all.digest();
    j_["exit_code"] = code;
    const std::string text = io::dump(j_);
    out << text;
    if (!c.json_out.empty()) io::write_file(c.json_out, text);
    return code;
  }

 private:
  Json j_;
};

struct Loaded {
  io::SuperOpDocument doc;
  bool builtin = false;
  std::string name;  // builtin name when builtin
};

Loaded load_map(const std::string& input, Role role, const Common& c, Inputs& inputs) {
  if (fixtures::is_builtin_uri(input)) {
    inputs.add("builtin", input);
    auto b = fixtures::resolve_builtin(fixtures::parse_builtin_uri(input), role, c.seed);
    io::Repr repr = b.kraus ? io::Repr::kraus : b.presentation ? io::Repr::gksl : io::Repr::matrix;
    return {io::SuperOpDocument{repr, std::move(b.map), std::move(b.kraus), std::move(b.presentation)}, true,
            std::move(b.name)};
  }
  const std::string text = io::read_file(input);
  inputs.add("file", text);
  return {io::parse_superop(text, c.tol()), false, {}};
}

Operator load_operator(const std::string& path, Inputs& inputs) {
  const std::string text = io::read_file(path);
  inputs.add("operator", text);
  return io::parse_operator(text);
}

double relative_residual(const SuperOperator& approx, const SuperOperator& exact) {
  const double scale = frobenius_norm(exact);
  const double diff = distance(approx, exact);
  return scale > 0.0 ? diff / scale : diff;
}

// check-cp

struct CheckCpArgs {
  std::string input;
  int restarts = 50;
  int steps = 50;
};

int cmd_check_cp(const CheckCpArgs& a, const Common& c, std::ostream& out) {
  Inputs inputs;
  Loaded in = load_map(a.input, Role::map, c, inputs);
  inputs.add("restarts", std::to_string(a.restarts) + "/" + std::to_string(a.steps));
  const SuperOperator& map = in.doc.map;
  Report r("check-cp", c);
  r.set("input", a.input);

  r.claim("dag_morphism", is_dag_morphism(map, c.tol()), Evidence::exact);
  const CpVerdict cp = is_cp(map, c.tol());
  r.scalar("choi_min_eigenvalue", cp.choi_min_eigenvalue);
  const bool by_repr = in.doc.repr == io::Repr::kraus;
  const bool holds = cp.cp || by_repr;
  if (by_repr) r.note("CP by repr: the map is given by Kraus operators");
  r.claim("cp", holds, Evidence::exact);

  if (holds) {
    r.claim("monotone_counterexample_found", false, Evidence::exact);
  } else if (!map.acts_on_square()) {
    r.note("monotone search skipped: map does not act on square operators");
  } else {
    const auto w = monotone_falsifier(map, c.seed, SearchBudget{a.restarts, a.steps}, c.tol());
    r.claim("monotone_counterexample_found", w.has_value(), Evidence::falsifier);
    if (w) {
      r.scalar("monotone_witness_min_eigenvalue", w->min_eigenvalue);
    } else {
      r.note("no positivity counterexample found; this does not prove the map monotone");
    }
  }
  return r.finish(holds ? kHolds : kFalse, inputs, c, out);
}

// kraus

struct KrausArgs {
  std::string input;
  std::string out_path;
};

int cmd_kraus(const KrausArgs& a, const Common& c, std::ostream& out) {
  Inputs inputs;
  Loaded in = load_map(a.input, Role::map, c, inputs);
  const SuperOperator& map = in.doc.map;
  Report r("kraus", c);
  r.set("input", a.input);
  const CpVerdict cp = is_cp(map, c.tol());
  r.scalar("choi_min_eigenvalue", cp.choi_min_eigenvalue);
  r.claim("cp", cp.cp, Evidence::exact);
  if (!cp.cp) return r.finish(kFalse, inputs, c, out);

  const KrausFamily family = kraus_extract(map, c.tol());
  r.scalar("kraus_count", family.operators.size());
  r.scalar("reconstruction_residual", relative_residual(kraus_assemble(family), map));
  r.claim("degenerate_spectrum", family.degenerate_spectrum, Evidence::exact);
  if (family.degenerate_spectrum) r.note("degenerate Choi spectrum: the Kraus basis within an eigenspace is not unique");
  Json ops = Json::array();
  for (const auto& k : family.operators) ops.push_back(io::matrix_to_json(k.matrix()));
  r.set("kraus", std::move(ops));
  if (!a.out_path.empty()) {
    const std::string text = family.operators.empty()
                                 ? io::serialize_superop(map, io::Repr::kraus, c.tol())
                                 : io::dump(io::kraus_to_json(family));
    io::write_file(a.out_path, text);
    r.scalar("output_sha256", io::sha256_hex(text));
  }
  return r.finish(kHolds, inputs, c, out);
}

// check-generator / minimal-form

struct GeneratorArgs {
  std::string input;
  std::string emit;
};

int cmd_check_generator(const std::string& command, const GeneratorArgs& a, const Common& c, std::ostream& out) {
  Inputs inputs;
  Loaded in = load_map(a.input, Role::generator, c, inputs);
  const SuperOperator& gen = in.doc.map;
  if (!gen.is_endomorphism()) throw DimensionError("a generator must map L(H) to itself");
  Report r(command, c);
  r.set("input", a.input);

  const DcpVerdict v = is_dcp(gen, c.tol());
  r.claim("dag_morphism_generator", v.is_dag_morphism_generator, Evidence::exact);
  r.claim("dcp", v.is_dcp, Evidence::exact);
  r.scalar("compressed_choi_min_eigenvalue", v.compressed_choi_min_eig);
  if (in.doc.presentation) r.claim("input_presentation_minimal", is_minimal(*in.doc.presentation, c.tol()), Evidence::exact);
  if (!v.is_dcp || !v.extracted) return r.finish(kFalse, inputs, c, out);

  const GkslPresentation& p = *v.extracted;
  const TraceCondition tc = trace_condition(p, c.tol());
  r.scalar("trace", std::string(to_string(tc.kind)));
  r.claim("trace_preserving", tc.kind == TraceKind::preserving, Evidence::exact);
  r.claim("trace_nonincreasing", tc.kind != TraceKind::neither, Evidence::exact);
  r.scalar("trace_defect_norm", operator_norm(tc.defect));
  const GroupVerdict g = is_cp_group_generator(gen, c.tol());
  r.claim("group", g.is_group, Evidence::exact);
  r.scalar("presentation_residual", relative_residual(assemble_generator(p, c.tol()), gen));
  r.scalar("trace_h", std::abs(p.h.trace()));
  const Vector vid = linalg::choi_vec(linalg::identity(gen.dim_in()));
  r.scalar("psi_choi_id_norm", (p.psi.choi() * vid).norm());
  r.scalar("g_operator_norm", operator_norm(p.g));
  r.scalar("h_operator_norm", operator_norm(p.h));

  if (!a.emit.empty()) {
    const std::string text = io::dump(io::presentation_to_json(p, true, c.tol()));
    io::write_file(a.emit, text);
    r.scalar("output_sha256", io::sha256_hex(text));
  }
  return r.finish(kHolds, inputs, c, out);
}

// evolve

struct EvolveArgs {
  std::string input;
  double t0 = 0.0;
  double t1 = 1.0;
  double eps = 0.01;
  std::string rho_path;
  int samples = 10;
  int halvings = 0;
  bool certify = false;
  std::string out_path;
};

int cmd_evolve(const EvolveArgs& a, const Common& c, std::ostream& out) {
  if (!(a.t0 <= a.t1)) throw ParseError("--t0 must not exceed --t1");
  if (!(a.eps > 0.0) || !std::isfinite(a.eps)) throw ParseError("--eps must be positive");
  if (a.samples < 1) throw ParseError("--samples must be positive");
  if (a.halvings < 0 || a.halvings > 12) throw ParseError("--halvings must lie in [0, 12]");

  Inputs inputs;
  GeneratorSchedule schedule;
  std::optional<std::pair<double, double>> grid;
  if (fixtures::is_builtin_uri(a.input)) {
    const auto uri = fixtures::parse_builtin_uri(a.input);
    inputs.add("builtin", a.input);
    if (uri.name == "rotating") {
      schedule = fixtures::resolve_builtin_schedule(uri);
    } else {
      schedule = GeneratorSchedule::constant(fixtures::resolve_builtin(uri, Role::generator, c.seed).map);
    }
  } else {
    const std::string text = io::read_file(a.input);
    inputs.add("file", text);
    const Json j = io::parse_json(text);
    const bool is_schedule = j.is_object() && j.contains("format") && j["format"] == io::kScheduleFormat;
    if (is_schedule) {
      const io::ScheduleDocument doc = io::schedule_from_json(j, c.seed, c.tol());
      grid = {doc.times.front(), doc.times.back()};
      schedule = doc.schedule();
    } else {
      const SuperOperator gen = io::superop_from_json(j, c.tol()).map;
      if (!gen.is_endomorphism()) throw DimensionError("a generator must map L(H) to itself");
      schedule = GeneratorSchedule::constant(gen);
    }
  }
  if (grid && (a.t0 < grid->first || a.t1 > grid->second)) {
    throw TimeMismatchError("[t0, t1] must lie within the schedule's time table");
  }

  const Eigen::Index d = schedule.eval(a.t0).dim_in();
  Operator rho = Operator::dyad(d, d, 0, 0);
  if (!a.rho_path.empty()) rho = load_operator(a.rho_path, inputs);
  if (rho.dim_in() != d || rho.dim_out() != d) throw DimensionError("rho does not match the generator dimension");

  std::ostringstream params;
  params.precision(17);
  params << a.t0 << ' ' << a.t1 << ' ' << a.eps << ' ' << a.samples << ' ' << a.halvings << ' ' << a.certify;
  inputs.add("params", params.str());

  Report r("evolve", c);
  r.set("input", a.input);
  const double trace0 = rho.trace().real();
  double trace_drift = 0.0;
  double min_eig = linalg::hermitian_eigenvalues(linalg::hermitian_part(rho.matrix()))(0);
  bool all_dcp = true;
  Json samples = Json::array();
  samples.push_back({{"t", a.t0}, {"rho", io::operator_to_json(rho)}});
  Operator current = rho;
  for (int k = 0; k < a.samples; ++k) {
    const double s = a.t0 + (a.t1 - a.t0) * static_cast<double>(k) / a.samples;
    const double t = a.t0 + (a.t1 - a.t0) * static_cast<double>(k + 1) / a.samples;
    const Propagator p = propagate(schedule, s, t, a.eps, {a.certify, c.tol()});
    if (p.all_generators_dcp) all_dcp = all_dcp && *p.all_generators_dcp;
    current = p.map.apply(current);
    trace_drift = std::max(trace_drift, std::abs(current.trace().real() - trace0));
    min_eig = std::min(min_eig, linalg::hermitian_eigenvalues(linalg::hermitian_part(current.matrix()))(0));
    samples.push_back({{"t", t}, {"rho", io::operator_to_json(current)}});
  }
  r.scalar("trace_drift", trace_drift);
  r.scalar("min_eigenvalue", min_eig);
  r.scalar("final_trace", current.trace().real());
  r.claim("positivity_preserved_on_samples", min_eig >= -(c.rtol + c.atol), Evidence::exact);
  if (a.certify) r.claim("all_generators_dcp", all_dcp, Evidence::exact);

  if (a.halvings > 0 && a.t1 > a.t0) {
    const auto rows = splicing_study(schedule, a.t0, a.t1, a.eps, a.halvings);
    Json table = Json::array();
    for (const auto& row : rows) table.push_back({{"eps", row.step}, {"difference", row.difference}, {"ratio", row.ratio}});
    r.set("convergence", std::move(table));
    bool resolved = true;
    for (const auto& row : rows) resolved = resolved && row.difference > 0.0;
    if (resolved) {
      r.scalar("empirical_order", empirical_order(rows));
    } else {
      r.note("eps-halving differences vanish: the schedule is piecewise constant on the sampled grid");
    }
  }

  if (!a.out_path.empty()) {
    const Json traj = {{"format", io::kTrajectoryFormat}, {"version", io::kVersion}, {"samples", std::move(samples)}};
    const std::string text = io::dump(traj);
    io::write_file(a.out_path, text);
    r.scalar("output_sha256", io::sha256_hex(text));
  }
  return r.finish(a.certify && !all_dcp ? kFalse : kHolds, inputs, c, out);
}

// truncate-study

struct TruncateArgs {
  std::string input;
  std::vector<long long> dims;
  double t = 1.0;
  std::string rho_path;
  std::string out_path;
};

int cmd_truncate_study(const TruncateArgs& a, const Common& c, std::ostream& out) {
  Inputs inputs;
  Loaded in = load_map(a.input, Role::generator, c, inputs);
  const SuperOperator& gen = in.doc.map;
  if (!gen.is_endomorphism()) throw DimensionError("a generator must map L(H) to itself");
  const Eigen::Index dim = gen.dim_in();
  if (!(a.t >= 0.0) || !std::isfinite(a.t)) throw ParseError("--t must be a nonnegative number");

  std::vector<Eigen::Index> dims(a.dims.begin(), a.dims.end());
  if (dims.empty()) {
    for (Eigen::Index n = 1; n <= dim; ++n) dims.push_back(n);
  }
  const Filtration f(dim, dims);

  Operator rho;
  if (a.rho_path.empty()) {
    Rng rng(c.seed);
    rho = random_density_matrix(dim, rng);
  } else {
    rho = load_operator(a.rho_path, inputs);
  }
  if (rho.dim_in() != dim || rho.dim_out() != dim) throw DimensionError("rho does not match the generator dimension");
  std::ostringstream params;
  params.precision(17);
  params << a.t;
  for (auto n : dims) params << ' ' << n;
  inputs.add("params", params.str());

  Report r("truncate-study", c);
  r.set("input", a.input);
  const DcpVerdict v = is_dcp(gen, c.tol());
  r.claim("dcp", v.is_dcp, Evidence::exact);
  r.scalar("compressed_choi_min_eigenvalue", v.compressed_choi_min_eig);
  if (!v.is_dcp) return r.finish(kFalse, inputs, c, out);

  const auto rows = truncation_study(gen, f, a.t, rho, c.tol());
  Json table = Json::array();
  bool all_cp = true;
  for (const auto& row : rows) {
    table.push_back({{"n", row.n}, {"error", row.error}, {"cp", row.cp}, {"cp_min_eigenvalue", row.cp_min_eigenvalue}});
    all_cp = all_cp && row.cp;
  }
  r.set("rows", table);
  r.claim("all_truncations_cp", all_cp, Evidence::exact);
  bool final_ok = true;
  if (rows.back().n == dim) {
    final_ok = rows.back().error <= 1e-10;
    r.claim("full_dimension_error_within_1e-10", final_ok, Evidence::exact);
  }
  r.scalar("final_error", rows.back().error);
  if (!a.out_path.empty()) {
    const Json doc = {{"format", "gksl-kit/truncation-table"}, {"version", io::kVersion}, {"rows", std::move(table)}};
    const std::string text = io::dump(doc);
    io::write_file(a.out_path, text);
    r.scalar("output_sha256", io::sha256_hex(text));
  }
  return r.finish(all_cp && final_ok ? kHolds : kFalse, inputs, c, out);
}

// fixture export

struct FixtureArgs {
  std::string uri;
  std::string repr = "matrix";
  bool generator = false;
  std::string out_path;
};

int cmd_fixture(const FixtureArgs& a, const Common& c, std::ostream& out) {
  if (!fixtures::is_builtin_uri(a.uri)) throw ParseError("fixture expects a builtin: URI");
  const auto b = fixtures::resolve_builtin(fixtures::parse_builtin_uri(a.uri),
                                           a.generator ? Role::generator : Role::map, c.seed);
  const io::Repr repr = io::parse_repr(a.repr);
  std::string text;
  try {
    if (repr == io::Repr::kraus && b.kraus) {
      text = io::dump(io::kraus_to_json(*b.kraus));
    } else if (repr == io::Repr::gksl && b.presentation) {
      text = io::dump(io::presentation_to_json(*b.presentation, true, c.tol()));
    } else {
      text = io::serialize_superop(b.map, repr, c.tol());
    }
  } catch (const NotCpError& e) {
    throw ParseError(std::string("cannot write this fixture as ") + a.repr + ": " + e.what());
  } catch (const NotDcpError& e) {
    throw ParseError(std::string("cannot write this fixture as ") + a.repr + ": " + e.what());
  } catch (const NonHermitianChoiError& e) {
    throw ParseError(std::string("cannot write this fixture as ") + a.repr + ": " + e.what());
  }
  if (a.out_path.empty()) {
    out << text;
  } else {
    io::write_file(a.out_path, text);
  }
  return kHolds;
}

std::uint64_t env_seed() {
  const char* s = std::getenv("GKSL_KIT_SEED");
  if (s == nullptr || *s == '\0') return kDefaultSeed;
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(s, &end, 10);
  if (errno != 0 || *end != '\0' || s[0] == '-') throw ParseError("GKSL_KIT_SEED must be an unsigned integer");
  return v;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Common common;
  try {
    common.seed = env_seed();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  CLI::App app{"Checks complete positivity of maps and the GKSL structure of generators.", "gksl-kit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--rtol", common.rtol, "Relative tolerance")->capture_default_str();
  app.add_option("--atol", common.atol, "Absolute tolerance")->capture_default_str();
  app.add_option("--seed", common.seed, "Seed for searches and random fixtures (default: $GKSL_KIT_SEED or 1)");
  app.add_option("--json-out", common.json_out, "Also write the report to this file");

  CheckCpArgs cp_args;
  auto* check_cp = app.add_subcommand("check-cp", "Decide complete positivity of a map");
  check_cp->add_option("input", cp_args.input, "Superoperator file or builtin: URI")->required();
  check_cp->add_option("--restarts", cp_args.restarts, "Restarts of the positivity counterexample search")
      ->check(CLI::Range(1, 1000000));
  check_cp->add_option("--steps", cp_args.steps, "Steps per restart")->check(CLI::Range(1, 100000));

  KrausArgs kraus_args;
  auto* kraus = app.add_subcommand("kraus", "Extract a Kraus family from a CP map");
  kraus->add_option("input", kraus_args.input, "Superoperator file or builtin: URI")->required();
  kraus->add_option("--out", kraus_args.out_path, "Write the Kraus family here");

  GeneratorArgs gen_args;
  auto* check_gen = app.add_subcommand("check-generator", "Decide whether a generator yields a CP semigroup");
  check_gen->add_option("input", gen_args.input, "Superoperator file or builtin: URI")->required();
  check_gen->add_option("--emit", gen_args.emit, "Write the minimal presentation here");

  GeneratorArgs min_args;
  auto* min_form = app.add_subcommand("minimal-form", "check-generator with the minimal presentation written out");
  min_form->add_option("input", min_args.input, "Superoperator file or builtin: URI")->required();
  min_form->add_option("--out,--emit", min_args.emit, "Output file")->required();

  EvolveArgs ev_args;
  auto* evolve = app.add_subcommand("evolve", "Propagate a state under a (time-dependent) generator");
  evolve->add_option("input", ev_args.input, "Schedule file, generator file or builtin: URI")->required();
  evolve->add_option("--t0", ev_args.t0, "Start time")->capture_default_str();
  evolve->add_option("--t1", ev_args.t1, "End time")->capture_default_str();
  evolve->add_option("--eps", ev_args.eps, "Splicing step")->capture_default_str();
  evolve->add_option("--rho", ev_args.rho_path, "Initial state (operator file); default |0><0|");
  evolve->add_option("--samples", ev_args.samples, "Number of trajectory samples")->capture_default_str();
  evolve->add_option("--halvings", ev_args.halvings, "Emit an eps-halving convergence table");
  evolve->add_flag("--certify", ev_args.certify, "Check every sampled generator for dCP");
  evolve->add_option("--out", ev_args.out_path, "Write the trajectory here");

  TruncateArgs tr_args;
  auto* trunc = app.add_subcommand("truncate-study", "Errors of truncated evolutions along a filtration");
  trunc->add_option("input", tr_args.input, "Generator file or builtin: URI")->required();
  trunc->add_option("--dims", tr_args.dims, "Increasing subspace dimensions (default 1..D)")->delimiter(',');
  trunc->add_option("--t", tr_args.t, "Evolution time")->capture_default_str();
  trunc->add_option("--rho", tr_args.rho_path, "State (operator file); default random from --seed");
  trunc->add_option("--out", tr_args.out_path, "Write the error table here");

  FixtureArgs fx_args;
  auto* fixture = app.add_subcommand("fixture", "Write a builtin fixture to a file");
  fixture->add_option("uri", fx_args.uri, "builtin: URI")->required();
  fixture->add_option("--repr", fx_args.repr, "matrix, choi, kraus or gksl")
      ->check(CLI::IsMember({"matrix", "choi", "kraus", "gksl"}))
      ->capture_default_str();
  fixture->add_flag("--generator", fx_args.generator, "Prefer the generator variant of the name");
  fixture->add_option("--out", fx_args.out_path, "Output file (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kHolds;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kHolds;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    common.tol().validate();
    if (check_cp->parsed()) return cmd_check_cp(cp_args, common, out);
    if (kraus->parsed()) return cmd_kraus(kraus_args, common, out);
    if (check_gen->parsed()) return cmd_check_generator("check-generator", gen_args, common, out);
    if (min_form->parsed()) return cmd_check_generator("minimal-form", min_args, common, out);
    if (evolve->parsed()) return cmd_evolve(ev_args, common, out);
    if (trunc->parsed()) return cmd_truncate_study(tr_args, common, out);
    if (fixture->parsed()) return cmd_fixture(fx_args, common, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  err << "error: no command\n";
  return kInputError;
}

}  // namespace gkslkit::cli
