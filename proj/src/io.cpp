#include "gkslkit/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace gkslkit::io {

std::string_view to_string(Repr r) noexcept {
  switch (r) {
    case Repr::matrix:
      return "matrix";
    case Repr::choi:
      return "choi";
    case Repr::kraus:
      return "kraus";
    case Repr::gksl:
      return "gksl";
  }
  return "?";
}

Repr parse_repr(std::string_view s) {
  if (s == "matrix") return Repr::matrix;
  if (s == "choi") return Repr::choi;
  if (s == "kraus") return Repr::kraus;
  if (s == "gksl") return Repr::gksl;
  throw ParseError("unknown repr '" + std::string(s) + "'");
}

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw ParseError("expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
  return *it;
}

std::string string_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) throw ParseError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

Eigen::Index dim_value(const Json& v, const char* what) {
  if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 4096) {
    throw ParseError(std::string(what) + " must be a positive integer");
  }
  return static_cast<Eigen::Index>(v.get<long long>());
}

double finite_number(const Json& v) {
  if (!v.is_number()) throw ParseError("matrix entry components must be numbers");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ParseError("matrix entries must be finite");
  return x;
}

void expect_header(const Json& j, std::string_view format) {
  if (string_field(j, "format") != format) {
    throw ParseError("expected format '" + std::string(format) + "', got '" + string_field(j, "format") + "'");
  }
  if (string_field(j, "version") != kVersion) {
    throw ParseError("unsupported version '" + string_field(j, "version") + "'");
  }
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
  }
  return out;
}

Matrix matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols) {
  if (!j.is_array()) throw ParseError("entries must be an array");
  if (static_cast<Eigen::Index>(j.size()) != rows * cols) {
    std::ostringstream os;
    os << "expected " << rows * cols << " entries, got " << j.size();
    throw ParseError(os.str());
  }
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows * cols; ++i) {
    const Json& pair = j[static_cast<std::size_t>(i)];
    if (!pair.is_array() || pair.size() != 2) throw ParseError("each entry must be a [re, im] pair");
    m(i / cols, i % cols) = cplx(finite_number(pair[0]), finite_number(pair[1]));
  }
  return m;
}

Json operator_to_json(const Operator& a) {
  return {{"format", kOperatorFormat},
          {"version", kVersion},
          {"dims", {a.dim_out(), a.dim_in()}},
          {"entries", matrix_to_json(a.matrix())}};
}

Operator operator_from_json(const Json& j) {
  expect_header(j, kOperatorFormat);
  const Json& dims = field(j, "dims");
  if (!dims.is_array() || dims.size() != 2) throw ParseError("dims must be [rows, cols]");
  const Eigen::Index rows = dim_value(dims[0], "dims[0]");
  const Eigen::Index cols = dim_value(dims[1], "dims[1]");
  return Operator(matrix_from_json(field(j, "entries"), rows, cols));
}

std::string serialize_operator(const Operator& a) { return dump(operator_to_json(a)); }
Operator parse_operator(std::string_view text) { return operator_from_json(parse_json(text)); }

namespace {

Json superop_header(Repr repr, Eigen::Index dim_in, Eigen::Index dim_out) {
  return {{"format", kSuperOpFormat},
          {"version", kVersion},
          {"convention", kConvention},
          {"repr", to_string(repr)},
          {"dims", {{"in", dim_in}, {"out", dim_out}}}};
}

void require_square_maps(const SuperOperator& map) {
  if (!map.acts_on_square()) throw DimensionError("file formats cover maps between square operators only");
}

}  // namespace

Json kraus_to_json(const KrausFamily& family) {
  if (family.operators.empty()) throw DimensionError("kraus_to_json: empty family");
  const Eigen::Index din = family.operators.front().dim_in();
  const Eigen::Index dout = family.operators.front().dim_out();
  Json j = superop_header(Repr::kraus, din, dout);
  Json ops = Json::array();
  for (const auto& a : family.operators) {
    if (a.dim_in() != din || a.dim_out() != dout) throw DimensionError("kraus_to_json: mixed shapes");
    ops.push_back(matrix_to_json(a.matrix()));
  }
  j["kraus"] = std::move(ops);
  return j;
}

Json presentation_to_json(const GkslPresentation& p, bool psi_as_kraus, const Tolerance& tol) {
  const Eigen::Index d = p.g.dim_in();
  Json j = superop_header(Repr::gksl, d, d);
  Json psi;
  if (psi_as_kraus && is_cp(p.psi, tol).cp) {
    const KrausFamily k = kraus_extract(p.psi, tol);
    psi = k.operators.empty() ? superop_to_json(p.psi, Repr::choi, tol) : kraus_to_json(k);
  } else {
    psi = superop_to_json(p.psi, Repr::choi, tol);
  }
  j["psi"] = std::move(psi);
  j["g"] = matrix_to_json(p.g.matrix());
  j["h"] = matrix_to_json(p.h.matrix());
  return j;
}

Json superop_to_json(const SuperOperator& map, Repr repr, const Tolerance& tol) {
  require_square_maps(map);
  switch (repr) {
    case Repr::matrix: {
      Json j = superop_header(repr, map.dim_in(), map.dim_out());
      j["matrix"] = matrix_to_json(map.matrix());
      return j;
    }
    case Repr::choi: {
      Json j = superop_header(repr, map.dim_in(), map.dim_out());
      j["choi"] = matrix_to_json(map.choi());
      return j;
    }
    case Repr::kraus: {
      const KrausFamily k = kraus_extract(map, tol);
      if (k.operators.empty()) {
        // The zero map has no Kraus operators; one zero operator keeps the shape.
        return kraus_to_json(KrausFamily{{Operator::zero(map.dim_out(), map.dim_in())}, false});
      }
      return kraus_to_json(k);
    }
    case Repr::gksl:
      if (!map.is_endomorphism()) throw DimensionError("gksl repr needs a map from L(H) to itself");
      return presentation_to_json(minimal_presentation(map, tol), true, tol);
  }
  throw ParseError("unknown repr");
}

SuperOpDocument superop_from_json(const Json& j, const Tolerance& tol) {
  expect_header(j, kSuperOpFormat);
  if (string_field(j, "convention") != kConvention) {
    throw ParseError("unsupported convention '" + string_field(j, "convention") + "'");
  }
  const Repr repr = parse_repr(string_field(j, "repr"));
  const Json& dims = field(j, "dims");
  const Eigen::Index din = dim_value(field(dims, "in"), "dims.in");
  const Eigen::Index dout = dim_value(field(dims, "out"), "dims.out");
  switch (repr) {
    case Repr::matrix:
      return {repr, SuperOperator(din, dout, matrix_from_json(field(j, "matrix"), dout * dout, din * din)),
              std::nullopt, std::nullopt};
    case Repr::choi: {
      const Matrix c = matrix_from_json(field(j, "choi"), din * dout, din * dout);
      return {repr, jamiolkowski_inv(ChoiMatrix(din, dout, c)), std::nullopt, std::nullopt};
    }
    case Repr::kraus: {
      const Json& ops = field(j, "kraus");
      if (!ops.is_array() || ops.empty()) throw ParseError("kraus must be a non-empty array");
      KrausFamily family;
      for (const auto& op : ops) family.operators.emplace_back(matrix_from_json(op, dout, din));
      SuperOperator map = kraus_assemble(family);
      return {repr, std::move(map), std::move(family), std::nullopt};
    }
    case Repr::gksl: {
      if (din != dout) throw ParseError("gksl repr needs dims.in == dims.out");
      const SuperOpDocument psi = superop_from_json(field(j, "psi"), tol);
      if (psi.repr != Repr::kraus && psi.repr != Repr::choi) throw ParseError("psi must use the kraus or choi repr");
      if (psi.map.dim_in() != din || psi.map.dim_out() != din) throw ParseError("psi dims do not match");
      GkslPresentation p{psi.map, Operator(matrix_from_json(field(j, "g"), din, din)),
                         Operator(matrix_from_json(field(j, "h"), din, din)), false};
      SuperOperator map = [&] {
        try {
          return assemble_generator(p, tol);
        } catch (const NotHermitianError& e) {
          throw ParseError(std::string("gksl payload: ") + e.what());
        } catch (const NotCpError& e) {
          throw ParseError(std::string("gksl payload: ") + e.what());
        }
      }();
      p.minimal = is_minimal(p, tol);
      return {repr, std::move(map), std::nullopt, std::move(p)};
    }
  }
  throw ParseError("unknown repr");
}

std::string serialize_superop(const SuperOperator& map, Repr repr, const Tolerance& tol) {
  return dump(superop_to_json(map, repr, tol));
}

SuperOpDocument parse_superop(std::string_view text, const Tolerance& tol) {
  return superop_from_json(parse_json(text), tol);
}

GeneratorSchedule ScheduleDocument::schedule() const {
  GeneratorSchedule s;
  s.t_start = -1e300;
  s.t_end = 1e300;
  const std::vector<double> t = times;
  const std::vector<SuperOperator> g = generators;
  s.eval = [t, g](double time) {
    // Piece k covers [t[k], t[k+1]).
    const auto it = std::upper_bound(t.begin() + 1, t.end() - 1, time);
    return g[static_cast<std::size_t>(it - (t.begin() + 1))];
  };
  return s;
}

ScheduleDocument schedule_from_json(const Json& j, std::uint64_t default_seed, const Tolerance& tol) {
  expect_header(j, kScheduleFormat);
  const Json& times = field(j, "times");
  const Json& gens = field(j, "generators");
  if (!times.is_array() || times.size() < 2) throw ParseError("times must list at least two values");
  if (!gens.is_array() || gens.size() + 1 != times.size()) {
    throw ParseError("schedule needs exactly one generator per interval (len(times) - 1)");
  }
  ScheduleDocument doc;
  for (const auto& t : times) {
    doc.times.push_back(finite_number(t));
    if (doc.times.size() > 1 && !(doc.times.back() > doc.times[doc.times.size() - 2])) {
      throw ParseError("schedule times must strictly increase");
    }
  }
  for (const auto& g : gens) {
    if (g.is_string()) {
      const auto uri = fixtures::parse_builtin_uri(g.get<std::string>());
      doc.generators.push_back(fixtures::resolve_builtin(uri, fixtures::Role::generator, default_seed).map);
    } else {
      doc.generators.push_back(superop_from_json(g, tol).map);
    }
    const SuperOperator& last = doc.generators.back();
    if (!last.is_endomorphism() || last.dim_in() != doc.generators.front().dim_in()) {
      throw ParseError("schedule generators must share one square shape");
    }
  }
  return doc;
}

Json schedule_to_json(const std::vector<double>& times, const std::vector<SuperOperator>& generators) {
  Json gens = Json::array();
  for (const auto& g : generators) gens.push_back(superop_to_json(g, Repr::matrix));
  return {{"format", kScheduleFormat}, {"version", kVersion}, {"times", times}, {"generators", std::move(gens)}};
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::exception& e) {
    // parse errors, and number overflow (out_of_range) for literals like 1e999
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ParseError("error while writing '" + path + "'");
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

}  // namespace gkslkit::io
