#include "gkslkit/fixtures.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <set>

#include "gkslkit/linalg.hpp"

namespace gkslkit::fixtures {

SuperOperator identity_channel(Eigen::Index d) { return SuperOperator::identity(d); }

SuperOperator depolarizing_channel(Eigen::Index d, double p) {
  return cplx(1.0 - p) * SuperOperator::identity(d) +
         cplx(p / static_cast<double>(d)) * SuperOperator::trace_to_identity(d);
}

SuperOperator dephasing_channel(Eigen::Index d, double p) {
  SuperOperator pinch = SuperOperator::zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const Operator proj = Operator::dyad(d, d, k, k);
    pinch += sandwich(proj, proj);
  }
  return cplx(1.0 - p) * SuperOperator::identity(d) + cplx(p) * pinch;
}

KrausFamily amplitude_damping_kraus(double gamma) {
  RealVector diag(2);
  diag << 1.0, std::sqrt(1.0 - gamma);
  KrausFamily f;
  f.operators.push_back(Operator::diagonal(diag));
  f.operators.push_back(cplx(std::sqrt(gamma)) * Operator::dyad(2, 2, 0, 1));
  return f;
}

SuperOperator amplitude_damping_channel(double gamma) { return kraus_assemble(amplitude_damping_kraus(gamma)); }

GkslPresentation amplitude_damping_presentation(double gamma) {
  const Operator s = Operator::dyad(2, 2, 0, 1);
  GkslPresentation p{cplx(gamma) * sandwich(s, s.dagger()), cplx(gamma / 2.0) * (s.dagger() * s),
                     Operator::zero(2, 2), true};
  return p;
}

SuperOperator amplitude_damping_generator(double gamma) {
  return assemble_generator(amplitude_damping_presentation(gamma));
}

SuperOperator depolarizing_generator(Eigen::Index d, double rate) {
  return cplx(rate) * (cplx(1.0 / static_cast<double>(d)) * SuperOperator::trace_to_identity(d) -
                       SuperOperator::identity(d));
}

SuperOperator dephasing_generator(Eigen::Index d, double rate) {
  return cplx(rate) * (dephasing_channel(d, 1.0) - SuperOperator::identity(d));
}

Operator reference_hamiltonian(Eigen::Index d) {
  Matrix h = Matrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    h(k, k) = static_cast<double>(k);
    if (k + 1 < d) h(k, k + 1) = h(k + 1, k) = 0.5;
  }
  return Operator(h);
}

SuperOperator commutator_generator(const Operator& h) { return cplx(0.0, -1.0) * commutator(h); }

SuperOperator transpose_minus_identity(Eigen::Index d) { return transpose_map(d) - SuperOperator::identity(d); }

namespace {

Operator inverse_sqrt_psd(const Operator& s) {
  const auto eig = linalg::hermitian_eigen(s.matrix());
  RealVector inv(eig.values.size());
  for (Eigen::Index i = 0; i < inv.size(); ++i) inv(i) = 1.0 / std::sqrt(eig.values(i));
  return Operator(eig.vectors * Operator::diagonal(inv).matrix() * eig.vectors.adjoint());
}

}  // namespace

GkslPresentation random_minimal_presentation(Eigen::Index d, Rng& rng, const RandomPresentationOptions& opts) {
  if (d < 1) throw DimensionError("random_minimal_presentation: d must be positive");
  const double scale = opts.psi_scale / std::sqrt(static_cast<double>(d));
  std::vector<Operator> kraus;
  Operator s = Operator::zero(d, d);
  for (int k = 0; k < opts.kraus_count; ++k) {
    kraus.push_back(cplx(scale) * traceless_projection(random_ginibre(d, d, rng)));
    s += kraus.back().dagger() * kraus.back();
  }
  GkslPresentation p{kraus_assemble(kraus), Operator::zero(d, d), Operator::zero(d, d), true};
  p.h = cplx(opts.h_scale) * traceless_projection(random_hermitian(d, rng));
  switch (opts.trace) {
    case RandomTrace::preserving:
      p.g = cplx(0.5) * s;
      break;
    case RandomTrace::nonincreasing:
      p.g = cplx(0.5) * s + cplx(opts.excess) * random_density_matrix(d, rng);
      break;
    case RandomTrace::arbitrary:
      p.g = random_hermitian(d, rng);
      break;
  }
  // Remove rounding noise so the presentation is exactly hermitian.
  p.g = Operator(linalg::hermitian_part(p.g.matrix()));
  p.h = Operator(linalg::hermitian_part(p.h.matrix()));
  return p;
}

SuperOperator random_dcp_generator(Eigen::Index d, Rng& rng, const RandomPresentationOptions& opts) {
  return assemble_generator(random_minimal_presentation(d, rng, opts));
}

KrausFamily random_kraus_family(Eigen::Index d, int count, Rng& rng, bool trace_preserving) {
  if (d < 1 || count < 1) throw DimensionError("random_kraus_family: d and count must be positive");
  KrausFamily f;
  Operator s = Operator::zero(d, d);
  for (int k = 0; k < count; ++k) {
    f.operators.push_back(cplx(1.0 / std::sqrt(static_cast<double>(d * count))) * random_ginibre(d, d, rng));
    s += f.operators.back().dagger() * f.operators.back();
  }
  if (trace_preserving) {
    const Operator fix = inverse_sqrt_psd(s);
    for (auto& a : f.operators) a = a * fix;
  }
  return f;
}

SuperOperator random_cp_map(Eigen::Index d, int count, Rng& rng, bool trace_preserving) {
  return kraus_assemble(random_kraus_family(d, count, rng, trace_preserving));
}

SuperOperator random_superoperator(Eigen::Index dim_in, Eigen::Index dim_out, Rng& rng) {
  return SuperOperator(dim_in, dim_out, random_ginibre(dim_out * dim_out, dim_in * dim_in, rng).matrix());
}

GeneratorSchedule rotating_schedule(double omega, double gamma) {
  GeneratorSchedule s;
  s.t_start = -1e300;
  s.t_end = 1e300;
  Matrix x(2, 2), z(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  z << 1.0, 0.0, 0.0, -1.0;
  const SuperOperator damping = amplitude_damping_generator(gamma);
  s.eval = [omega, x, z, damping](double t) {
    const Operator h(std::cos(omega * t) * x + std::sin(omega * t) * z);
    return commutator_generator(h) + damping;
  };
  s.continuity_modulus = 2.0 * std::abs(omega);
  return s;
}

// Builtin addressing.

namespace {

constexpr std::string_view kPrefix = "builtin:";

double number_param(const BuiltinUri& uri, const std::string& key, double fallback) {
  const auto it = uri.params.find(key);
  if (it == uri.params.end()) return fallback;
  double value = 0.0;
  const char* first = it->second.data();
  const char* last = first + it->second.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw ParseError("builtin " + uri.name + ": parameter " + key + " is not a finite number");
  }
  return value;
}

double unit_param(const BuiltinUri& uri, const std::string& key, double fallback) {
  const double v = number_param(uri, key, fallback);
  if (v < 0.0 || v > 1.0) throw ParseError("builtin " + uri.name + ": " + key + " must lie in [0, 1]");
  return v;
}

double nonnegative_param(const BuiltinUri& uri, const std::string& key, double fallback) {
  const double v = number_param(uri, key, fallback);
  if (v < 0.0) throw ParseError("builtin " + uri.name + ": " + key + " must be nonnegative");
  return v;
}

long long integer_param(const BuiltinUri& uri, const std::string& key, long long fallback, long long lo,
                        long long hi) {
  const auto it = uri.params.find(key);
  if (it == uri.params.end()) return fallback;
  long long value = 0;
  const char* first = it->second.data();
  const char* last = first + it->second.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || value < lo || value > hi) {
    throw ParseError("builtin " + uri.name + ": parameter " + key + " must be an integer in [" +
                     std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return value;
}

std::uint64_t seed_param(const BuiltinUri& uri, std::uint64_t fallback) {
  const auto it = uri.params.find("seed");
  if (it == uri.params.end()) return fallback;
  std::uint64_t value = 0;
  const char* first = it->second.data();
  const char* last = first + it->second.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) throw ParseError("builtin " + uri.name + ": seed must be an unsigned integer");
  return value;
}

constexpr long long kMaxDim = 32;

struct Entry {
  std::set<std::string> keys;
  std::function<Builtin(const BuiltinUri&, std::uint64_t)> make;
};

Builtin plain(const std::string& name, SuperOperator map) { return {name, std::move(map), std::nullopt, std::nullopt}; }

const std::map<std::string, Entry>& registry() {
  static const std::map<std::string, Entry> table = {
      {"identity",
       {{"d"}, [](const BuiltinUri& u, std::uint64_t) {
          return plain("identity", identity_channel(integer_param(u, "d", 2, 1, kMaxDim)));
        }}},
      {"transpose",
       {{"d"}, [](const BuiltinUri& u, std::uint64_t) {
          return plain("transpose", transpose_map(integer_param(u, "d", 2, 1, kMaxDim)));
        }}},
      {"depolarizing",
       {{"d", "p"}, [](const BuiltinUri& u, std::uint64_t) {
          return plain("depolarizing",
                       depolarizing_channel(integer_param(u, "d", 2, 1, kMaxDim), unit_param(u, "p", 0.5)));
        }}},
      {"dephasing",
       {{"d", "p"}, [](const BuiltinUri& u, std::uint64_t) {
          return plain("dephasing", dephasing_channel(integer_param(u, "d", 2, 1, kMaxDim), unit_param(u, "p", 1.0)));
        }}},
      {"amplitude-damping",
       {{"gamma"}, [](const BuiltinUri& u, std::uint64_t) {
          KrausFamily k = amplitude_damping_kraus(unit_param(u, "gamma", 0.3));
          SuperOperator m = kraus_assemble(k);
          return Builtin{"amplitude-damping", std::move(m), std::move(k), std::nullopt};
        }}},
      {"random-cp",
       {{"d", "kraus", "seed"}, [](const BuiltinUri& u, std::uint64_t seed) {
          Rng rng(seed_param(u, seed));
          const auto d = integer_param(u, "d", 2, 1, kMaxDim);
          KrausFamily k = random_kraus_family(d, static_cast<int>(integer_param(u, "kraus", 3, 1, 64)), rng);
          SuperOperator m = kraus_assemble(k);
          return Builtin{"random-cp", std::move(m), std::move(k), std::nullopt};
        }}},
      {"amplitude-damping-generator",
       {{"gamma"}, [](const BuiltinUri& u, std::uint64_t) {
          GkslPresentation p = amplitude_damping_presentation(nonnegative_param(u, "gamma", 1.0));
          SuperOperator m = assemble_generator(p);
          return Builtin{"amplitude-damping-generator", std::move(m), std::nullopt, std::move(p)};
        }}},
      {"depolarizing-generator",
       {{"d", "rate"}, [](const BuiltinUri& u, std::uint64_t) {
          return plain("depolarizing-generator", depolarizing_generator(integer_param(u, "d", 2, 1, kMaxDim),
                                                                        nonnegative_param(u, "rate", 1.0)));
        }}},
      {"dephasing-generator",
       {{"d", "rate"}, [](const BuiltinUri& u, std::uint64_t) {
          return plain("dephasing-generator",
                       dephasing_generator(integer_param(u, "d", 2, 1, kMaxDim), nonnegative_param(u, "rate", 1.0)));
        }}},
      {"shifted-amplitude-damping-generator",
       {{"gamma", "shift"}, [](const BuiltinUri& u, std::uint64_t) {
          GkslPresentation p = amplitude_damping_presentation(nonnegative_param(u, "gamma", 1.0));
          p.g += cplx(nonnegative_param(u, "shift", 0.1)) * Operator::identity(2);
          SuperOperator m = assemble_generator(p);
          return Builtin{"shifted-amplitude-damping-generator", std::move(m), std::nullopt, std::move(p)};
        }}},
      {"commutator",
       {{"d"}, [](const BuiltinUri& u, std::uint64_t) {
          return plain("commutator",
                       commutator_generator(reference_hamiltonian(integer_param(u, "d", 2, 1, kMaxDim))));
        }}},
      {"transpose-minus-identity",
       {{"d"}, [](const BuiltinUri& u, std::uint64_t) {
          return plain("transpose-minus-identity", transpose_minus_identity(integer_param(u, "d", 2, 1, kMaxDim)));
        }}},
      {"random-dcp",
       {{"d", "kraus", "seed", "trace"}, [](const BuiltinUri& u, std::uint64_t seed) {
          Rng rng(seed_param(u, seed));
          RandomPresentationOptions opts;
          opts.kraus_count = static_cast<int>(integer_param(u, "kraus", 2, 1, 64));
          const auto it = u.params.find("trace");
          const std::string trace = it == u.params.end() ? "nonincreasing" : it->second;
          if (trace == "preserving") {
            opts.trace = RandomTrace::preserving;
          } else if (trace == "nonincreasing") {
            opts.trace = RandomTrace::nonincreasing;
          } else if (trace == "arbitrary") {
            opts.trace = RandomTrace::arbitrary;
          } else {
            throw ParseError("builtin random-dcp: trace must be preserving, nonincreasing or arbitrary");
          }
          GkslPresentation p = random_minimal_presentation(integer_param(u, "d", 2, 1, kMaxDim), rng, opts);
          SuperOperator m = assemble_generator(p);
          return Builtin{"random-dcp", std::move(m), std::nullopt, std::move(p)};
        }}},
  };
  return table;
}

}  // namespace

bool is_builtin_uri(const std::string& text) noexcept { return text.rfind(kPrefix, 0) == 0; }

BuiltinUri parse_builtin_uri(const std::string& text) {
  if (!is_builtin_uri(text)) throw ParseError("not a builtin URI: " + text);
  const std::string rest = text.substr(kPrefix.size());
  const auto q = rest.find('?');
  BuiltinUri uri;
  uri.name = rest.substr(0, q);
  if (uri.name.empty()) throw ParseError("builtin URI without a name: " + text);
  if (q == std::string::npos) return uri;
  std::string query = rest.substr(q + 1);
  std::size_t pos = 0;
  while (pos <= query.size()) {
    const auto amp = query.find('&', pos);
    const std::string item = query.substr(pos, amp == std::string::npos ? std::string::npos : amp - pos);
    const auto eq = item.find('=');
    if (item.empty() || eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
      throw ParseError("malformed builtin parameter '" + item + "' in " + text);
    }
    if (!uri.params.emplace(item.substr(0, eq), item.substr(eq + 1)).second) {
      throw ParseError("duplicate builtin parameter '" + item.substr(0, eq) + "' in " + text);
    }
    if (amp == std::string::npos) break;
    pos = amp + 1;
  }
  return uri;
}

Builtin resolve_builtin(const BuiltinUri& uri, Role role, std::uint64_t default_seed) {
  const auto& table = registry();
  auto it = table.end();
  if (role == Role::generator) it = table.find(uri.name + "-generator");
  if (it == table.end()) it = table.find(uri.name);
  if (it == table.end()) throw ParseError("unknown builtin '" + uri.name + "'");
  for (const auto& [key, value] : uri.params) {
    if (!it->second.keys.count(key)) throw ParseError("builtin " + it->first + ": unknown parameter '" + key + "'");
  }
  try {
    return it->second.make(uri, default_seed);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError("builtin " + it->first + ": " + e.what());
  }
}

std::vector<std::string> builtin_names() {
  std::vector<std::string> names;
  for (const auto& [name, entry] : registry()) names.push_back(name);
  return names;
}

GeneratorSchedule resolve_builtin_schedule(const BuiltinUri& uri) {
  if (uri.name != "rotating") throw ParseError("unknown builtin schedule '" + uri.name + "'");
  for (const auto& [key, value] : uri.params) {
    if (key != "omega" && key != "gamma") throw ParseError("builtin rotating: unknown parameter '" + key + "'");
  }
  return rotating_schedule(number_param(uri, "omega", 1.0), nonnegative_param(uri, "gamma", 0.5));
}

}  // namespace gkslkit::fixtures
