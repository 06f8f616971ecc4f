#pragma once

// Named maps and generators, plus random instances used by the tests and the
// CLI. Builtins are addressed as "builtin:name?key=value&key=value".

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gkslkit/cp_maps.hpp"
#include "gkslkit/evolution.hpp"
#include "gkslkit/gksl.hpp"

namespace gkslkit::fixtures {

// Channels.
SuperOperator identity_channel(Eigen::Index d = 2);
/// rho -> (1 - p) rho + p Tr(rho) Id / d.
SuperOperator depolarizing_channel(Eigen::Index d, double p);
/// rho -> (1 - p) rho + p diag(rho). p = 1 is complete dephasing.
SuperOperator dephasing_channel(Eigen::Index d, double p);
/// Qubit amplitude damping with decay probability gamma.
KrausFamily amplitude_damping_kraus(double gamma);
SuperOperator amplitude_damping_channel(double gamma);

// Generators.
/// gamma (s rho s^dagger - {s^dagger s, rho} / 2), s = |0><1|.
GkslPresentation amplitude_damping_presentation(double gamma);
SuperOperator amplitude_damping_generator(double gamma);
/// rate (Tr(rho) Id / d - rho).
SuperOperator depolarizing_generator(Eigen::Index d, double rate);
/// rate (sum_k P_k rho P_k - rho).
SuperOperator dephasing_generator(Eigen::Index d, double rate);
/// Deterministic hermitian H: diagonal 0, 1, ..., d-1 plus 1/2 on the first off-diagonals.
Operator reference_hamiltonian(Eigen::Index d);
/// -i [H, rho].
SuperOperator commutator_generator(const Operator& h);
/// rho -> rho^T - rho. Not dCP.
SuperOperator transpose_minus_identity(Eigen::Index d);

// Random instances.
enum class RandomTrace { preserving, nonincreasing, arbitrary };

struct RandomPresentationOptions {
  int kraus_count = 2;
  RandomTrace trace = RandomTrace::nonincreasing;
  double psi_scale = 1.0;
  double h_scale = 1.0;
  /// Weight of the PSD excess added to G in the nonincreasing case.
  double excess = 0.2;
};

/// A minimal triple: traceless Kraus operators for Psi, Tr H = 0.
GkslPresentation random_minimal_presentation(Eigen::Index d, Rng& rng, const RandomPresentationOptions& opts = {});
SuperOperator random_dcp_generator(Eigen::Index d, Rng& rng, const RandomPresentationOptions& opts = {});

/// Kraus family of Ginibre operators normalised so that sum A^dagger A = Id
/// when trace_preserving, otherwise left unnormalised.
KrausFamily random_kraus_family(Eigen::Index d, int count, Rng& rng, bool trace_preserving = true);
SuperOperator random_cp_map(Eigen::Index d, int count, Rng& rng, bool trace_preserving = true);
/// Dense random superoperator (not a dag-morphism in general).
SuperOperator random_superoperator(Eigen::Index dim_in, Eigen::Index dim_out, Rng& rng);

/// Smooth, noncommuting qubit schedule on the whole real line:
/// L(t) = -i [cos(w t) X + sin(w t) Z, .] + amplitude damping(gamma).
GeneratorSchedule rotating_schedule(double omega = 1.0, double gamma = 0.5);

// Builtin addressing.
struct BuiltinUri {
  std::string name;
  std::map<std::string, std::string> params;
};

bool is_builtin_uri(const std::string& text) noexcept;
/// Throws ParseError on malformed input.
BuiltinUri parse_builtin_uri(const std::string& text);

enum class Role { map, generator };

struct Builtin {
  std::string name;  // resolved name
  SuperOperator map;
  std::optional<KrausFamily> kraus;               // when the fixture is defined by Kraus operators
  std::optional<GkslPresentation> presentation;   // when defined by a presentation
};

/// Resolves a builtin. With Role::generator a name "x" with a generator
/// variant "x-generator" resolves to the latter. default_seed feeds random
/// fixtures without an explicit seed parameter. Throws ParseError for
/// unknown names or bad parameters.
Builtin resolve_builtin(const BuiltinUri& uri, Role role, std::uint64_t default_seed);

/// Names accepted by resolve_builtin, sorted.
std::vector<std::string> builtin_names();

/// Named schedules (currently "rotating"). Throws ParseError when unknown.
GeneratorSchedule resolve_builtin_schedule(const BuiltinUri& uri);

}  // namespace gkslkit::fixtures
