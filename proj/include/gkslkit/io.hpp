#pragma once

// JSON file formats, version "v1". Complex numbers are [re, im] pairs;
// matrices are flat row-major lists of pairs. Superoperator files carry the
// vectorization convention so that matrix payloads are unambiguous.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gkslkit/cp_maps.hpp"
#include "gkslkit/evolution.hpp"
#include "gkslkit/fixtures.hpp"
#include "gkslkit/gksl.hpp"
#include "json.hpp"

namespace gkslkit::io {

using Json = nlohmann::json;

inline constexpr std::string_view kVersion = "v1";
inline constexpr std::string_view kConvention = "column-stacking/v1";
inline constexpr std::string_view kOperatorFormat = "gksl-kit/operator";
inline constexpr std::string_view kSuperOpFormat = "gksl-kit/superoperator";
inline constexpr std::string_view kScheduleFormat = "gksl-kit/schedule";
inline constexpr std::string_view kTrajectoryFormat = "gksl-kit/trajectory";

enum class Repr { matrix, choi, kraus, gksl };
std::string_view to_string(Repr r) noexcept;
/// Throws ParseError.
Repr parse_repr(std::string_view s);

// Matrix payloads.
Json matrix_to_json(const Matrix& m);
/// Throws ParseError on wrong length, non-pairs or non-finite values.
Matrix matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols);

// Operators.
Json operator_to_json(const Operator& a);
Operator operator_from_json(const Json& j);
std::string serialize_operator(const Operator& a);
Operator parse_operator(std::string_view text);

// Superoperators.
struct SuperOpDocument {
  Repr repr = Repr::matrix;
  SuperOperator map;
  std::optional<KrausFamily> kraus;
  std::optional<GkslPresentation> presentation;
};

/// Kraus extraction (kraus) or the minimal presentation (gksl) is computed as
/// needed; those reprs throw NotCpError / NotDcpError when unavailable.
Json superop_to_json(const SuperOperator& map, Repr repr, const Tolerance& tol = {});
Json kraus_to_json(const KrausFamily& family);
/// psi is written as Kraus operators when psi_as_kraus and Psi is CP, otherwise as a Choi matrix.
Json presentation_to_json(const GkslPresentation& p, bool psi_as_kraus = false, const Tolerance& tol = {});
SuperOpDocument superop_from_json(const Json& j, const Tolerance& tol = {});

std::string serialize_superop(const SuperOperator& map, Repr repr, const Tolerance& tol = {});
SuperOpDocument parse_superop(std::string_view text, const Tolerance& tol = {});

// Schedules: generator k is in force on [times[k], times[k+1]); the first and
// last pieces extend to -inf and +inf.
struct ScheduleDocument {
  std::vector<double> times;
  std::vector<SuperOperator> generators;

  GeneratorSchedule schedule() const;
};

/// Generator entries are superoperator objects or builtin URI strings.
ScheduleDocument schedule_from_json(const Json& j, std::uint64_t default_seed, const Tolerance& tol = {});
Json schedule_to_json(const std::vector<double>& times, const std::vector<SuperOperator>& generators);

/// Parses text as JSON; throws ParseError with the parser's message.
Json parse_json(std::string_view text);
/// Canonical text form: sorted keys, two-space indent, trailing newline.
std::string dump(const Json& j);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

}  // namespace gkslkit::io
