#include <cstring>

#include "doctest.h"
#include "gkslkit/fixtures.hpp"
#include "gkslkit/io.hpp"

using namespace gkslkit;
using io::Json;
using io::Repr;

namespace {

bool bit_equal(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return std::memcmp(a.data(), b.data(), sizeof(cplx) * static_cast<std::size_t>(a.size())) == 0;
}

SuperOperator builtin(const std::string& uri, fixtures::Role role = fixtures::Role::map) {
  return fixtures::resolve_builtin(fixtures::parse_builtin_uri(uri), role, 1).map;
}

}  // namespace

TEST_CASE("operators round-trip bit-exactly") {
  Rng rng(1);
  const Operator a = random_ginibre(3, 2, rng);
  const Operator b = io::parse_operator(io::serialize_operator(a));
  CHECK(bit_equal(a.matrix(), b.matrix()));
  Matrix tiny(1, 1);
  tiny(0, 0) = cplx(5e-324, -1.7976931348623157e308);
  CHECK(bit_equal(io::parse_operator(io::serialize_operator(Operator(tiny))).matrix(), tiny));
  CHECK(io::serialize_operator(a).back() == '\n');
}

TEST_CASE("matrix-repr superoperators round-trip bit-exactly for every builtin map") {
  for (const auto& name : fixtures::builtin_names()) {
    const auto role = name.find("generator") != std::string::npos ? fixtures::Role::generator : fixtures::Role::map;
    const SuperOperator m = builtin("builtin:" + name, role);
    for (Repr r : {Repr::matrix}) {
      const auto doc = io::parse_superop(io::serialize_superop(m, r));
      CHECK_MESSAGE(bit_equal(doc.map.matrix(), m.matrix()), name);
    }
    // Serialization is deterministic.
    CHECK(io::serialize_superop(m, Repr::matrix) == io::serialize_superop(m, Repr::matrix));
  }
}

TEST_CASE("the four representations load to the same map") {
  Rng rng(2);
  const SuperOperator l = fixtures::random_dcp_generator(3, rng);
  const SuperOperator cp = fixtures::random_cp_map(3, 2, rng);
  for (Repr r : {Repr::matrix, Repr::choi, Repr::kraus}) {
    CHECK(distance(io::parse_superop(io::serialize_superop(cp, r)).map, cp) < 1e-12);
  }
  for (Repr r : {Repr::matrix, Repr::choi, Repr::gksl}) {
    const auto doc = io::parse_superop(io::serialize_superop(l, r));
    CHECK(distance(doc.map, l) < 1e-12);
    CHECK(doc.repr == r);
  }
  const auto g = io::parse_superop(io::serialize_superop(l, Repr::gksl));
  REQUIRE(g.presentation.has_value());
  CHECK(g.presentation->minimal);
  CHECK_THROWS_AS(io::serialize_superop(transpose_map(2), Repr::kraus), NotCpError);
  CHECK_THROWS_AS(io::serialize_superop(fixtures::transpose_minus_identity(2), Repr::gksl), NotDcpError);
  const auto k = io::parse_superop(io::serialize_superop(cp, Repr::kraus));
  REQUIRE(k.kraus.has_value());
  CHECK(k.kraus->operators.size() == 2);
}

TEST_CASE("parser rejects malformed documents") {
  const std::string good = io::serialize_superop(SuperOperator::identity(2), Repr::matrix);
  const Json base = io::parse_json(good);
  auto reject = [](const Json& j) { CHECK_THROWS_AS(io::superop_from_json(j), ParseError); };

  Json j = base;
  j["version"] = "v2";
  reject(j);
  j = base;
  j["convention"] = "row-stacking/v1";
  reject(j);
  j = base;
  j["format"] = "gksl-kit/operator";
  reject(j);
  j = base;
  j["repr"] = "ptm";
  reject(j);
  j = base;
  j["matrix"].erase(0);
  reject(j);
  j = base;
  j["matrix"][0] = Json::array({1.0});
  reject(j);
  j = base;
  j["matrix"][0] = Json::array({"1", 0.0});
  reject(j);
  j = base;
  j["dims"]["in"] = 0;
  reject(j);
  j = base;
  j.erase("dims");
  reject(j);

  // Overflowing literals parse to infinity and must be rejected.
  std::string inf_text = good;
  inf_text.replace(inf_text.find("1.0"), 3, "1e999");
  CHECK_THROWS_AS(io::parse_superop(inf_text), ParseError);
  CHECK_THROWS_AS(io::parse_superop("{not json"), ParseError);
  CHECK_THROWS_AS(io::parse_superop("[]"), ParseError);
}

TEST_CASE("gksl payload validation") {
  const GkslPresentation p = fixtures::amplitude_damping_presentation(1.0);
  Json j = io::presentation_to_json(p, true);
  CHECK_NOTHROW(io::superop_from_json(j));
  Json bad = j;
  bad["g"][1] = Json::array({1.0, 0.0});  // G no longer hermitian
  CHECK_THROWS_AS(io::superop_from_json(bad), ParseError);
  bad = j;
  bad["psi"] = io::superop_to_json(transpose_map(2), Repr::choi);
  CHECK_THROWS_AS(io::superop_from_json(bad), ParseError);
  bad = j;
  bad["psi"] = io::superop_to_json(SuperOperator::identity(2), Repr::matrix);
  CHECK_THROWS_AS(io::superop_from_json(bad), ParseError);

  // A non-minimal presentation loads and is flagged.
  GkslPresentation nonmin{SuperOperator::identity(2), Operator::zero(2, 2), Operator::zero(2, 2), false};
  const auto doc = io::superop_from_json(io::presentation_to_json(nonmin, false));
  REQUIRE(doc.presentation.has_value());
  CHECK_FALSE(doc.presentation->minimal);
}

TEST_CASE("schedules") {
  const SuperOperator a = fixtures::amplitude_damping_generator(1.0);
  const SuperOperator b = fixtures::dephasing_generator(2, 0.5);
  const Json j = io::schedule_to_json({0.0, 1.0, 2.0}, {a, b});
  const auto doc = io::schedule_from_json(j, 1);
  const auto s = doc.schedule();
  CHECK(distance(s.eval(-5.0), a) == 0.0);
  CHECK(distance(s.eval(0.999), a) == 0.0);
  CHECK(distance(s.eval(1.0), b) == 0.0);
  CHECK(distance(s.eval(50.0), b) == 0.0);

  Json with_uri = j;
  with_uri["generators"][1] = "builtin:dephasing?rate=0.5";
  CHECK(distance(io::schedule_from_json(with_uri, 1).schedule().eval(1.5), b) < 1e-15);

  Json bad = j;
  bad["times"] = Json::array({0.0, 0.0, 2.0});
  CHECK_THROWS_AS(io::schedule_from_json(bad, 1), ParseError);
  bad = j;
  bad["times"] = Json::array({0.0, 1.0});
  CHECK_THROWS_AS(io::schedule_from_json(bad, 1), ParseError);
  bad = j;
  bad["generators"][1] = io::superop_to_json(fixtures::depolarizing_generator(3, 1.0), Repr::matrix);
  CHECK_THROWS_AS(io::schedule_from_json(bad, 1), ParseError);
}

TEST_CASE("builtin URIs") {
  const auto u = fixtures::parse_builtin_uri("builtin:depolarizing?d=3&p=0.25");
  CHECK(u.name == "depolarizing");
  CHECK(u.params.at("d") == "3");
  CHECK(u.params.at("p") == "0.25");
  CHECK(fixtures::is_builtin_uri("builtin:identity"));
  CHECK_FALSE(fixtures::is_builtin_uri("identity.json"));
  for (const char* bad : {"builtin:", "builtin:x?", "builtin:x?a", "builtin:x?a=", "builtin:x?=1", "builtin:x?a=1&a=2",
                          "builtin:x?a=1&&b=2"}) {
    CHECK_THROWS_AS(fixtures::parse_builtin_uri(bad), ParseError);
  }
  CHECK_THROWS_AS(builtin("builtin:no-such-map"), ParseError);
  CHECK_THROWS_AS(builtin("builtin:depolarizing?q=1"), ParseError);
  CHECK_THROWS_AS(builtin("builtin:depolarizing?d=abc"), ParseError);
  CHECK_THROWS_AS(builtin("builtin:depolarizing?d=1000"), ParseError);

  // Role selects the generator variant.
  CHECK(distance(builtin("builtin:amplitude-damping", fixtures::Role::generator),
                 fixtures::amplitude_damping_generator(1.0)) == 0.0);
  CHECK(distance(builtin("builtin:amplitude-damping?gamma=0.3"), fixtures::amplitude_damping_channel(0.3)) < 1e-15);
  // Seeds: explicit parameter wins, otherwise the default seed.
  CHECK(distance(builtin("builtin:random-cp?seed=5"), builtin("builtin:random-cp?seed=5")) == 0.0);
  CHECK(distance(builtin("builtin:random-cp?seed=5"), builtin("builtin:random-cp?seed=6")) > 1e-3);
  const auto r1 = fixtures::resolve_builtin(fixtures::parse_builtin_uri("builtin:random-cp"), fixtures::Role::map, 1);
  const auto r2 = fixtures::resolve_builtin(fixtures::parse_builtin_uri("builtin:random-cp"), fixtures::Role::map, 2);
  CHECK(distance(r1.map, r2.map) > 1e-3);
}

TEST_CASE("sha256 of known strings") {
  CHECK(io::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(io::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
