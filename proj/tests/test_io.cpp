#include <doctest.h>

#include <random>

#include "support.hpp"
#include "ultrametrica/io.hpp"

using namespace ultrametrica;
using io::json;

TEST_CASE("values and profiles round-trip") {
  auto prof = RadiusProfile::make(3, {RadiusSpec::free(2), RadiusSpec::rational(Rational(1, 2))});
  auto back = io::profile_from_json(io::to_json(prof));
  CHECK(same_profile(prof, back));
  const Value v(prof, Rational(-7, 9), {Rational(1, 3), Rational(2)});
  CHECK(io::value_from_json(io::to_json(v), prof).exponents() == v.exponents());
  CHECK(io::value_from_json(io::to_json(Value::zero(prof)), prof).is_zero());
  CHECK(io::rational_from_json(json("5/2^3")) == Rational(5, 8));
  CHECK(io::rational_from_json(json(4)) == Rational(4));
  CHECK_THROWS_AS(io::rational_from_json(json(1.5)), io::InputError);
}

TEST_CASE("series round-trip") {
  std::mt19937_64 rng(71);
  auto prof = RadiusProfile::free(5, 2);
  for (int k = 0; k < 50; ++k) {
    auto f = support::random_element(prof, rng);
    CHECK(io::series_from_json(io::to_json(f)) == f);
    CHECK(io::series_from_json(io::to_json(f, false), prof) == f);
  }
  auto g = SeriesElement::from_terms(prof, {{{Rational(1), Rational(0), Rational(0)}, 1}},
                                     Value(prof, Rational(9), {Rational(0), Rational(0)}));
  auto back = io::series_from_json(io::to_json(g));
  CHECK(back == g);
  CHECK(norm_equal(back.floor(), g.floor()));
  // coefficients are reduced mod p and missing x means zeros
  auto h = io::series_from_json(json::parse(R"({"profile":{"p":5,"n":2},"terms":[{"t":"1/5","c":7}]})"));
  CHECK(h.terms()[0].coeff == 2);
  CHECK(h.terms()[0].exp == ExponentVec{Rational(1, 5), Rational(0), Rational(0)});
}

TEST_CASE("tate elements, points and towers round-trip") {
  auto base = RadiusProfile::free(2, 0);
  auto f = t_add(TateElement::variable(base, 2, 0),
               TateElement::monomial(base, 2, {Rational(1, 2), Rational(3)}, SeriesElement::t_power(base, Rational(1))));
  const json jf = io::to_json(f);
  CHECK(io::to_json(io::tate_from_json(jf)) == jf);

  const Point disk = DiskPoint(SeriesElement::t_power(base, Rational(1)), Value::t_power(base, Rational(3, 2)));
  const json jd = io::to_json(disk);
  CHECK(io::to_json(io::point_from_json(jd)) == jd);
  CHECK(classify(io::point_from_json(jd)) == PointType::II);

  const auto t = SeriesElement::t_power(base, Rational(1));
  const Point prefix = NestedPrefix({DiskPoint(SeriesElement::zero(base), Value::t_power(base, Rational(1))),
                                     DiskPoint(t, Value::t_power(base, Rational(2)))});
  const json jp = io::to_json(prefix);
  CHECK(io::to_json(io::point_from_json(jp)) == jp);
  CHECK(classify(io::point_from_json(jp)) == PointType::IVCandidate);

  auto k2 = RadiusProfile::free(2, 2);
  const TowerPoint tower({GaussCoordinate{Value(k2, Rational(0), {Rational(1), Rational(0)})},
                          TypeIVCoordinate{std::get<NestedPrefix>(prefix)},
                          GaussCoordinate{Value(k2, Rational(0), {Rational(0), Rational(1)})}});
  const json jt = io::to_json(tower);
  const TowerPoint back = io::tower_from_json(jt);
  CHECK(io::to_json(back) == jt);
  CHECK(d_K(back) == 2);
}

TEST_CASE("config parsing") {
  auto c = io::config_from_json(json::parse(R"({"p":3,"n":2,"depth":9,"floor":10,"seed":5})"));
  CHECK(c.profile->p() == 3);
  CHECK(c.profile->n() == 2);
  CHECK(c.depth == 9);
  CHECK(c.floor == Rational(10));
  CHECK(c.seed == 5);
  CHECK_FALSE(c.tail_margin.has_value());
  auto again = io::config_from_json(io::to_json(c));
  CHECK(io::to_json(again) == io::to_json(c));
  auto d = io::config_from_json(json::object());
  CHECK(d.profile->p() == 2);
  CHECK(d.profile->n() == 1);
  CHECK_THROWS_AS(io::config_from_json(json::parse(R"({"depht":3})")), io::InputError);
  CHECK_THROWS_AS(io::config_from_json(json::parse(R"({"depth":0})")), io::InputError);
  CHECK_THROWS_AS(io::config_from_json(json::parse(R"({"profile":{"p":2,"radii":[{"rational":"1/2"}]}})")),
                  io::InputError);
}

TEST_CASE("syntax errors name the line and column") {
  try {
    io::parse_text("{\n  \"p\": 2,\n  \"n\": ]\n}", "cfg.json");
    FAIL("no error");
  } catch (const io::InputError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("cfg.json:3:") != std::string::npos);
  }
  CHECK_THROWS_AS(io::read_file("/nonexistent/file.json"), io::InputError);
}
