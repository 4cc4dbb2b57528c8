#include <doctest.h>

#include <random>

#include "ultrametrica/abhyankar.hpp"

using namespace ultrametrica;

namespace {

ProfilePtr K() { return RadiusProfile::free(2, 0); }

Value tv(const ProfilePtr& prof, Rational a) { return Value(prof, ExponentVec(prof->n()).with_head(a)); }

GaussCoordinate free_gauss(const ProfilePtr& prof, std::size_t i) {
  std::vector<Rational> q(prof->n());
  q[i] = Rational(1);
  return {Value(prof, Rational(0), q)};
}

TypeIVCoordinate iv() {
  auto base = K();
  const auto t = SeriesElement::t_power(base, Rational(1));
  return {NestedPrefix({DiskPoint(SeriesElement::zero(base), tv(base, 1)), DiskPoint(t, tv(base, 2)),
                        DiskPoint(add(t, SeriesElement::t_power(base, Rational(2))), tv(base, 3))})};
}

// independent count: one per Gauss coordinate
std::size_t gauss_count(const TowerPoint& pt) {
  std::size_t n = 0;
  for (const auto& c : pt.coords()) n += std::holds_alternative<GaussCoordinate>(c);
  return n;
}

TowerPoint random_tower(std::mt19937_64& rng, const ProfilePtr& prof) {
  std::vector<CoordinateSpec> coords;
  const std::size_t m = rng() % 5;
  for (std::size_t k = 0; k < m; ++k) {
    switch (rng() % 3) {
      case 0: coords.push_back(free_gauss(prof, rng() % prof->n())); break;
      case 1: coords.push_back(GaussCoordinate{tv(prof, Rational(static_cast<std::int64_t>(rng() % 4), 2))}); break;
      default: coords.push_back(iv());
    }
  }
  return TowerPoint(std::move(coords));
}

}  // namespace

TEST_CASE("d_K examples") {
  auto prof = RadiusProfile::free(2, 2);
  CHECK(d_K(TowerPoint({free_gauss(prof, 0), free_gauss(prof, 1)})) == 2);
  CHECK(d_K(TowerPoint({iv()})) == 0);
  CHECK(d_K(TowerPoint()) == 0);
  CHECK(is_abhyankar(TowerPoint()));
  CHECK(is_abhyankar(TowerPoint({free_gauss(prof, 0), GaussCoordinate{tv(prof, Rational(1))}})));
  // a repeated radius contributes a residue variable instead of rank
  auto again = factor_temkin(TowerPoint({free_gauss(prof, 0), free_gauss(prof, 0)}));
  CHECK(again.field.free_value_generators.size() == 1);
  CHECK(again.field.residue_trdeg == 1);
  CHECK_FALSE(is_abhyankar(TowerPoint({free_gauss(prof, 0), iv()})));
}

TEST_CASE("Temkin factorization picks out the Gauss coordinates") {
  auto prof = RadiusProfile::free(2, 2);
  const auto r1 = free_gauss(prof, 0), r2 = free_gauss(prof, 1);
  auto f = factor_temkin(TowerPoint({r1, iv(), r2}));
  CHECK(f.B == std::vector<std::size_t>{1, 3});
  REQUIRE(f.polyradius.size() == 2);
  CHECK(norm_equal(f.polyradius[0], r1.radius));
  CHECK(norm_equal(f.polyradius[1], r2.radius));
  REQUIRE(f.remainder.size() == 1);
  CHECK(f.remainder[0] == PointInvariants{0, 0, true});
  CHECK(f.kernel_height == 0);
  CHECK(factor_temkin(TowerPoint({iv(), iv()})).B.empty());
}

TEST_CASE("tower construction checks") {
  auto prof = RadiusProfile::free(2, 1);
  CHECK_THROWS(TowerPoint({GaussCoordinate{Value::zero(prof)}}));
  CHECK_THROWS(TowerPoint({GaussCoordinate{tv(prof, Rational(-1))}}));
  // a center in x_1 is fine after one Gauss coordinate, not before
  auto k1 = RadiusProfile::free(2, 1);
  const auto x = SeriesElement::from_terms(k1, {{{Rational(1), Rational(1)}, 1}});
  TypeIVCoordinate in_x{NestedPrefix({DiskPoint(x, Value(k1, Rational(2), {Rational(0)}), false)})};
  CHECK_NOTHROW(TowerPoint({free_gauss(k1, 0), in_x}));
  CHECK_THROWS(TowerPoint({in_x}));
}

TEST_CASE("tower invariants on random towers") {
  std::mt19937_64 rng(61);
  auto prof = RadiusProfile::free(3, 3);
  for (int k = 0; k < 200; ++k) {
    const TowerPoint a = random_tower(rng, prof), b = random_tower(rng, prof);
    const TowerPoint ab = concat(a, b);
    CHECK(d_K(ab) == d_K(a) + d_K(b));
    CHECK(d_K(ab) == gauss_count(ab));
    const auto f = factor_temkin(ab);
    CHECK(f.B.size() == d_K(ab));
    CHECK((f.B.size() == ab.dim()) == is_abhyankar(ab));
    CHECK(f.kernel_height == 0);
    for (const auto& inv : f.remainder) CHECK(inv == PointInvariants{0, 0, true});
  }
}

TEST_CASE("free rank modulo sqrt|K^x|") {
  auto prof = RadiusProfile::free(2, 2);
  const Value r(prof, Rational(0), {Rational(1), Rational(0)});
  const Value s(prof, Rational(0), {Rational(0), Rational(1)});
  const Value rs(prof, Rational(3), {Rational(2), Rational(-1, 4)});
  CHECK(free_rank({r, s}) == 2);
  CHECK(free_rank({r, s, rs}) == 2);
  CHECK(free_rank({r, value_pow(r, Rational(1, 2))}) == 1);
  CHECK(free_rank({tv(prof, Rational(5))}) == 0);
  FieldDescriptor dependent{{r, rs, s}, 0, prof->base()};
  CHECK_THROWS(dependent.validate());
}

TEST_CASE("semi-immediate detector") {
  auto base = K();
  auto k1 = RadiusProfile::free(2, 1);
  const FieldDescriptor Kd{{}, 0, base};
  const FieldDescriptor Kr{{Value(k1, Rational(0), {Rational(1)})}, 0, base};
  const FieldDescriptor Kr_perfd{{Value(k1, Rational(0), {Rational(1, 2)})}, 0, base};
  CHECK_FALSE(is_semi_immediate(Kr, Kd));
  CHECK(is_semi_immediate(Kd, Kd));
  CHECK(is_semi_immediate(Kr_perfd, Kr));
  CHECK_FALSE(is_semi_immediate(FieldDescriptor{{}, 1, base}, Kd));
  CHECK_THROWS(is_semi_immediate(Kd, Kr));
  CHECK_THROWS(is_semi_immediate(Kd, FieldDescriptor{{}, 1, base}));
}

TEST_CASE("bound on the number of variables") {
  CHECK(check_main_theorem_bound(3, 1));
  for (long n = 0; n < 6; ++n) CHECK(check_main_theorem_bound(n + 2, n));
  CHECK_FALSE(check_main_theorem_bound(1, 1));
  CHECK_THROWS(check_main_theorem_bound(0, 0));
  CHECK_THROWS(check_main_theorem_bound(2, -1));
}
