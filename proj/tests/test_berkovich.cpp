#include <doctest.h>

#include <random>

#include "support.hpp"
#include "ultrametrica/berkovich.hpp"
#include "ultrametrica/errors.hpp"

using namespace ultrametrica;

namespace {

ProfilePtr K(std::int64_t p = 2) { return RadiusProfile::free(p, 0); }

Value tv(const ProfilePtr& prof, Rational a) { return Value(prof, ExponentVec(prof->n()).with_head(a)); }

SeriesElement tk(const ProfilePtr& base, Rational a) { return SeriesElement::t_power(base, a); }

// max_i |c_i| r^i over the coefficients as given; valid when the center is 0
Value direct_max(const Polynomial& f, const Value& r) {
  Value best = Value::zero(r.profile());
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
    auto n = gauss_norm(f.coeffs()[i]);
    if (!n) continue;
    Value v = value_mul(Value(r.profile(), ExponentVec(r.profile()->n()).with_head(n->a())),
                        value_pow(r, Rational(static_cast<std::int64_t>(i))));
    best = max_value(best, v);
  }
  return best;
}

Polynomial random_poly(const ProfilePtr& base, std::mt19937_64& rng, int degree) {
  std::vector<SeriesElement> c;
  for (int i = 0; i <= degree; ++i) c.push_back(support::random_element(base, rng, {2, 1, 0, 4, 0, 0}));
  return Polynomial(base, std::move(c));
}

}  // namespace

TEST_CASE("binomials mod p agree with Pascal's triangle") {
  for (std::int64_t p : {2, 3, 5, 7}) {
    std::vector<std::vector<std::uint32_t>> pascal(40);
    for (std::size_t n = 0; n < 40; ++n) {
      pascal[n].assign(n + 1, 1);
      for (std::size_t k = 1; k < n; ++k) pascal[n][k] = (pascal[n - 1][k - 1] + pascal[n - 1][k]) % p;
    }
    for (std::size_t n = 0; n < 40; ++n) {
      for (std::size_t k = 0; k <= n; ++k) CHECK(binomial_mod_p(n, k, p) == pascal[n][k] % p);
      CHECK(binomial_mod_p(n, n + 1, p) == 0);
    }
  }
}

TEST_CASE("disk evaluation examples") {
  auto base = K();
  const Polynomial T(base, {SeriesElement::zero(base), SeriesElement::one(base)});
  const Value r = tv(base, Rational(3, 2));
  CHECK(norm_equal(eval_disk(T, DiskPoint(SeriesElement::zero(base), r)), r));

  // T^2 + t T at (0, |t|): max(|t|^2, |t| |t|)
  const Polynomial f(base, {SeriesElement::zero(base), tk(base, 1), SeriesElement::one(base)});
  const DiskPoint d(SeriesElement::zero(base), tv(base, 1));
  CHECK(norm_equal(eval_disk(f, d), direct_max(f, tv(base, 1))));
  CHECK(norm_equal(eval_disk(f, d), tv(base, 2)));

  // type I: T at t is |t|
  CHECK(norm_equal(eval_disk(T, DiskPoint(tk(base, 1), Value::zero(base))), tv(base, 1)));
  // T - t vanishes at t
  CHECK(eval_disk(Polynomial::linear(tk(base, 1)), DiskPoint(tk(base, 1), Value::zero(base))).is_zero());
}

TEST_CASE("recentering changes the disk norm as expected") {
  auto base = K(3);
  const SeriesElement a = tk(base, Rational(1, 3));
  // (T - a)^2 on B(a, r) is r^2, on B(0, r) with r < |a| it is |a|^2
  const Polynomial g = poly_mul(Polynomial::linear(a), Polynomial::linear(a));
  const Value r = tv(base, 2);
  CHECK(norm_equal(eval_disk(g, DiskPoint(a, r)), value_pow(r, Rational(2))));
  CHECK(norm_equal(eval_disk(g, DiskPoint(SeriesElement::zero(base), r)), tv(base, Rational(2, 3))));
}

TEST_CASE("classification golden cases") {
  auto base = K();
  auto k1 = RadiusProfile::free(2, 1);
  CHECK(classify(DiskPoint(SeriesElement::zero(base), tv(base, Rational(3, 2)))) == PointType::II);
  CHECK(classify(DiskPoint(SeriesElement::zero(base), Value(k1, Rational(0), {Rational(1)}))) == PointType::III);
  CHECK(classify(DiskPoint(tk(base, 1), Value::zero(base))) == PointType::I);
  NestedPrefix np({DiskPoint(SeriesElement::zero(base), tv(base, 1)), DiskPoint(tk(base, 1), tv(base, 2)),
                   DiskPoint(add(tk(base, 1), tk(base, 2)), tv(base, 3))});
  CHECK(classify(Point(np)) == PointType::IVCandidate);

  CHECK(point_invariants(PointType::I) == PointInvariants{0, 0, true});
  CHECK(point_invariants(PointType::II) == PointInvariants{0, 1, false});
  CHECK(point_invariants(PointType::III) == PointInvariants{1, 0, false});
  CHECK(point_invariants(Point(np)) == PointInvariants{0, 0, true});

  CHECK(is_topologically_simple(Point(DiskPoint(SeriesElement::zero(base), Value::one(base)))) == Simplicity::No);
  CHECK(is_topologically_simple(Point(DiskPoint(tk(base, 1), Value::zero(base)))) == Simplicity::No);
  CHECK(is_topologically_simple(Point(np)) == Simplicity::IVCandidate);
}

TEST_CASE("nested prefixes") {
  auto base = K();
  const SeriesElement a1 = tk(base, 1);
  const SeriesElement a2 = add(a1, tk(base, 3));
  NestedPrefix np({DiskPoint(a1, tv(base, 2)), DiskPoint(a2, tv(base, 4))});
  CHECK(norm_equal(eval_prefix(Polynomial::linear(a2), np), tv(base, 4)));
  CHECK(norm_equal(eval_prefix(Polynomial::constant(SeriesElement::one(base)), np), Value::one(base)));
  const Polynomial T(base, {SeriesElement::zero(base), SeriesElement::one(base)});
  NestedPrefix shrinking({DiskPoint(SeriesElement::zero(base), tv(base, 1)),
                          DiskPoint(SeriesElement::zero(base), tv(base, 2)),
                          DiskPoint(SeriesElement::zero(base), tv(base, 5))});
  CHECK(norm_equal(eval_prefix(T, shrinking), tv(base, 5)));

  // radii must decrease, disks must nest
  CHECK_THROWS(NestedPrefix({DiskPoint(a1, tv(base, 2)), DiskPoint(a1, tv(base, 2))}));
  CHECK_THROWS(NestedPrefix({DiskPoint(SeriesElement::zero(base), tv(base, 3)), DiskPoint(a1, tv(base, 4))}));
  CHECK_THROWS(NestedPrefix(std::vector<DiskPoint>{}));
}

TEST_CASE("point construction checks") {
  auto base = K();
  CHECK_THROWS(DiskPoint(SeriesElement::zero(base), tv(base, -1)));
  CHECK_NOTHROW(DiskPoint(SeriesElement::zero(base), tv(base, -1), false));
  CHECK_THROWS(DiskPoint(tk(base, -1), tv(base, 1)));
  auto coarse = SeriesElement::from_terms(base, {{{Rational(0)}, 1}}, tv(base, 2));
  CHECK_THROWS(DiskPoint(coarse, tv(base, 3)));
  CHECK_NOTHROW(DiskPoint(coarse, tv(base, 1)));
  // T - coarse at the center is only known to lie below |t|^2
  CHECK_THROWS_AS(eval_disk(Polynomial::linear(coarse), DiskPoint(coarse, Value::zero(base))), PrecisionError);
}

TEST_CASE("disk seminorms are multiplicative, monotone and dominated") {
  std::mt19937_64 rng(51);
  auto base = K();
  auto k1 = RadiusProfile::free(2, 1);
  for (int k = 0; k < 200; ++k) {
    const Polynomial f = random_poly(base, rng, 1 + static_cast<int>(rng() % 3));
    const Polynomial g = random_poly(base, rng, 1 + static_cast<int>(rng() % 3));
    const SeriesElement a = support::random_element(base, rng, {2, 1, 0, 3, 0, 0});
    const bool irrational = rng() % 2;
    const Value r = irrational ? Value(k1, support::random_rational(rng, 2, 1, 0, 2), {Rational(1, 2)})
                               : tv(base, support::random_rational(rng, 2, 1, 0, 4));
    const DiskPoint d(a, r);
    CHECK(norm_equal(eval_disk(poly_mul(f, g), d), value_mul(eval_disk(f, d), eval_disk(g, d))));
    // a smaller radius around the same center, and a subdisk around a point inside
    const Value r2 = value_mul(r, tv(r.profile(), Rational(1)));
    CHECK(eval_disk(f, DiskPoint(a, r2)) <= eval_disk(f, d));
    const SeriesElement a2 = add(a, tk(base, Rational(r.weight() > 3 ? 5 : 4)));
    CHECK(eval_disk(f, DiskPoint(a2, r2)) <= eval_disk(f, d));
    CHECK(eval_disk(f, DiskPoint(a, Value::zero(r.profile()))) <= eval_disk(f, d));
  }
}

TEST_CASE("classification round-trips radii built in sqrt|K^x|") {
  std::mt19937_64 rng(52);
  auto k2 = RadiusProfile::free(3, 2);
  for (int k = 0; k < 50; ++k) {
    const Value r(k2, support::random_rational(rng, 3, 2, 0, 3), {Rational(0), Rational(0)});
    REQUIRE(in_sqrt_K(r));
    CHECK(classify(DiskPoint(SeriesElement::zero(k2->base()), r)) == PointType::II);
    const Value s(k2, Rational(3), {support::random_rational(rng, 3, 1, 1, 2), Rational(0)});
    CHECK(classify(DiskPoint(SeriesElement::zero(k2->base()), s)) == PointType::III);
  }
}
