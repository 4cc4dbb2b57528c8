#include <doctest.h>

#include <random>

#include "support.hpp"
#include "ultrametrica/errors.hpp"
#include "ultrametrica/series.hpp"

using namespace ultrametrica;

namespace {

Value tw(const ProfilePtr& prof, std::int64_t a) { return Value(prof, ExponentVec(prof->n()).with_head(Rational(a))); }

}  // namespace

TEST_CASE("construction normalizes terms") {
  auto prof = RadiusProfile::free(3, 1);
  auto f = SeriesElement::from_terms(prof, {{{Rational(1), Rational(0)}, 2},
                                            {{Rational(1), Rational(0)}, 2},
                                            {{Rational(2), Rational(1)}, 3}});
  REQUIRE(f.size() == 1);  // 2 + 2 = 1 mod 3 and 3 = 0 mod 3
  CHECK(f.terms()[0].coeff == 1);
  CHECK_THROWS_AS(SeriesElement::monomial(prof, {Rational(1, ipow(3, 17)), Rational(0)}), DenominatorCapError);
  CHECK_THROWS(SeriesElement::monomial(prof, {Rational(1, 2), Rational(0)}));
  auto g = SeriesElement::from_terms(prof, {{{Rational(5), Rational(0)}, 1}, {{Rational(1), Rational(0)}, 1}}, tw(prof, 4));
  CHECK(g.size() == 1);  // t^5 falls below the floor |t|^4
}

TEST_CASE("product matches the schoolbook oracle") {
  std::mt19937_64 rng(1);
  for (std::int64_t p : {2, 3, 5}) {
    auto prof = RadiusProfile::free(p, 2);
    for (int k = 0; k < 60; ++k) {
      auto f = support::random_element(prof, rng, {8, 2, -2, 4, -2, 2});
      auto g = support::random_element(prof, rng, {8, 2, -2, 4, -2, 2});
      CHECK(support::as_map(mul(f, g)) == support::naive_product(f, g));
    }
  }
}

TEST_CASE("ring laws on exact elements") {
  std::mt19937_64 rng(2);
  auto prof = RadiusProfile::free(3, 1);
  for (int k = 0; k < 50; ++k) {
    auto f = support::random_element(prof, rng), g = support::random_element(prof, rng),
         h = support::random_element(prof, rng);
    CHECK(mul(f, add(g, h)) == add(mul(f, g), mul(f, h)));
    CHECK(mul(f, g) == mul(g, f));
    CHECK(sub(f, f).empty());
    CHECK(power(f, 3) == mul(f, mul(f, f)));
  }
}

TEST_CASE("gauss norm matches the minimum-weight oracle and is multiplicative") {
  std::mt19937_64 rng(3);
  auto prof = RadiusProfile::free(2, 1);
  for (int k = 0; k < 200; ++k) {
    auto f = support::random_element(prof, rng), g = support::random_element(prof, rng);
    auto nf = *gauss_norm(f), ng = *gauss_norm(g);
    CHECK(static_cast<double>(support::min_weight(f)) == doctest::Approx(nf.weight()));
    CHECK(norm_equal(*gauss_norm(mul(f, g)), value_mul(nf, ng)));
    CHECK(leading_part(f).size() == 1);
  }
}

TEST_CASE("floors propagate through add and mul") {
  auto prof = RadiusProfile::free(2, 1);
  auto f = SeriesElement::from_terms(prof, {{{Rational(0), Rational(0)}, 1}}, tw(prof, 5));
  auto g = SeriesElement::from_terms(prof, {{{Rational(1), Rational(0)}, 1}}, tw(prof, 7));
  CHECK(norm_equal(add(f, g).floor(), tw(prof, 5)));
  // max(|t|^5 |t|, |t|^7 * 1, |t|^12)
  CHECK(norm_equal(mul(f, g).floor(), tw(prof, 6)));
  CHECK(norm_equal(norm_bound(SeriesElement(prof, tw(prof, 3))), tw(prof, 3)));
}

TEST_CASE("argnorm ties") {
  auto rat = RadiusProfile::make(2, {RadiusSpec::rational(Rational(1))});
  auto tie = SeriesElement::from_terms(rat, {{{Rational(1), Rational(0)}, 1}, {{Rational(0), Rational(1)}, 1}});
  CHECK_THROWS_AS(argnorm(tie), std::domain_error);
  auto prof = RadiusProfile::free(2, 1);
  auto f = SeriesElement::from_terms(prof, {{{Rational(1), Rational(0)}, 1}, {{Rational(0), Rational(1)}, 1}});
  CHECK(argnorm(f) == ExponentVec{Rational(1), Rational(0)});
}

TEST_CASE("inversion reaches the requested floor") {
  std::mt19937_64 rng(4);
  auto prof = RadiusProfile::free(2, 1);
  const Value target = tw(prof, 20);
  for (int k = 0; k < 50; ++k) {
    auto f = support::random_element(prof, rng);
    auto g = invert(f, target);
    auto r = sub(mul(f, g), SeriesElement::one(prof));
    CHECK(r.empty());
    CHECK(r.floor() <= target);
  }
  auto coarse = SeriesElement::from_terms(prof, {{{Rational(0), Rational(0)}, 1}}, tw(prof, 3));
  CHECK_THROWS_AS(invert(coarse, target), PrecisionError);
  CHECK_THROWS(invert(SeriesElement::zero(prof), target));
}

TEST_CASE("frobenius and pth root are inverse") {
  std::mt19937_64 rng(5);
  for (std::int64_t p : {2, 3}) {
    auto prof = RadiusProfile::free(p, 2);
    for (int k = 0; k < 40; ++k) {
      auto f = support::random_element(prof, rng);
      CHECK(pth_root(frobenius(f)) == f);
      CHECK(frobenius(pth_root(f)) == f);
      CHECK(frobenius(f) == power(f, static_cast<std::uint64_t>(p)));
      CHECK(frobenius_pow(frobenius_pow(f, -3), 3) == f);
    }
  }
}

TEST_CASE("restriction and coefficient split") {
  auto prof = RadiusProfile::free(2, 1);
  auto f = SeriesElement::from_terms(
      prof, {{{Rational(0), Rational(0)}, 1}, {{Rational(1), Rational(1)}, 1}, {{Rational(3), Rational(1)}, 1}},
      tw(prof, 8));
  auto head = res_ge(f, tw(prof, 2));
  CHECK(head.is_exact());
  CHECK(head.size() == 1);
  CHECK_THROWS_AS(res_ge(f, tw(prof, 9)), PrecisionError);
  auto split = split_coefficient(f, {Rational(1)});
  CHECK(split.coefficient.profile()->n() == 0);
  CHECK(split.coefficient.size() == 2);
  CHECK(split.rest.size() == 1);
}

TEST_CASE("adaptedness certificates") {
  auto prof = RadiusProfile::free(2, 1);  // s weight 2 + 2 sqrt 2
  // t^2 x: weight 3.41 is inside (0, 4.83)
  auto good = SeriesElement::from_terms(prof, {{{Rational(2), Rational(1)}, 1}, {{Rational(6), Rational(1)}, 1}},
                                        tw(prof, 12));
  auto cert = is_adapted(good, {Rational(1)});
  CHECK(cert.passed());
  CHECK(cert.b_q.size() == 2);
  // tail t^4 x^0 has weight 4 < 5.83, too large
  auto bad_tail = SeriesElement::from_terms(prof, {{{Rational(2), Rational(1)}, 1}, {{Rational(4), Rational(0)}, 1}},
                                            tw(prof, 12));
  CHECK_FALSE(is_adapted(bad_tail, {Rational(1)}).tail_ok);
  // norm below s
  auto small = SeriesElement::from_terms(prof, {{{Rational(5), Rational(0)}, 1}}, tw(prof, 12));
  CHECK_FALSE(is_adapted(small, {Rational(0)}).bounded);
  // wrong leading exponent
  CHECK_FALSE(is_adapted(good, {Rational(0)}).argnorm_ok);
  auto coarse = SeriesElement::from_terms(prof, {{{Rational(2), Rational(1)}, 1}}, tw(prof, 5));
  CHECK_THROWS_AS(is_adapted(coarse, {Rational(1)}), PrecisionError);
}

TEST_CASE("base floor of a coefficient") {
  auto prof = RadiusProfile::free(2, 1);
  const Value eta(prof, Rational(10), {Rational(0)});
  // |t|^a r^1 >= |t|^10 means a <= 10 - sqrt 2, so a = 8
  CHECK(base_floor_for(eta, {Rational(1)}).a() == Rational(8));
  CHECK(base_floor_for(Value::zero(prof), {Rational(1)}).is_zero());
}
