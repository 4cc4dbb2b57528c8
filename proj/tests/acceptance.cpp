// One line per acceptance criterion; exit status is nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "support.hpp"
#include "ultrametrica/abhyankar.hpp"
#include "ultrametrica/berkovich.hpp"
#include "ultrametrica/gleason.hpp"
#include "ultrametrica/verify.hpp"

using namespace ultrametrica;

namespace {

int failures = 0;

struct Outcome {
  bool ok = true;
  std::string detail;
};

void run(int id, const char* what, double limit_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_s > 0 && secs >= limit_s) {
    out.ok = false;
    out.detail += " over time limit";
  }
  if (!out.ok) ++failures;
  std::printf("criterion %2d %s: %s (%.2f s%s%s) %s\n", id, out.ok ? "PASS" : "FAIL", what, secs,
              limit_s > 0 ? ", limit " : "", limit_s > 0 ? std::to_string(static_cast<int>(limit_s)).append(" s").c_str() : "",
              out.detail.c_str());
  std::fflush(stdout);
}

Value tv(const ProfilePtr& prof, Rational a) { return Value::t_power(prof, a); }

SeriesElement with_floor(const SeriesElement& f, const Value& floor) {
  return SeriesElement::from_terms(f.profile(), f.terms(), floor);
}

Outcome count(std::size_t bad, std::size_t total) {
  return {bad == 0, std::to_string(total - bad) + "/" + std::to_string(total)};
}

}  // namespace

int main() {
  run(1, "norm multiplicativity, 500 pairs, p=2, r=2^-sqrt2, floor <24;0>", 5, [] {
    std::mt19937_64 rng(101);
    auto prof = RadiusProfile::free(2, 1);
    const Value floor(prof, Rational(24), {Rational(0)});
    std::size_t bad = 0;
    for (int k = 0; k < 500; ++k) {
      auto f = with_floor(support::random_element(prof, rng), floor);
      auto g = with_floor(support::random_element(prof, rng), floor);
      auto nfg = gauss_norm(mul(f, g));
      if (!nfg || !norm_equal(*nfg, value_mul(*gauss_norm(f), *gauss_norm(g)))) ++bad;
    }
    return count(bad, 500);
  });

  run(2, "leading part is a single monomial, 500 elements", 0, [] {
    std::mt19937_64 rng(102);
    auto prof = RadiusProfile::free(3, 2);
    std::size_t bad = 0;
    for (int k = 0; k < 500; ++k) {
      auto f = support::random_element(prof, rng);
      auto lp = leading_part(f);
      if (lp.size() != 1 || lp.terms()[0].exp != argnorm(f)) ++bad;
    }
    return count(bad, 500);
  });

  run(3, "inversion of 200 units to <20;0>", 10, [] {
    std::mt19937_64 rng(103);
    auto prof = RadiusProfile::free(2, 1);
    const Value target(prof, Rational(20), {Rational(0)});
    std::size_t bad = 0;
    for (int k = 0; k < 200; ++k) {
      auto f = support::random_element(prof, rng);
      auto r = sub(mul(f, invert(f, target)), SeriesElement::one(prof));
      if (!r.empty() || !(r.floor() <= target)) ++bad;
    }
    return count(bad, 200);
  });

  run(4, "frobenius / pth_root round trip, 200 elements", 0, [] {
    std::mt19937_64 rng(104);
    std::size_t bad = 0;
    for (int k = 0; k < 200; ++k) {
      auto prof = RadiusProfile::free(k % 2 ? 3 : 2, 2);
      auto f = support::random_element(prof, rng);
      if (!(pth_root(frobenius(f)) == f) || !(frobenius(pth_root(f)) == f)) ++bad;
    }
    return count(bad, 200);
  });

  for (std::int64_t p : {2, 3}) {
    const std::string what = "G+ schedule depth 12, p=" + std::to_string(p) + ", conditions and adaptedness";
    run(5, what.c_str(), 10, [p] {
      auto prof = RadiusProfile::free(p, 1, max_p_power(p));
      auto gp = build_gplus(prof, 12);
      std::size_t bad = 0;
      for (std::size_t m = 1; m <= 12; ++m) {
        const auto& st = gp.schedule->step(m);
        if (!st.all_conditions() || !is_adapted(gp.schedule->adapted_element(m, 12), st.omega).passed()) ++bad;
      }
      return count(bad, 12);
    });
  }

  run(6, "division residuals, n=1, 50 exact targets, M=8: |beta_m| <= |t|^m s, monotone", 30, [] {
    auto prof = RadiusProfile::free(2, 1, max_p_power(2));
    ScheduleOptions opt;
    opt.tail_margin = 8;
    SurjectionSpec spec(prof, 12, opt);
    const Value s = Value::threshold(prof);
    std::mt19937_64 rng(106);
    std::size_t bad = 0;
    for (int k = 0; k < 50; ++k) {
      auto beta = random_beta(spec, Rational(12), 10, 6, rng, true);
      auto r = reconstruct_preimage(spec.as_oracle(), beta, 8, spec.n() + 2);
      bool ok = r.rescale == 0 && r.residual_norms.size() == 8;
      for (std::size_t m = 0; ok && m < r.residual_norms.size(); ++m) {
        if (m > 0 && r.residual_norms[m] > r.residual_norms[m - 1]) ok = false;
        if (r.residual_norms[m] > value_mul(s, tv(prof, Rational(static_cast<std::int64_t>(m + 1))))) ok = false;
      }
      if (!ok) ++bad;
    }
    return count(bad, 50);
  });

  run(7, "surjectivity at floor <12;0..>, n=1 and n=2, 20 targets each", 120, [] {
    std::size_t bad = 0, total = 0;
    std::string detail;
    for (std::size_t n : {1, 2}) {
      io::Config cfg;
      cfg.profile = RadiusProfile::free(2, n, max_p_power(2));
      auto rep = surject_verify(cfg, 20);
      for (const auto& t : rep.trials) bad += !(t.passed());
      total += rep.trials.size();
      detail += " n=" + std::to_string(n) + " M=" + std::to_string(rep.steps);
    }
    auto out = count(bad, total);
    out.detail += detail;
    return out;
  });

  run(8, "classification golden cases", 0, [] {
    auto base = RadiusProfile::free(2, 0);
    auto k1 = RadiusProfile::free(2, 1);
    const auto zero = SeriesElement::zero(base);
    const auto t = SeriesElement::t_power(base, Rational(1));
    std::size_t bad = 0;
    bad += classify(DiskPoint(zero, tv(base, Rational(3, 2)))) != PointType::II;
    bad += classify(DiskPoint(zero, Value(k1, Rational(0), {Rational(1)}))) != PointType::III;
    bad += classify(DiskPoint(t, Value::zero(base))) != PointType::I;
    NestedPrefix np({DiskPoint(zero, tv(base, 1)), DiskPoint(t, tv(base, 2)),
                     DiskPoint(add(t, SeriesElement::t_power(base, Rational(2))), tv(base, 3))});
    bad += classify(Point(np)) != PointType::IVCandidate;
    return count(bad, 4);
  });

  run(9, "Abhyankar bookkeeping, m=3, and the bound for l=1,2,3", 0, [] {
    auto prof = RadiusProfile::free(2, 3);
    auto base = prof->base();
    auto gauss = [&](std::size_t i) {
      std::vector<Rational> q(3);
      q[i] = Rational(1);
      return GaussCoordinate{Value(prof, Rational(0), q)};
    };
    const auto t = SeriesElement::t_power(base, Rational(1));
    TypeIVCoordinate iv{NestedPrefix({DiskPoint(SeriesElement::zero(base), tv(base, 1)), DiskPoint(t, tv(base, 2)),
                                      DiskPoint(add(t, SeriesElement::t_power(base, Rational(2))), tv(base, 3))})};
    std::size_t bad = 0;
    const TowerPoint all({gauss(0), gauss(1), gauss(2)});
    bad += !(d_K(all) == 3 && is_abhyankar(all));
    const TowerPoint mixed({gauss(0), iv, gauss(2)});
    bad += !(d_K(mixed) == 2 && !is_abhyankar(mixed) && factor_temkin(mixed).B.size() == 2);
    for (long l : {1, 2, 3}) bad += !check_main_theorem_bound(l + 2, l);
    return count(bad, 5);
  });

  run(10, "semi-immediate detector", 0, [] {
    auto base = RadiusProfile::free(2, 0);
    auto k1 = RadiusProfile::free(2, 1);
    const FieldDescriptor K{{}, 0, base};
    const FieldDescriptor Kr{{Value(k1, Rational(0), {Rational(1)})}, 0, base};
    const FieldDescriptor Kr_perfd{{Value(k1, Rational(0), {Rational(1, 2)})}, 0, base};
    std::size_t bad = 0;
    bad += is_semi_immediate(Kr, K);
    bad += !is_semi_immediate(K, K);
    bad += !is_semi_immediate(Kr_perfd, Kr);
    return count(bad, 3);
  });

  return failures == 0 ? 0 : 1;
}
