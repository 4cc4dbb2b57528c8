#pragma once

// Generators and independent oracles shared by the unit tests.

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "ultrametrica/series.hpp"

namespace support {

using namespace ultrametrica;

inline Rational random_rational(std::mt19937_64& rng, std::int64_t p, int max_den_log, std::int64_t lo,
                                std::int64_t hi) {
  const std::int64_t den = ipow(p, static_cast<int>(rng() % static_cast<std::uint64_t>(max_den_log + 1)));
  const std::int64_t span = (hi - lo) * den;
  return Rational(lo * den + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(span + 1)), den);
}

struct ElementShape {
  int terms = 6;
  int den_log = 2;
  std::int64_t t_lo = 0, t_hi = 6;
  std::int64_t x_lo = -2, x_hi = 2;
};

/// Random nonzero exact element with the given shape.
inline SeriesElement random_element(const ProfilePtr& prof, std::mt19937_64& rng, const ElementShape& shape = {}) {
  for (;;) {
    std::vector<Term> terms;
    for (int k = 0; k < shape.terms; ++k) {
      ExponentVec e(prof->n() + 1);
      e[0] = random_rational(rng, prof->p(), shape.den_log, shape.t_lo, shape.t_hi);
      for (std::size_t i = 1; i <= prof->n(); ++i) {
        e[i] = random_rational(rng, prof->p(), shape.den_log, shape.x_lo, shape.x_hi);
      }
      terms.push_back({e, static_cast<std::uint32_t>(1 + rng() % static_cast<std::uint64_t>(prof->p() - 1))});
    }
    auto f = SeriesElement::from_terms(prof, std::move(terms));
    if (!f.empty()) return f;
  }
}

/// Weight of a + sum q_i alpha_i in long double.
inline long double weight_ld(const ProfilePtr& prof, const ExponentVec& e) {
  long double w = static_cast<long double>(e[0].num()) / static_cast<long double>(e[0].den());
  for (std::size_t i = 1; i < e.size(); ++i) {
    const auto& r = prof->radii()[i - 1];
    const long double alpha = r.kind == RadiusSpec::Kind::Free ? std::sqrt(static_cast<long double>(r.root))
                                                               : static_cast<long double>(r.exponent.to_double());
    w += static_cast<long double>(e[i].num()) / static_cast<long double>(e[i].den()) * alpha;
  }
  return w;
}

/// Smallest term weight, i.e. -log_|t| of the Gauss norm.
inline long double min_weight(const SeriesElement& f) {
  long double best = INFINITY;
  for (const auto& t : f.terms()) best = std::min(best, weight_ld(f.profile(), t.exp));
  return best;
}

/// Schoolbook product of exact elements over F_p.
inline std::map<ExponentVec, std::uint32_t> naive_product(const SeriesElement& f, const SeriesElement& g) {
  const auto p = static_cast<std::uint64_t>(f.profile()->p());
  std::map<ExponentVec, std::uint32_t> out;
  for (const auto& a : f.terms()) {
    for (const auto& b : g.terms()) {
      auto& c = out[a.exp + b.exp];
      c = static_cast<std::uint32_t>((c + static_cast<std::uint64_t>(a.coeff) * b.coeff) % p);
    }
  }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

inline std::map<ExponentVec, std::uint32_t> as_map(const SeriesElement& f) {
  std::map<ExponentVec, std::uint32_t> out;
  for (const auto& t : f.terms()) out[t.exp] = t.coeff;
  return out;
}

}  // namespace support
