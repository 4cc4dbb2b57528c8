#include "ultrametrica/series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ultrametrica/errors.hpp"
#include "ultrametrica/kernels.hpp"

namespace ultrametrica {

namespace {

std::uint32_t reduce_coeff(std::int64_t c, std::int64_t p) {
  std::int64_t r = c % p;
  if (r < 0) r += p;
  return static_cast<std::uint32_t>(r);
}

}  // namespace

std::uint32_t fp_inverse(std::uint32_t c, std::int64_t p) {
  if (c % p == 0) throw std::domain_error("zero has no inverse in F_p");
  // Fermat: c^(p-2)
  std::uint64_t result = 1;
  std::uint64_t base = c % static_cast<std::uint64_t>(p);
  std::uint64_t e = static_cast<std::uint64_t>(p - 2);
  const auto mod = static_cast<std::uint64_t>(p);
  while (e) {
    if (e & 1) result = static_cast<std::uint64_t>((static_cast<unsigned __int128>(result) * base) % mod);
    base = static_cast<std::uint64_t>((static_cast<unsigned __int128>(base) * base) % mod);
    e >>= 1;
  }
  return static_cast<std::uint32_t>(result);
}

namespace {

bool below(const ProfilePtr& profile, const ExponentVec& exp, const Value& floor) {
  if (floor.is_zero()) return false;
  return profile->compare_norm(exp, floor.exponents()) < 0;
}

void check_exponents(const ProfilePtr& profile, const ExponentVec& exp) {
  for (const auto& e : exp) {
    int k = p_denominator_log(e, profile->p());
    if (k < 0) throw std::invalid_argument("exponent " + e.str() + " does not have a p-power denominator");
    if (k > profile->max_denominator_log()) {
      throw DenominatorCapError("exponent " + e.str() + " exceeds the denominator cap p^" +
                                std::to_string(profile->max_denominator_log()));
    }
  }
}

}  // namespace

SeriesElement::SeriesElement(ProfilePtr profile) : SeriesElement(profile, Value::zero(profile)) {}

SeriesElement::SeriesElement(ProfilePtr profile, Value floor)
    : profile_(std::move(profile)), floor_(std::move(floor)) {
  if (!profile_) throw std::invalid_argument("series element without profile");
  require_same_profile(profile_, floor_.profile());
  if (profile_->p() > (std::int64_t{1} << 31)) throw std::invalid_argument("p too large for F_p coefficients");
}

SeriesElement SeriesElement::from_terms(ProfilePtr profile, std::vector<Term> terms, Value floor) {
  SeriesElement f(std::move(profile), std::move(floor));
  f.terms_ = std::move(terms);
  f.normalize();
  return f;
}

SeriesElement SeriesElement::from_terms(ProfilePtr profile, std::vector<Term> terms) {
  Value z = Value::zero(profile);
  return from_terms(std::move(profile), std::move(terms), std::move(z));
}

void SeriesElement::normalize() {
  const std::size_t arity = profile_->n() + 1;
  for (auto& t : terms_) {
    if (t.exp.size() != arity) throw std::invalid_argument("term arity does not match profile");
    check_exponents(profile_, t.exp);
    t.coeff %= static_cast<std::uint32_t>(profile_->p());
  }
  kernels::combine_sorted(terms_, profile_->p());
  if (!floor_.is_zero()) {
    std::erase_if(terms_, [&](const Term& t) { return below(profile_, t.exp, floor_); });
  }
}

SeriesElement SeriesElement::one(ProfilePtr profile) {
  ExponentVec e(profile->n() + 1);
  return monomial(std::move(profile), e, 1);
}

SeriesElement SeriesElement::monomial(ProfilePtr profile, ExponentVec exp, std::int64_t coeff) {
  std::uint32_t c = reduce_coeff(coeff, profile->p());
  std::vector<Term> terms;
  if (c != 0) terms.push_back({exp, c});
  return from_terms(std::move(profile), std::move(terms));
}

SeriesElement SeriesElement::t_power(ProfilePtr profile, Rational a, std::int64_t coeff) {
  ExponentVec e(profile->n() + 1);
  e[0] = a;
  return monomial(std::move(profile), e, coeff);
}

SeriesElement SeriesElement::variable(ProfilePtr profile, std::size_t i) {
  if (i >= profile->n()) throw std::out_of_range("variable index out of range");
  ExponentVec e(profile->n() + 1);
  e[i + 1] = Rational(1);
  return monomial(std::move(profile), e, 1);
}

std::uint32_t SeriesElement::coeff(const ExponentVec& exp) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), exp,
                             [](const Term& t, const ExponentVec& e) { return t.exp < e; });
  if (it != terms_.end() && it->exp == exp) return it->coeff;
  return 0;
}

SeriesElement SeriesElement::coarsened(const Value& eta) const {
  SeriesElement r = *this;
  r.floor_ = max_value(floor_, eta);
  if (!r.floor_.is_zero()) {
    std::erase_if(r.terms_, [&](const Term& t) { return below(profile_, t.exp, r.floor_); });
  }
  return r;
}

std::string SeriesElement::str() const {
  std::string out;
  for (const auto& t : terms_) {
    if (!out.empty()) out += " + ";
    out += std::to_string(t.coeff) + "*t^" + t.exp[0].str();
    if (t.exp.size() > 1) out += "*x^" + t.exp.tail().str();
  }
  if (out.empty()) out = "0";
  if (!floor_.is_zero()) out += " + O(" + floor_.str() + ")";
  return out;
}

bool operator==(const SeriesElement& a, const SeriesElement& b) {
  if (!same_profile(a.profile_, b.profile_) || a.terms_ != b.terms_) return false;
  if (a.floor_.is_zero() || b.floor_.is_zero()) return a.floor_.is_zero() == b.floor_.is_zero();
  return a.floor_.exponents() == b.floor_.exponents();
}

// ---------------------------------------------------------------------------
// Arithmetic

SeriesElement add(const SeriesElement& f, const SeriesElement& g) {
  require_same_profile(f.profile(), g.profile());
  std::vector<Term> terms;
  terms.reserve(f.size() + g.size());
  terms.insert(terms.end(), f.terms().begin(), f.terms().end());
  terms.insert(terms.end(), g.terms().begin(), g.terms().end());
  return SeriesElement::from_terms(f.profile(), std::move(terms), max_value(f.floor(), g.floor()));
}

SeriesElement neg(const SeriesElement& f) { return scale(f, -1); }

SeriesElement sub(const SeriesElement& f, const SeriesElement& g) { return add(f, neg(g)); }

SeriesElement scale(const SeriesElement& f, std::int64_t c) {
  const std::int64_t p = f.profile()->p();
  std::uint32_t cc = reduce_coeff(c, p);
  std::vector<Term> terms = f.terms();
  for (auto& t : terms) t.coeff = static_cast<std::uint32_t>((static_cast<std::uint64_t>(t.coeff) * cc) % p);
  return SeriesElement::from_terms(f.profile(), std::move(terms), f.floor());
}

SeriesElement mul(const SeriesElement& f, const SeriesElement& g) {
  require_same_profile(f.profile(), g.profile());
  const Value bf = norm_bound(f);
  const Value bg = norm_bound(g);
  Value floor = max_value(max_value(value_mul(f.floor(), bg), value_mul(g.floor(), bf)),
                          value_mul(f.floor(), g.floor()));
  kernels::ProductJob job;
  job.f = &f.terms();
  job.g = &g.terms();
  job.profile = f.profile().get();
  if (!floor.is_zero()) {
    job.prune = true;
    job.max_weight = floor.weight();
  }
  std::vector<Term> terms = kernels::sparse_product_parallel(job);
  return SeriesElement::from_terms(f.profile(), std::move(terms), floor);
}

SeriesElement power(const SeriesElement& f, std::uint64_t k) {
  SeriesElement result = SeriesElement::one(f.profile());
  SeriesElement base = f;
  while (k) {
    if (k & 1) result = mul(result, base);
    k >>= 1;
    if (k) base = mul(base, base);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Norms

std::optional<Value> gauss_norm(const SeriesElement& f) {
  if (f.empty()) return std::nullopt;
  const auto& prof = f.profile();
  const ExponentVec* best = &f.terms().front().exp;
  for (const auto& t : f.terms()) {
    if (prof->compare_norm(t.exp, *best) > 0) best = &t.exp;
  }
  return Value(prof, *best);
}

Value norm_bound(const SeriesElement& f) {
  auto n = gauss_norm(f);
  return n ? *n : f.floor();
}

SeriesElement leading_part(const SeriesElement& f) {
  auto n = gauss_norm(f);
  if (!n) throw std::domain_error("leading_part of an element with no terms");
  std::vector<Term> lead;
  for (const auto& t : f.terms()) {
    if (f.profile()->compare_norm(t.exp, n->exponents()) == 0) lead.push_back(t);
  }
  return SeriesElement::from_terms(f.profile(), std::move(lead));
}

ExponentVec argnorm(const SeriesElement& f) {
  SeriesElement lead = leading_part(f);
  if (lead.size() != 1) {
    if (f.profile()->n() == 0 || f.profile()->all_free()) {
      throw InvariantError("two distinct monomials share a norm under a free profile");
    }
    throw std::domain_error("argnorm is not unique: " + std::to_string(lead.size()) + " terms tie");
  }
  return lead.terms().front().exp;
}

SeriesElement invert(const SeriesElement& f, const Value& target_floor) {
  require_same_profile(f.profile(), target_floor.profile());
  if (target_floor.is_zero()) throw std::invalid_argument("invert needs a nonzero target floor");
  if (f.empty()) throw PrecisionError("invert of an element below its floor");
  const auto& prof = f.profile();
  const ExponentVec lead_exp = argnorm(f);
  const Value fnorm(prof, lead_exp);
  if (value_div(f.floor(), fnorm) > target_floor) {
    throw PrecisionError("input floor too coarse for the requested inverse precision");
  }
  const std::uint32_t lead_c = f.coeff(lead_exp);
  ExponentVec inv_exp = ExponentVec(lead_exp.size()) - lead_exp;
  SeriesElement lead_inv = SeriesElement::monomial(prof, inv_exp, fp_inverse(lead_c, prof->p()));

  // f = L (1 - h) with |h| < 1
  SeriesElement h = sub(SeriesElement::one(prof), mul(lead_inv, f)).coarsened(target_floor);
  SeriesElement sum = SeriesElement::one(prof);
  if (auto hn = gauss_norm(h)) {
    // 1/(1-h) = prod_j F^j(1 + h + ... + h^(p-1)), F^j only rescales exponents
    SeriesElement g = SeriesElement::one(prof), hi = SeriesElement::one(prof);
    for (std::int64_t i = 1; i < prof->p(); ++i) {
      hi = mul(hi, h).coarsened(target_floor);
      g = add(g, hi);
    }
    sum = g;
    std::int64_t pj = prof->p();
    for (int j = 1; !(value_pow(*hn, Rational(pj)) < target_floor); ++j) {
      sum = mul(sum, frobenius_pow(g, j).coarsened(target_floor)).coarsened(target_floor);
      pj *= prof->p();
    }
  }
  return mul(lead_inv, sum);
}

SeriesElement frobenius_pow(const SeriesElement& f, int k) {
  if (k == 0) return f;
  const auto& prof = f.profile();
  std::int64_t pk = ipow(prof->p(), std::abs(k));
  Rational factor = k > 0 ? Rational(pk) : Rational(1, pk);
  std::vector<Term> terms = f.terms();
  for (auto& t : terms) t.exp = t.exp.scaled(factor);
  Value floor = f.floor().is_zero() ? f.floor() : value_pow(f.floor(), factor);
  return SeriesElement::from_terms(prof, std::move(terms), std::move(floor));
}

SeriesElement frobenius(const SeriesElement& f) { return frobenius_pow(f, 1); }
SeriesElement pth_root(const SeriesElement& f) { return frobenius_pow(f, -1); }

SeriesElement res_ge(const SeriesElement& beta, const Value& m) {
  require_same_profile(beta.profile(), m.profile());
  if (m < beta.floor()) throw PrecisionError("restriction level " + m.str() + " below floor " + beta.floor().str());
  std::vector<Term> kept;
  for (const auto& t : beta.terms()) {
    if (m.is_zero() || beta.profile()->compare_norm(t.exp, m.exponents()) >= 0) kept.push_back(t);
  }
  return SeriesElement::from_terms(beta.profile(), std::move(kept));
}

Value base_floor_for(const Value& eta, const ExponentVec& q) {
  const auto& prof = eta.profile();
  ProfilePtr base = prof->base();
  if (eta.is_zero()) return Value::zero(base);
  ExponentVec d = eta.exponents() - q.with_head(Rational(0));
  // Rational radii fold exactly; free radii leave an irrational bound.
  Rational a = d[0];
  bool rational = true;
  for (std::size_t i = 0; i < prof->n(); ++i) {
    const auto& r = prof->radii()[i];
    if (r.kind == RadiusSpec::Kind::Rational) {
      a += d[i + 1] * r.exponent;
    } else if (!d[i + 1].is_zero()) {
      rational = false;
    }
  }
  if (!rational) {
    auto weight_ok = [&](std::int64_t c) {
      ExponentVec e = q.with_head(Rational(c));
      return prof->compare_weight(e, eta.exponents()) <= 0;
    };
    auto c = static_cast<std::int64_t>(std::floor(prof->weight(d)));
    while (!weight_ok(c)) --c;
    while (weight_ok(c + 1)) ++c;
    a = Rational(c);
  }
  return Value::t_power(base, a);
}

CoefficientSplit split_coefficient(const SeriesElement& f, const ExponentVec& q) {
  const auto& prof = f.profile();
  if (q.size() != prof->n()) throw std::invalid_argument("x-exponent arity does not match profile");
  ProfilePtr base = prof->base();
  std::vector<Term> coeff;
  std::vector<Term> rest;
  for (const auto& t : f.terms()) {
    if (t.exp.tail() == q) {
      ExponentVec e(1);
      e[0] = t.exp[0];
      coeff.push_back({e, t.coeff});
    } else {
      rest.push_back(t);
    }
  }
  return {SeriesElement::from_terms(base, std::move(coeff), base_floor_for(f.floor(), q)),
          SeriesElement::from_terms(prof, std::move(rest), f.floor())};
}

SeriesElement embed_base(const SeriesElement& c, const ProfilePtr& target) {
  if (c.profile()->n() != 0) throw std::invalid_argument("embed_base expects an element of K");
  if (c.profile()->p() != target->p()) throw ProfileMismatch();
  ExponentVec zeros(target->n());
  std::vector<Term> terms;
  for (const auto& t : c.terms()) terms.push_back({zeros.with_head(t.exp[0]), t.coeff});
  Value floor = c.floor().is_zero() ? Value::zero(target) : Value(target, zeros.with_head(c.floor().a()));
  return SeriesElement::from_terms(target, std::move(terms), std::move(floor));
}

AdaptedCertificate is_adapted(const SeriesElement& beta, const ExponentVec& q) {
  const auto& prof = beta.profile();
  if (q.size() != prof->n()) throw std::invalid_argument("x-exponent arity does not match profile");
  const Value s = Value::threshold(prof);
  const Value s_pi = value_mul(s, Value::t_power(prof, Rational(1)));
  if (beta.floor() > s_pi) {
    throw PrecisionError("floor " + beta.floor().str() + " too coarse to decide the tail bound " + s_pi.str());
  }

  AdaptedCertificate cert;
  cert.q = q;
  cert.s = s;
  auto split = split_coefficient(beta, q);
  cert.b_q = split.coefficient;
  cert.tail_norm = norm_bound(split.rest);
  if (cert.tail_norm.is_zero()) cert.tail_norm = Value::zero(prof);

  auto n = gauss_norm(beta);
  cert.norm = n ? *n : Value::zero(prof);
  cert.bounded = n && s < *n && *n <= Value::one(prof);
  if (n) {
    SeriesElement lead = leading_part(beta);
    cert.argnorm_ok = lead.size() == 1 && lead.terms().front().exp.tail() == q;
  }
  cert.tail_ok = cert.tail_norm <= s_pi;

  if (!cert.bounded) cert.reason += "norm " + cert.norm.str() + " outside (s, 1]; ";
  if (!cert.argnorm_ok) cert.reason += "leading term not unique at x^" + q.str() + "; ";
  if (!cert.tail_ok) cert.reason += "tail " + cert.tail_norm.str() + " exceeds s|t| = " + s_pi.str() + "; ";
  return cert;
}

}  // namespace ultrametrica
