#include "ultrametrica/tatealg.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "ultrametrica/errors.hpp"

namespace ultrametrica {

namespace {

Value embed_value(const Value& v, const ProfilePtr& target) {
  if (v.is_zero()) return Value::zero(target);
  return Value(target, ExponentVec(target->n()).with_head(v.a()));
}

SeriesElement pow_coarse(const SeriesElement& f, std::int64_t k, const Value& floor) {
  SeriesElement result = SeriesElement::one(f.profile()).coarsened(floor);
  SeriesElement base = f.coarsened(floor);
  while (k > 0) {
    if (k & 1) result = mul(result, base).coarsened(floor);
    k >>= 1;
    if (k) base = mul(base, base).coarsened(floor);
  }
  return result;
}

}  // namespace

TateElement::TateElement(ProfilePtr base, std::size_t m) : TateElement(base, m, Value::zero(base)) {}

TateElement::TateElement(ProfilePtr base, std::size_t m, Value floor)
    : base_(std::move(base)), m_(m), floor_(std::move(floor)) {
  if (!base_ || base_->n() != 0) throw std::invalid_argument("Tate coefficients must live in the base field");
  if (m_ + 1 > kMaxExponents) throw std::invalid_argument("too many Tate variables");
  require_same_profile(base_, floor_.profile());
}

TateElement TateElement::from_terms(ProfilePtr base, std::size_t m, std::vector<TateTerm> terms, Value floor) {
  TateElement f(std::move(base), m, std::move(floor));
  f.terms_ = std::move(terms);
  f.normalize();
  return f;
}

TateElement TateElement::from_terms(ProfilePtr base, std::size_t m, std::vector<TateTerm> terms) {
  Value z = Value::zero(base);
  return from_terms(std::move(base), m, std::move(terms), std::move(z));
}

TateElement TateElement::monomial(ProfilePtr base, std::size_t m, ExponentVec exp, SeriesElement c) {
  std::vector<TateTerm> terms;
  terms.push_back({exp, std::move(c)});
  return from_terms(std::move(base), m, std::move(terms));
}

TateElement TateElement::variable(ProfilePtr base, std::size_t m, std::size_t i) {
  if (i >= m) throw std::out_of_range("Tate variable index out of range");
  ExponentVec e(m);
  e[i] = Rational(1);
  SeriesElement one = SeriesElement::one(base);
  return monomial(std::move(base), m, e, std::move(one));
}

TateElement TateElement::constant(ProfilePtr base, std::size_t m, SeriesElement c) {
  return monomial(std::move(base), m, ExponentVec(m), std::move(c));
}

void TateElement::normalize() {
  for (const auto& t : terms_) {
    if (t.exp.size() != m_) throw std::invalid_argument("Tate exponent arity mismatch");
    for (const auto& e : t.exp) {
      if (e.sign() < 0) throw std::invalid_argument("Tate exponents must be nonnegative");
      int k = p_denominator_log(e, base_->p());
      if (k < 0) throw std::invalid_argument("Tate exponent " + e.str() + " lacks a p-power denominator");
      if (k > base_->max_denominator_log()) throw DenominatorCapError("Tate exponent " + e.str() + " exceeds the cap");
    }
    require_same_profile(base_, t.coeff.profile());
    floor_ = max_value(floor_, t.coeff.floor());
  }
  std::sort(terms_.begin(), terms_.end(), [](const TateTerm& a, const TateTerm& b) { return a.exp < b.exp; });
  std::vector<TateTerm> merged;
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().exp == t.exp) {
      merged.back().coeff = add(merged.back().coeff, t.coeff);
    } else {
      merged.push_back(std::move(t));
    }
  }
  terms_.clear();
  for (auto& t : merged) {
    t.coeff = t.coeff.coarsened(floor_);
    if (!t.coeff.empty()) terms_.push_back(std::move(t));
  }
}

TateElement TateElement::coarsened(const Value& eta) const {
  TateElement r = *this;
  r.floor_ = max_value(floor_, eta);
  r.normalize();
  return r;
}

std::string TateElement::str() const {
  std::string out;
  for (const auto& t : terms_) {
    if (!out.empty()) out += " + ";
    out += "(" + t.coeff.str() + ")*T^" + t.exp.str();
  }
  if (out.empty()) out = "0";
  if (!floor_.is_zero()) out += " + O(" + floor_.str() + ")";
  return out;
}

TateElement t_add(const TateElement& f, const TateElement& g) {
  require_same_profile(f.base(), g.base());
  if (f.vars() != g.vars()) throw std::invalid_argument("Tate variable count mismatch");
  std::vector<TateTerm> terms = f.terms();
  terms.insert(terms.end(), g.terms().begin(), g.terms().end());
  return TateElement::from_terms(f.base(), f.vars(), std::move(terms), max_value(f.floor(), g.floor()));
}

TateElement t_neg(const TateElement& f) {
  std::vector<TateTerm> terms = f.terms();
  for (auto& t : terms) t.coeff = neg(t.coeff);
  return TateElement::from_terms(f.base(), f.vars(), std::move(terms), f.floor());
}

TateElement t_sub(const TateElement& f, const TateElement& g) { return t_add(f, t_neg(g)); }

std::optional<Value> t_gauss_norm(const TateElement& f) {
  std::optional<Value> best;
  for (const auto& t : f.terms()) {
    auto n = gauss_norm(t.coeff);
    if (n && (!best || *best < *n)) best = *n;
  }
  return best;
}

TateElement t_mul(const TateElement& f, const TateElement& g) {
  require_same_profile(f.base(), g.base());
  if (f.vars() != g.vars()) throw std::invalid_argument("Tate variable count mismatch");
  auto nf = t_gauss_norm(f);
  auto ng = t_gauss_norm(g);
  const Value bf = nf ? *nf : f.floor();
  const Value bg = ng ? *ng : g.floor();
  Value floor = max_value(max_value(value_mul(f.floor(), bg), value_mul(g.floor(), bf)),
                          value_mul(f.floor(), g.floor()));
  std::vector<TateTerm> terms;
  for (const auto& a : f.terms()) {
    for (const auto& b : g.terms()) {
      SeriesElement c = mul(a.coeff, b.coeff).coarsened(floor);
      if (!c.empty()) terms.push_back({a.exp + b.exp, std::move(c)});
    }
  }
  return TateElement::from_terms(f.base(), f.vars(), std::move(terms), floor);
}

TateElement t_scale(const TateElement& f, const SeriesElement& c) {
  require_same_profile(f.base(), c.profile());
  auto nc = gauss_norm(c);
  auto nf = t_gauss_norm(f);
  const Value bc = nc ? *nc : c.floor();
  const Value bf = nf ? *nf : f.floor();
  Value floor = max_value(max_value(value_mul(f.floor(), bc), value_mul(c.floor(), bf)),
                          value_mul(f.floor(), c.floor()));
  std::vector<TateTerm> terms;
  for (const auto& t : f.terms()) terms.push_back({t.exp, mul(t.coeff, c).coarsened(floor)});
  return TateElement::from_terms(f.base(), f.vars(), std::move(terms), floor);
}

TateElement t_frobenius_pow(const TateElement& f, int k) {
  if (k == 0) return f;
  std::int64_t pk = ipow(f.base()->p(), std::abs(k));
  Rational factor = k > 0 ? Rational(pk) : Rational(1, pk);
  std::vector<TateTerm> terms;
  for (const auto& t : f.terms()) terms.push_back({t.exp.scaled(factor), frobenius_pow(t.coeff, k)});
  Value floor = f.floor().is_zero() ? f.floor() : value_pow(f.floor(), factor);
  return TateElement::from_terms(f.base(), f.vars(), std::move(terms), std::move(floor));
}

TateElement t_frobenius(const TateElement& f) { return t_frobenius_pow(f, 1); }
TateElement t_pth_root(const TateElement& f) { return t_frobenius_pow(f, -1); }

HomSpec::HomSpec(std::vector<SeriesElement> images) : images_(std::move(images)) {
  if (images_.empty()) return;
  target_ = images_.front().profile();
  const Value one = Value::one(target_);
  for (std::size_t i = 0; i < images_.size(); ++i) {
    require_same_profile(target_, images_[i].profile());
    if (norm_bound(images_[i]) > one) {
      throw std::invalid_argument("image of T_" + std::to_string(i + 1) + " is not power-bounded");
    }
  }
}

SeriesElement evaluate(const TateElement& f, const HomSpec& phi, const Value& target_floor) {
  if (f.vars() != phi.vars()) throw std::invalid_argument("homomorphism arity does not match");
  if (phi.vars() == 0) throw std::invalid_argument("evaluation needs at least one variable image");
  const ProfilePtr& target = phi.target();
  require_same_profile(target, target_floor.profile());
  if (f.base()->p() != target->p()) throw ProfileMismatch();

  const Value work = max_value(target_floor, embed_value(f.floor(), target));
  if (work.is_zero()) throw std::invalid_argument("evaluate needs a nonzero floor");

  std::vector<std::pair<Value, const TateTerm*>> order;
  for (const auto& t : f.terms()) order.emplace_back(embed_value(norm_bound(t.coeff), target), &t);
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return b.first < a.first; });

  const Value one = Value::one(target);
  const Value top = order.empty() ? one : max_value(order.front().first, one);
  const Value mono_floor = value_div(work, top);

  std::map<std::pair<std::size_t, Rational>, SeriesElement> powers;
  auto image_power = [&](std::size_t i, const Rational& e) -> const SeriesElement& {
    auto key = std::make_pair(i, e);
    auto it = powers.find(key);
    if (it != powers.end()) return it->second;
    int k = p_denominator_log(e, target->p());
    SeriesElement root = frobenius_pow(phi.images()[i], -k);
    std::int64_t num = (e * Rational(ipow(target->p(), k))).num();
    return powers.emplace(key, pow_coarse(root, num, mono_floor)).first->second;
  };

  SeriesElement result(target, work);
  for (const auto& [norm, term] : order) {
    if (norm < work) break;
    SeriesElement mono = SeriesElement::one(target).coarsened(mono_floor);
    for (std::size_t i = 0; i < f.vars(); ++i) {
      if (term->exp[i].is_zero()) continue;
      mono = mul(mono, image_power(i, term->exp[i])).coarsened(mono_floor);
    }
    result = add(result, mul(embed_base(term->coeff, target), mono));
  }
  return result.coarsened(work);
}

}  // namespace ultrametrica
