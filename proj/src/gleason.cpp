#include "ultrametrica/gleason.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ultrametrica/errors.hpp"

namespace ultrametrica {

// ---------------------------------------------------------------------------
// WellOrder

WellOrder::WellOrder(std::int64_t p, std::size_t n, LatticeKind kind) : p_(p), n_(n), kind_(kind) {
  if (!is_prime(p)) throw std::invalid_argument("well-order needs a prime p");
  if (n == 0 || n + 1 > kMaxExponents) throw std::invalid_argument("well-order dimension out of range");
}

int WellOrder::denominator_log(const ExponentVec& q, std::int64_t p) {
  int k = 0;
  for (const auto& e : q) {
    int ke = p_denominator_log(e, p);
    if (ke < 0) throw std::invalid_argument("exponent " + e.str() + " is not in Z[1/p]");
    k = std::max(k, ke);
  }
  return k;
}

std::int64_t WellOrder::height(const ExponentVec& q, std::int64_t p) {
  int k = denominator_log(q, p);
  std::int64_t h = k;
  const Rational scale(ipow(p, k));
  for (const auto& e : q) h = std::max(h, std::abs((e * scale).num()));
  return h;
}

bool WellOrder::contains(const ExponentVec& q) const {
  if (q.size() != n_) return false;
  for (const auto& e : q) {
    if (p_denominator_log(e, p_) < 0) return false;
    if (kind_ == LatticeKind::NonNegative && e.sign() < 0) return false;
    if (kind_ == LatticeKind::NonPositive && e.sign() > 0) return false;
  }
  return true;
}

void WellOrder::grow_to_height(std::int64_t h) const {
  struct Entry {
    std::int64_t k;
    std::int64_t maxabs;
    std::vector<std::int64_t> nums;
  };
  for (std::int64_t height = built_height_ + 1; height <= h; ++height) {
    const std::int64_t lo = kind_ == LatticeKind::NonNegative ? 0 : -height;
    const std::int64_t hi = kind_ == LatticeKind::NonPositive ? 0 : height;
    std::vector<Entry> cls;
    std::vector<std::int64_t> nums(n_);
    for (std::int64_t k = 0; k <= height; ++k) {
      std::fill(nums.begin(), nums.end(), lo);
      while (true) {
        std::int64_t maxabs = 0;
        bool primitive = (k == 0);
        for (auto v : nums) {
          maxabs = std::max(maxabs, std::abs(v));
          if (v % p_ != 0) primitive = true;
        }
        if (primitive && std::max(k, maxabs) == height) cls.push_back({k, maxabs, nums});
        std::size_t i = 0;
        while (i < n_ && nums[i] == hi) nums[i++] = lo;
        if (i == n_) break;
        ++nums[i];
      }
    }
    std::sort(cls.begin(), cls.end(), [](const Entry& a, const Entry& b) {
      if (a.k != b.k) return a.k < b.k;
      if (a.maxabs != b.maxabs) return a.maxabs < b.maxabs;
      return a.nums < b.nums;
    });
    for (const auto& e : cls) {
      ExponentVec q(n_);
      const std::int64_t den = ipow(p_, static_cast<int>(e.k));
      for (std::size_t i = 0; i < n_; ++i) q[i] = Rational(e.nums[i], den);
      seq_.push_back(q);
    }
    built_height_ = height;
  }
}

ExponentVec WellOrder::at(std::size_t m) const {
  if (m == 0) throw std::out_of_range("well-order positions start at 1");
  std::lock_guard lock(mu_);
  while (seq_.size() < m) grow_to_height(built_height_ + 1);
  return seq_[m - 1];
}

std::size_t WellOrder::index(const ExponentVec& q) const {
  if (!contains(q)) throw std::invalid_argument("exponent " + q.str() + " is not in J");
  std::int64_t h = height(q, p_);
  std::lock_guard lock(mu_);
  grow_to_height(h);
  auto it = std::find(seq_.begin(), seq_.end(), q);
  if (it == seq_.end()) throw InvariantError("well-order enumeration missed " + q.str());
  return static_cast<std::size_t>(it - seq_.begin()) + 1;
}

std::vector<Rational> min_zero_representation(const ExponentVec& q) {
  Rational h0(0);
  for (const auto& e : q) h0 = std::max(h0, -e);
  std::vector<Rational> h;
  for (const auto& e : q) h.push_back(e + h0);
  h.push_back(h0);
  return h;
}

// ---------------------------------------------------------------------------
// Windows

namespace {

ExponentVec t_shift(const ExponentVec& e, const Rational& a) {
  ExponentVec r = e;
  r[0] += a;
  return r;
}

// Point a of Z[1/p] with 0 < weight(mono + a) < weight(s), smallest denominator
// first, then the largest (or smallest) such a.
Rational window_point(const ProfilePtr& prof, const ExponentVec& mono, bool largest) {
  const ExponentVec& s = prof->threshold();
  const ExponentVec zero(prof->n() + 1);
  const double w = prof->weight(mono);
  const double sigma = prof->weight(s);
  auto inside = [&](const Rational& a) {
    ExponentVec e = t_shift(mono, a);
    return prof->compare_weight(e, zero) > 0 && prof->compare_weight(e, s) < 0;
  };
  for (int k = 0; k <= prof->max_denominator_log(); ++k) {
    const std::int64_t scale = ipow(prof->p(), k);
    if (largest) {
      auto j = static_cast<std::int64_t>(std::ceil((sigma - w) * static_cast<double>(scale))) + 1;
      while (!(prof->compare_weight(t_shift(mono, Rational(j, scale)), s) < 0)) --j;
      // j is now the largest grid point below the upper end
      for (std::int64_t t = j; t > j - 2; --t) {
        if (inside(Rational(t, scale))) return Rational(t, scale);
      }
    } else {
      auto j = static_cast<std::int64_t>(std::floor(-w * static_cast<double>(scale))) - 1;
      while (!(prof->compare_weight(t_shift(mono, Rational(j, scale)), zero) > 0)) ++j;
      for (std::int64_t t = j; t < j + 2; ++t) {
        if (inside(Rational(t, scale))) return Rational(t, scale);
      }
    }
  }
  throw std::invalid_argument("no t-exponent places " + mono.str() + " strictly between s and 1");
}

}  // namespace

Rational window_exponent(const ProfilePtr& profile, const ExponentVec& monomial) {
  return window_point(profile, monomial, true);
}

Rational standard_c_exponent(const ProfilePtr& profile) {
  ExponentVec inv(profile->n() + 1);
  for (std::size_t i = 1; i <= profile->n(); ++i) inv[i] = Rational(-1);
  return window_point(profile, inv, false);
}

// ---------------------------------------------------------------------------
// GleasonSchedule

GleasonSchedule::GleasonSchedule(ProfilePtr profile, std::vector<ExponentVec> v, LatticeKind kind, Representation rep,
                                 ScheduleOptions options)
    : profile_(std::move(profile)), v_(std::move(v)), rep_(std::move(rep)), options_(options) {
  if (profile_->n() == 0) throw std::invalid_argument("Gleason schedules need n >= 1");
  if (v_.empty()) throw std::invalid_argument("Gleason schedules need at least one monomial");
  if (options_.tail_margin < 1) throw std::invalid_argument("tail margin must be >= 1");
  const ExponentVec zero(profile_->n() + 1);
  for (const auto& m : v_) {
    if (m.size() != profile_->n() + 1) throw std::invalid_argument("monomial arity does not match profile");
    if (profile_->compare_weight(m, zero) <= 0) {
      throw std::invalid_argument("monomial " + m.str() + " does not have norm < 1");
    }
  }
  order_ = std::make_unique<WellOrder>(profile_->p(), profile_->n(), kind);
}

const GleasonStep& GleasonSchedule::step(std::size_t m) const {
  if (m == 0 || m > steps_.size()) throw DepthError("schedule step " + std::to_string(m) + " not built");
  return steps_[m - 1];
}

void GleasonSchedule::extend_to(std::size_t m) {
  while (steps_.size() < m) build_step();
}

void GleasonSchedule::build_step() {
  const auto& prof = profile_;
  const std::int64_t p = prof->p();
  const ExponentVec& s = prof->threshold();
  const ExponentVec zero(prof->n() + 1);

  GleasonStep st;
  st.m = steps_.size() + 1;
  st.omega = order_->at(st.m);
  st.h = rep_(st.omega);
  if (st.h.size() != v_.size()) throw std::invalid_argument("representation has the wrong length");
  st.w_exp = zero;
  for (std::size_t k = 0; k < v_.size(); ++k) {
    if (st.h[k].sign() < 0) throw std::invalid_argument("representation of " + st.omega.str() + " is not >= 0");
    st.w_exp += v_[k].scaled(st.h[k]);
  }
  if (!(st.w_exp.tail() == st.omega)) {
    throw std::invalid_argument("representation does not reproduce " + st.omega.str());
  }

  st.e = window_exponent(prof, st.w_exp);
  st.alpha_exp = t_shift(st.w_exp, st.e);

  // (2): eps e_i^{p^{b_i}} has norm <= 1 for i < m
  st.eps = Rational(0);
  for (const auto& prev : steps_) st.eps = std::max(st.eps, -(prev.e * Rational(ipow(p, prev.b))));

  const ExponentVec tail_bound = t_shift(s, Rational(options_.tail_margin));
  const ExponentVec m_level = t_shift(zero, Rational(static_cast<std::int64_t>(st.m)));
  auto check = [&](int b, GleasonStep& out) {
    const Rational pb(ipow(p, b));
    out.c1 = prof->compare_weight(st.alpha_exp.scaled(pb), m_level) > 0;
    ExponentVec lead = t_shift(st.alpha_exp, st.eps / pb);
    out.c3 = prof->compare_weight(lead, zero) > 0 && prof->compare_weight(lead, s) < 0;
    out.c4 = true;
    out.c5 = true;
    for (const auto& prev : steps_) {
      if (b < prev.b) {
        out.c4 = false;
        break;
      }
      const Rational rel(ipow(p, b - prev.b));
      if (prof->compare_weight(st.alpha_exp.scaled(rel), tail_bound) <= 0) out.c4 = false;
      if (st.omega.scaled(pb) == prev.omega.scaled(Rational(ipow(p, prev.b)))) out.c5 = false;
    }
    return out.c1 && out.c3 && out.c4 && out.c5;
  };

  int b = steps_.empty() ? 0 : steps_.back().b + 1;
  const int b_limit = max_p_power(p);
  while (!check(b, st)) {
    if (++b > b_limit) throw DenominatorCapError("b_" + std::to_string(st.m) + " exceeds the 64-bit power range");
  }
  st.b = b;

  st.c2 = true;
  for (const auto& prev : steps_) {
    Rational d = st.eps + prev.e * Rational(ipow(p, prev.b));
    if (d.sign() < 0) st.c2 = false;
    st.d.push_back(d);
  }
  if (!st.all_conditions()) throw InvariantError("schedule step " + std::to_string(st.m) + " violates a condition");
  steps_.push_back(std::move(st));
}

Value GleasonSchedule::truncation_floor(std::size_t depth) const {
  if (depth == 0) return Value::t_power(profile_, Rational(1));
  const auto& last = step(depth);
  ExponentVec f = t_shift(profile_->threshold(), Rational(options_.tail_margin));
  return Value(profile_, f.scaled(Rational(ipow(profile_->p(), last.b))));
}

SeriesElement GleasonSchedule::element(std::size_t depth) const {
  if (depth > steps_.size()) throw DepthError("element requested beyond the built depth");
  std::vector<Term> terms;
  for (std::size_t i = 0; i < depth; ++i) {
    const auto& st = steps_[i];
    terms.push_back({st.alpha_exp.scaled(Rational(ipow(profile_->p(), st.b))), 1});
  }
  return SeriesElement::from_terms(profile_, std::move(terms), truncation_floor(depth));
}

SeriesElement GleasonSchedule::combination(std::size_t m, std::size_t depth) const {
  if (m == 0 || m > depth) throw std::invalid_argument("combination needs 1 <= m <= depth");
  const auto& st = step(m);
  const std::int64_t p = profile_->p();
  SeriesElement eps = SeriesElement::t_power(profile_, st.eps);
  SeriesElement result = mul(eps, element(depth));
  std::vector<Term> sub_terms;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const auto& prev = steps_[i];
    ExponentVec e = t_shift(prev.w_exp.scaled(Rational(ipow(p, prev.b))), st.d[i]);
    sub_terms.push_back({e, 1});
  }
  return sub(result, SeriesElement::from_terms(profile_, std::move(sub_terms)));
}

SeriesElement GleasonSchedule::adapted_element(std::size_t m, std::size_t depth) const {
  return frobenius_pow(combination(m, depth), -step(m).b);
}

std::size_t GleasonSchedule::depth_for(std::size_t m, const Value& eta) {
  extend_to(m);
  const auto& prof = profile_;
  for (std::size_t depth = m; depth < m + 64; ++depth) {
    extend_to(depth);
    const auto& st = step(m);
    const Rational root(1, ipow(prof->p(), st.b));
    Value floor = value_pow(value_mul(Value::t_power(prof, st.eps), truncation_floor(depth)), root);
    if (floor <= eta) return depth;
  }
  throw DepthError("no schedule depth reaches the requested precision " + eta.str());
}

// ---------------------------------------------------------------------------
// Builders

GPlus build_gplus(ProfilePtr profile, std::size_t depth, ScheduleOptions options) {
  if (profile->n() != 1) throw std::invalid_argument("G+ lives over one radius");
  ExponentVec x{Rational(0), Rational(1)};
  auto rep = [](const ExponentVec& q) { return std::vector<Rational>{q[0]}; };
  auto sched = std::make_shared<GleasonSchedule>(profile, std::vector<ExponentVec>{x}, LatticeKind::NonNegative,
                                                 rep, options);
  sched->extend_to(depth);
  SeriesElement g = sched->element(depth);
  return {sched, g};
}

GMultivar build_gmultivar(ProfilePtr profile, std::vector<ExponentVec> v, LatticeKind kind, Representation rep,
                          std::size_t depth, ScheduleOptions options) {
  auto sched = std::make_shared<GleasonSchedule>(std::move(profile), std::move(v), kind, std::move(rep), options);
  sched->extend_to(depth);
  SeriesElement g = sched->element(depth);
  return {sched, g};
}

GMinus build_gminus(ProfilePtr profile, const Rational& c_exponent, std::size_t depth, ScheduleOptions options) {
  if (profile->n() != 1) throw std::invalid_argument("G- lives over one radius");
  ExponentVec cx{c_exponent, Rational(-1)};
  const ExponentVec zero(2);
  if (!(profile->compare_weight(cx, zero) > 0 && profile->compare_weight(cx, profile->threshold()) < 0)) {
    throw std::invalid_argument("c = t^" + c_exponent.str() + " does not satisfy s < |c/x| < 1");
  }
  auto rep = [](const ExponentVec& q) { return std::vector<Rational>{-q[0]}; };
  auto sched = std::make_shared<GleasonSchedule>(profile, std::vector<ExponentVec>{cx}, LatticeKind::NonPositive,
                                                 rep, options);
  sched->extend_to(depth);

  GMinus out;
  out.schedule = sched;
  out.g = sched->element(depth);
  ProfilePtr base = profile->base();
  std::vector<TateTerm> terms;
  for (const auto& st : sched->steps()) {
    const Rational pb(ipow(profile->p(), st.b));
    ExponentVec e(1);
    e[0] = st.h[0] * pb;
    Rational coeff = st.e * pb;
    if (coeff.sign() < 0) out.preimage_power_bounded = false;
    terms.push_back({e, SeriesElement::t_power(base, coeff)});
  }
  out.preimage = TateElement::from_terms(base, 1, std::move(terms));
  out.phi = HomSpec({SeriesElement::monomial(profile, cx)});
  return out;
}

// ---------------------------------------------------------------------------
// Standard surjection

SurjectionSpec::SurjectionSpec(ProfilePtr profile, std::size_t depth, ScheduleOptions options,
                               std::optional<Rational> c_exponent)
    : profile_(std::move(profile)), max_depth_(depth) {
  if (!profile_->all_free()) throw std::invalid_argument("the standard surjection needs a free profile");
  const std::size_t n = profile_->n();
  if (c_exponent) {
    ExponentVec cx(n + 1);
    cx[0] = *c_exponent;
    for (std::size_t i = 1; i <= n; ++i) cx[i] = Rational(-1);
    const ExponentVec zero(n + 1);
    if (!(profile_->compare_weight(cx, zero) > 0 && profile_->compare_weight(cx, profile_->threshold()) < 0)) {
      throw std::invalid_argument("c = t^" + c_exponent->str() + " does not satisfy s < |c x^-1| < 1");
    }
    c_ = *c_exponent;
  } else {
    c_ = standard_c_exponent(profile_);
  }
  std::vector<ExponentVec> v;
  for (std::size_t i = 0; i < n; ++i) {
    ExponentVec e(n + 1);
    e[i + 1] = Rational(1);
    v.push_back(e);
  }
  ExponentVec cx(n + 1);
  cx[0] = c_;
  for (std::size_t i = 1; i <= n; ++i) cx[i] = Rational(-1);
  v.push_back(cx);
  schedule_ = std::make_shared<GleasonSchedule>(profile_, std::move(v), LatticeKind::All, min_zero_representation,
                                                options);
  schedule_->extend_to(depth);
}

HomSpec SurjectionSpec::phi() const { return phi(schedule_->depth()); }

HomSpec SurjectionSpec::phi(std::size_t depth) const {
  std::vector<SeriesElement> images;
  for (const auto& v : schedule_->monomials()) images.push_back(SeriesElement::monomial(profile_, v));
  images.push_back(schedule_->element(depth));
  return HomSpec(std::move(images));
}

ExponentVec SurjectionSpec::tate_exponent(const std::vector<Rational>& h) const {
  ExponentVec e(n() + 2);
  for (std::size_t k = 0; k < h.size(); ++k) e[k] = h[k];
  return e;
}

TateElement SurjectionSpec::adapted_preimage(std::size_t m) const {
  const auto& st = schedule_->step(m);
  const std::int64_t p = profile_->p();
  const Rational root(1, ipow(p, st.b));
  ProfilePtr base = profile_->base();
  std::vector<TateTerm> terms;
  ExponentVec g_exp(n() + 2);
  g_exp[n() + 1] = root;
  terms.push_back({g_exp, SeriesElement::t_power(base, st.eps * root)});
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const auto& prev = schedule_->step(i + 1);
    const Rational rel = Rational(ipow(p, prev.b)) * root;
    terms.push_back({tate_exponent(prev.h).scaled(rel), SeriesElement::t_power(base, st.d[i] * root, -1)});
  }
  return TateElement::from_terms(base, n() + 2, std::move(terms));
}

OracleAnswer SurjectionSpec::oracle(const ExponentVec& q, const Value& precision) {
  std::size_t m = schedule_->order().index(q);
  if (m > max_depth_) {
    throw DepthError("exponent " + q.str() + " sits at position " + std::to_string(m) + " beyond depth " +
                     std::to_string(max_depth_));
  }
  std::lock_guard lock(mu_);
  auto it = cache_.find(q);
  if (it != cache_.end() && it->second.answer.image.floor() <= precision) return it->second.answer;
  std::size_t depth = schedule_->depth_for(m, precision);
  OracleAnswer ans;
  ans.image = schedule_->adapted_element(m, depth);
  ans.preimage = adapted_preimage(m);
  ans.certificate = is_adapted(ans.image, q);
  cache_[q] = Cached{depth, ans};
  return ans;
}

AdaptedOracle SurjectionSpec::as_oracle() {
  return [this](const ExponentVec& q, const Value& precision) { return oracle(q, precision); };
}

// ---------------------------------------------------------------------------
// Division

DivideResult divide_step(const AdaptedOracle& oracle, const SeriesElement& beta, std::size_t m,
                         std::size_t tate_vars, std::optional<Value> precision) {
  const auto& prof = beta.profile();
  ProfilePtr base = prof->base();
  const Value s = Value::threshold(prof);
  const Value upper = value_mul(s, Value::t_power(prof, Rational(static_cast<std::int64_t>(m))));
  const Value cut = value_mul(upper, Value::t_power(prof, Rational(1)));

  DivideResult out{TateElement(base, tate_vars), beta, 0};
  if (beta.empty()) return out;
  if (*gauss_norm(beta) > upper) {
    throw std::invalid_argument("division step " + std::to_string(m) + ": |beta| = " + gauss_norm(beta)->str() +
                                " exceeds |t|^m s = " + upper.str());
  }
  Value prec = precision ? *precision : beta.floor();
  if (prec.is_zero()) throw std::invalid_argument("division of an exact element needs a precision");

  // Terms above the cut, or every known term when the floor sits above the cut.
  SeriesElement head = res_ge(beta, max_value(cut, beta.floor()));
  std::map<ExponentVec, std::vector<Term>> groups;
  for (const auto& t : head.terms()) {
    ExponentVec e(1);
    e[0] = t.exp[0];
    groups[t.exp.tail()].push_back({e, t.coeff});
  }

  SeriesElement image_sum(prof);
  for (auto& [q, coeff_terms] : groups) {
    SeriesElement b_q = SeriesElement::from_terms(base, std::move(coeff_terms));
    const Value lead(prof, q.with_head(gauss_norm(b_q)->a()));
    Value want = value_div(value_mul(prec, s), lead);
    OracleAnswer ans = oracle(q, want);
    ++out.oracle_calls;
    if (!ans.certificate.passed()) {
      throw InvariantError("oracle element for " + q.str() + " is not adapted: " + ans.certificate.reason);
    }
    const SeriesElement& c_q = ans.certificate.b_q;
    if (c_q.size() != 1) throw InvariantError("oracle coefficient at " + q.str() + " is not a monomial");
    // d_q = b_q / c_q
    const Term& c = c_q.terms().front();
    ExponentVec inv_exp(1);
    inv_exp[0] = -c.exp[0];
    SeriesElement d_q = mul(b_q, SeriesElement::monomial(base, inv_exp, fp_inverse(c.coeff, base->p())));
    out.f = t_add(out.f, t_scale(ans.preimage, d_q));
    image_sum = add(image_sum, mul(embed_base(d_q, prof), ans.image));
  }
  out.residual = sub(beta, image_sum);
  if (auto rn = gauss_norm(out.residual); rn && *rn > cut) {
    throw InvariantError("division step " + std::to_string(m) + " left a residual of norm " + rn->str());
  }
  return out;
}

ReconstructResult reconstruct_preimage(const AdaptedOracle& oracle, const SeriesElement& beta, std::size_t steps,
                                       std::size_t tate_vars, std::optional<Value> precision) {
  const auto& prof = beta.profile();
  ProfilePtr base = prof->base();
  const Value s = Value::threshold(prof);
  ReconstructResult out{TateElement(base, tate_vars), 0, {}, {}};

  auto bn = gauss_norm(beta);
  int k = 0;
  if (bn) {
    while (value_mul(*bn, Value::t_power(prof, Rational(k))) > s) ++k;
  }
  SeriesElement current = mul(SeriesElement::t_power(prof, Rational(k)), beta);
  std::optional<Value> prec = precision;
  if (prec) prec = value_mul(*prec, Value::t_power(prof, Rational(k)));
  if (!prec && current.is_exact()) {
    prec = value_mul(s, Value::t_power(prof, Rational(static_cast<std::int64_t>(steps) + 1)));
  }

  const Value unscale = Value::t_power(prof, Rational(-k));
  TateElement f(base, tate_vars);
  for (std::size_t m = 0; m < steps; ++m) {
    DivideResult r = divide_step(oracle, current, m, tate_vars, prec);
    f = t_add(f, r.f);
    current = r.residual;
    out.residual_norms.push_back(value_mul(norm_bound(current), unscale));
    out.below_floor.push_back(current.empty());
  }
  out.rescale = k;
  out.f = k == 0 ? f : t_scale(f, SeriesElement::t_power(base, Rational(-k)));
  return out;
}

}  // namespace ultrametrica
