#include "ultrametrica/valuegroup.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ultrametrica/errors.hpp"

namespace ultrametrica {

// ---------------------------------------------------------------------------
// ExponentVec

ExponentVec::ExponentVec(std::size_t size) {
  if (size > kMaxExponents) throw std::length_error("too many exponents");
  size_ = static_cast<std::uint8_t>(size);
}

ExponentVec::ExponentVec(std::initializer_list<Rational> init) : ExponentVec(init.size()) {
  std::copy(init.begin(), init.end(), v_.begin());
}

bool ExponentVec::is_zero() const {
  return std::all_of(begin(), end(), [](const Rational& r) { return r.is_zero(); });
}

ExponentVec& ExponentVec::operator+=(const ExponentVec& o) {
  if (o.size_ != size_) throw std::invalid_argument("exponent vector size mismatch");
  for (std::size_t i = 0; i < size_; ++i) v_[i] += o.v_[i];
  return *this;
}

ExponentVec& ExponentVec::operator-=(const ExponentVec& o) {
  if (o.size_ != size_) throw std::invalid_argument("exponent vector size mismatch");
  for (std::size_t i = 0; i < size_; ++i) v_[i] -= o.v_[i];
  return *this;
}

ExponentVec ExponentVec::scaled(const Rational& k) const {
  ExponentVec r = *this;
  for (std::size_t i = 0; i < size_; ++i) r.v_[i] *= k;
  return r;
}

ExponentVec ExponentVec::tail() const {
  if (size_ == 0) throw std::length_error("tail of empty exponent vector");
  ExponentVec r(size_ - 1);
  for (std::size_t i = 1; i < size_; ++i) r.v_[i - 1] = v_[i];
  return r;
}

ExponentVec ExponentVec::with_head(const Rational& head) const {
  ExponentVec r(size_ + 1);
  r.v_[0] = head;
  for (std::size_t i = 0; i < size_; ++i) r.v_[i + 1] = v_[i];
  return r;
}

bool operator==(const ExponentVec& a, const ExponentVec& b) {
  if (a.size_ != b.size_) return false;
  for (std::size_t i = 0; i < a.size_; ++i) {
    if (!(a.v_[i] == b.v_[i])) return false;
  }
  return true;
}

std::strong_ordering operator<=>(const ExponentVec& a, const ExponentVec& b) {
  if (a.size_ != b.size_) return a.size_ <=> b.size_;
  for (std::size_t i = 0; i < a.size_; ++i) {
    if (auto c = a.v_[i] <=> b.v_[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::string ExponentVec::str() const {
  std::string out = "(";
  for (std::size_t i = 0; i < size_; ++i) {
    if (i) out += ",";
    out += v_[i].str();
  }
  return out + ")";
}

// ---------------------------------------------------------------------------
// Exact sign determination

namespace {

mpz_class to_mpz(std::int64_t v) {
  mpz_class z;
  mpz_set_si(z.get_mpz_t(), static_cast<long>(v));
  return z;
}

}  // namespace

int sign_of_surd_sum(const Rational& a, const std::vector<std::pair<Rational, std::int64_t>>& terms) {
  bool all_zero = true;
  for (const auto& [c, d] : terms) {
    if (!c.is_zero()) all_zero = false;
  }
  if (all_zero) return a.sign();

  // Fast path: a double evaluation whose error bound clearly excludes zero.
  double approx = a.to_double();
  double scale = std::fabs(approx);
  for (const auto& [c, d] : terms) {
    double t = c.to_double() * std::sqrt(static_cast<double>(d));
    approx += t;
    scale += std::fabs(t);
  }
  if (std::fabs(approx) > 1e-9 * (1.0 + scale)) return approx > 0 ? 1 : -1;

  // Exact path. 1 and sqrt(d_j) are Q-linearly independent for distinct
  // squarefree d_j, so a nonzero coefficient means a nonzero sum and the
  // refinement below terminates.
  mpz_class lcm = to_mpz(a.den());
  for (const auto& [c, d] : terms) {
    mpz_class cd = to_mpz(c.den());
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), cd.get_mpz_t());
  }
  auto scaled = [&](const Rational& r) {
    mpz_class v = to_mpz(r.num()) * lcm;
    v /= to_mpz(r.den());
    return v;
  };
  mpz_class big_a = scaled(a);
  std::vector<mpz_class> coeff;
  std::vector<mpz_class> radicand;
  for (const auto& [c, d] : terms) {
    coeff.push_back(scaled(c));
    radicand.push_back(to_mpz(d));
  }

  for (unsigned bits = 64;; bits *= 2) {
    mpz_class two_k;
    mpz_ui_pow_ui(two_k.get_mpz_t(), 2, bits);
    mpz_class four_k = two_k * two_k;
    mpz_class lo = big_a * two_k;
    mpz_class hi = lo;
    for (std::size_t j = 0; j < coeff.size(); ++j) {
      mpz_class root;
      mpz_class arg = radicand[j] * four_k;
      mpz_sqrt(root.get_mpz_t(), arg.get_mpz_t());
      // root <= sqrt(d) 2^bits < root + 1
      if (sgn(coeff[j]) >= 0) {
        lo += coeff[j] * root;
        hi += coeff[j] * (root + 1);
      } else {
        lo += coeff[j] * (root + 1);
        hi += coeff[j] * root;
      }
    }
    if (sgn(lo) > 0) return 1;
    if (sgn(hi) < 0) return -1;
    if (bits > (1u << 20)) throw InvariantError("sign refinement did not terminate");
  }
}

// ---------------------------------------------------------------------------
// RadiusProfile

ProfilePtr RadiusProfile::make(std::int64_t p, std::vector<RadiusSpec> radii,
                               std::optional<ExponentVec> s, int max_denominator_log) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime, got " + std::to_string(p));
  if (radii.size() + 1 > kMaxExponents) throw std::invalid_argument("too many radii");
  if (max_denominator_log < 0 || max_denominator_log > max_p_power(p)) {
    throw std::invalid_argument("denominator cap out of range for p = " + std::to_string(p));
  }
  std::set<std::int64_t> roots;
  auto prof = std::shared_ptr<RadiusProfile>(new RadiusProfile());
  prof->p_ = p;
  prof->max_den_log_ = max_denominator_log;
  for (const auto& r : radii) {
    if (r.kind == RadiusSpec::Kind::Free) {
      if (r.root <= 1 || !is_squarefree(r.root)) {
        throw std::invalid_argument("free radius needs a squarefree root > 1, got " + std::to_string(r.root));
      }
      if (!roots.insert(r.root).second) {
        throw std::invalid_argument("free radius roots must be distinct");
      }
      prof->alpha_.push_back(std::sqrt(static_cast<double>(r.root)));
    } else {
      if (r.exponent.sign() < 0) throw std::invalid_argument("radius exponent must be >= 0 (radius <= 1)");
      prof->alpha_.push_back(r.exponent.to_double());
    }
  }
  prof->radii_ = std::move(radii);
  prof->s_ = s.value_or(default_threshold(prof->radii_.size()));
  if (prof->s_.size() != prof->radii_.size() + 1) throw std::invalid_argument("threshold has wrong arity");
  if (prof->weight_sign(prof->s_) <= 0) throw std::invalid_argument("threshold s must satisfy 0 < s < 1");
  return prof;
}

ProfilePtr RadiusProfile::free(std::int64_t p, std::size_t n, int max_denominator_log) {
  static constexpr std::int64_t kRoots[] = {2, 3, 5, 6, 7, 10, 11, 13};
  if (n > std::size(kRoots)) throw std::invalid_argument("too many radii");
  std::vector<RadiusSpec> radii;
  for (std::size_t i = 0; i < n; ++i) radii.push_back(RadiusSpec::free(kRoots[i]));
  return make(p, std::move(radii), std::nullopt, max_denominator_log);
}

ExponentVec RadiusProfile::default_threshold(std::size_t n) {
  ExponentVec s(n + 1);
  for (std::size_t i = 0; i <= n; ++i) s[i] = Rational(2);
  return s;
}

bool RadiusProfile::all_free() const {
  return !radii_.empty() &&
         std::all_of(radii_.begin(), radii_.end(), [](const RadiusSpec& r) { return r.kind == RadiusSpec::Kind::Free; });
}

bool RadiusProfile::any_free() const {
  return std::any_of(radii_.begin(), radii_.end(), [](const RadiusSpec& r) { return r.kind == RadiusSpec::Kind::Free; });
}

ProfilePtr RadiusProfile::base() const {
  return make(p_, {}, std::nullopt, max_den_log_);
}

ProfilePtr RadiusProfile::with_threshold(const ExponentVec& s) const {
  return make(p_, radii_, s, max_den_log_);
}

ProfilePtr RadiusProfile::with_max_denominator_log(int k) const {
  return make(p_, radii_, s_, k);
}

double RadiusProfile::weight(const ExponentVec& e) const {
  double w = e[0].to_double();
  for (std::size_t i = 0; i < radii_.size(); ++i) w += e[i + 1].to_double() * alpha_[i];
  return w;
}

int RadiusProfile::weight_sign(const ExponentVec& e) const {
  Rational a = e[0];
  std::vector<std::pair<Rational, std::int64_t>> surds;
  for (std::size_t i = 0; i < radii_.size(); ++i) {
    const auto& r = radii_[i];
    if (r.kind == RadiusSpec::Kind::Rational) {
      a += e[i + 1] * r.exponent;
    } else {
      surds.emplace_back(e[i + 1], r.root);
    }
  }
  return sign_of_surd_sum(a, surds);
}

std::weak_ordering RadiusProfile::compare_weight(const ExponentVec& u, const ExponentVec& v) const {
  double wu = weight(u);
  double wv = weight(v);
  double scale = std::fabs(u[0].to_double()) + std::fabs(v[0].to_double());
  for (std::size_t i = 0; i < radii_.size(); ++i) {
    scale += (std::fabs(u[i + 1].to_double()) + std::fabs(v[i + 1].to_double())) * alpha_[i];
  }
  if (std::fabs(wu - wv) > 1e-9 * (1.0 + scale)) {
    return wu < wv ? std::weak_ordering::less : std::weak_ordering::greater;
  }
  int s = weight_sign(u - v);
  if (s < 0) return std::weak_ordering::less;
  if (s > 0) return std::weak_ordering::greater;
  return std::weak_ordering::equivalent;
}

bool operator==(const RadiusProfile& a, const RadiusProfile& b) {
  return a.p_ == b.p_ && a.radii_ == b.radii_ && a.s_ == b.s_ && a.max_den_log_ == b.max_den_log_;
}

bool same_profile(const ProfilePtr& a, const ProfilePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

void require_same_profile(const ProfilePtr& a, const ProfilePtr& b) {
  if (!same_profile(a, b)) throw ProfileMismatch();
}

// ---------------------------------------------------------------------------
// Value

Value::Value(ProfilePtr profile, ExponentVec exps) : profile_(std::move(profile)), exps_(exps), zero_(false) {
  if (!profile_) throw std::invalid_argument("value without profile");
  if (exps_.size() != profile_->n() + 1) throw std::invalid_argument("value arity does not match profile");
}

Value::Value(ProfilePtr profile, Rational a, const std::vector<Rational>& q) : profile_(std::move(profile)), zero_(false) {
  if (!profile_) throw std::invalid_argument("value without profile");
  if (q.size() != profile_->n()) throw std::invalid_argument("value arity does not match profile");
  exps_ = ExponentVec(q.size() + 1);
  exps_[0] = a;
  for (std::size_t i = 0; i < q.size(); ++i) exps_[i + 1] = q[i];
}

Value Value::zero(ProfilePtr profile) {
  Value v;
  v.profile_ = std::move(profile);
  v.exps_ = ExponentVec(v.profile_->n() + 1);
  v.zero_ = true;
  return v;
}

Value Value::one(ProfilePtr profile) {
  std::size_t n = profile->n();
  return Value(std::move(profile), ExponentVec(n + 1));
}

Value Value::t_power(ProfilePtr profile, Rational a) {
  ExponentVec e(profile->n() + 1);
  e[0] = a;
  return Value(std::move(profile), e);
}

Value Value::threshold(ProfilePtr profile) {
  ExponentVec s = profile->threshold();
  return Value(std::move(profile), s);
}

double Value::weight() const {
  if (zero_) return INFINITY;
  return profile_->weight(exps_);
}

std::string Value::str() const {
  if (zero_) return "0";
  std::string out = "<" + exps_[0].str() + ";";
  for (std::size_t i = 1; i < exps_.size(); ++i) {
    if (i > 1) out += ",";
    out += exps_[i].str();
  }
  return out + ">";
}

std::weak_ordering compare(const Value& u, const Value& v) {
  require_same_profile(u.profile(), v.profile());
  if (u.is_zero() || v.is_zero()) {
    if (u.is_zero() && v.is_zero()) return std::weak_ordering::equivalent;
    return u.is_zero() ? std::weak_ordering::less : std::weak_ordering::greater;
  }
  return u.profile()->compare_norm(u.exponents(), v.exponents());
}

const Value& max_value(const Value& u, const Value& v) { return compare(u, v) < 0 ? v : u; }
const Value& min_value(const Value& u, const Value& v) { return compare(u, v) < 0 ? u : v; }

Value value_mul(const Value& u, const Value& v) {
  require_same_profile(u.profile(), v.profile());
  if (u.is_zero() || v.is_zero()) return Value::zero(u.profile());
  return Value(u.profile(), u.exponents() + v.exponents());
}

Value value_pow(const Value& u, const Rational& e) {
  if (u.is_zero()) {
    if (e.sign() <= 0) throw std::domain_error("zero raised to a non-positive power");
    return u;
  }
  return Value(u.profile(), u.exponents().scaled(e));
}

Value value_inv(const Value& u) { return value_pow(u, Rational(-1)); }

Value value_div(const Value& u, const Value& v) {
  if (v.is_zero()) throw std::domain_error("division by the zero value");
  return value_mul(u, value_inv(v));
}

bool in_sqrt_K(const Value& v) {
  if (v.is_zero()) throw std::domain_error("in_sqrt_K of the zero value");
  const auto& radii = v.profile()->radii();
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i].kind == RadiusSpec::Kind::Free && !v.q(i).is_zero()) return false;
  }
  return true;
}

}  // namespace ultrametrica
