#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ultrametrica/rational.hpp"

namespace ultrametrica {

/// Capacity of an exponent vector: one |t| exponent plus up to eight variables.
inline constexpr std::size_t kMaxExponents = 9;

/// Fixed-capacity vector of rational exponents with value semantics.
///
/// Used for monomial exponents (t-exponent first, then x_1..x_n), for value-group
/// elements <a; q_1..q_n>, and for Tate monomials T_1^{e_1}..T_m^{e_m}.
class ExponentVec {
 public:
  ExponentVec() = default;
  explicit ExponentVec(std::size_t size);
  ExponentVec(std::initializer_list<Rational> init);

  std::size_t size() const { return size_; }
  const Rational& operator[](std::size_t i) const { return v_[i]; }
  Rational& operator[](std::size_t i) { return v_[i]; }
  const Rational* begin() const { return v_.data(); }
  const Rational* end() const { return v_.data() + size_; }

  bool is_zero() const;

  ExponentVec& operator+=(const ExponentVec& o);
  ExponentVec& operator-=(const ExponentVec& o);
  ExponentVec scaled(const Rational& k) const;
  friend ExponentVec operator+(ExponentVec a, const ExponentVec& b) { return a += b; }
  friend ExponentVec operator-(ExponentVec a, const ExponentVec& b) { return a -= b; }

  /// Drops the leading component (t-exponent), leaving the variable part.
  ExponentVec tail() const;
  /// Prepends `head` to this vector.
  ExponentVec with_head(const Rational& head) const;

  friend bool operator==(const ExponentVec& a, const ExponentVec& b);
  friend std::strong_ordering operator<=>(const ExponentVec& a, const ExponentVec& b);

  std::string str() const;

 private:
  std::array<Rational, kMaxExponents> v_{};
  std::uint8_t size_ = 0;
};

/// How one radius r_i relates to |t|.
struct RadiusSpec {
  enum class Kind { Rational, Free };
  Kind kind = Kind::Rational;
  Rational exponent;       // Rational: r_i = |t|^exponent
  std::int64_t root = 0;   // Free: r_i = |t|^sqrt(root), root squarefree > 1

  static RadiusSpec rational(Rational e) { return {Kind::Rational, e, 0}; }
  static RadiusSpec free(std::int64_t d) { return {Kind::Free, Rational(0), d}; }

  friend bool operator==(const RadiusSpec&, const RadiusSpec&) = default;
};

class RadiusProfile;
using ProfilePtr = std::shared_ptr<const RadiusProfile>;

/// The prime p, the polyradius (r_1..r_n) and the adaptedness threshold s.
///
/// All norms are powers of |t|: a monomial t^a x^q has weight a + sum q_i alpha_i
/// where r_i = |t|^alpha_i, and larger weight means smaller norm. The threshold s
/// is stored as an exponent vector <a; q> so that irrational thresholds such as
/// |t|^{2(1+sqrt 2)} are exact.
class RadiusProfile {
 public:
  static constexpr int kDefaultMaxDenominatorLog = 16;

  static ProfilePtr make(std::int64_t p, std::vector<RadiusSpec> radii,
                         std::optional<ExponentVec> s = std::nullopt,
                         int max_denominator_log = kDefaultMaxDenominatorLog);

  /// n free radii sqrt(2), sqrt(3), sqrt(5), ... with the default threshold.
  static ProfilePtr free(std::int64_t p, std::size_t n,
                         int max_denominator_log = kDefaultMaxDenominatorLog);

  /// The default threshold s = |t|^{2(1 + sum alpha_i)}, i.e. <2; 2, ..., 2>.
  static ExponentVec default_threshold(std::size_t n);

  std::int64_t p() const { return p_; }
  std::size_t n() const { return radii_.size(); }
  const std::vector<RadiusSpec>& radii() const { return radii_; }
  const ExponentVec& threshold() const { return s_; }
  int max_denominator_log() const { return max_den_log_; }

  /// True when n >= 1 and every radius is free; then term norms never tie.
  bool all_free() const;
  /// True when some radius is free (value group strictly larger than |t|^Q).
  bool any_free() const;

  /// Profile of the base field K: same p and cap, no radii.
  ProfilePtr base() const;
  /// Same radii, different threshold.
  ProfilePtr with_threshold(const ExponentVec& s) const;
  /// Same everything, different denominator cap.
  ProfilePtr with_max_denominator_log(int k) const;

  double alpha(std::size_t i) const { return alpha_[i]; }
  /// Floating approximation of a + sum q_i alpha_i.
  double weight(const ExponentVec& e) const;
  /// Exact sign of the weight of `e` (exact zero test, then interval refinement).
  int weight_sign(const ExponentVec& e) const;
  /// Order of the weights of two <a; q> vectors.
  std::weak_ordering compare_weight(const ExponentVec& u, const ExponentVec& v) const;
  /// Order of the norms |t|^weight (reverse of the weight order).
  std::weak_ordering compare_norm(const ExponentVec& u, const ExponentVec& v) const {
    return compare_weight(v, u);
  }

  friend bool operator==(const RadiusProfile& a, const RadiusProfile& b);

 private:
  RadiusProfile() = default;

  std::int64_t p_ = 2;
  std::vector<RadiusSpec> radii_;
  std::vector<double> alpha_;
  ExponentVec s_;
  int max_den_log_ = kDefaultMaxDenominatorLog;
};

bool same_profile(const ProfilePtr& a, const ProfilePtr& b);
void require_same_profile(const ProfilePtr& a, const ProfilePtr& b);

/// Exact sign of a + sum_j c_j sqrt(d_j) for distinct squarefree d_j > 1.
int sign_of_surd_sum(const Rational& a, const std::vector<std::pair<Rational, std::int64_t>>& terms);

/// An element of the value monoid: zero, or |t|^a r_1^{q_1} ... r_n^{q_n}.
class Value {
 public:
  Value() = default;
  Value(ProfilePtr profile, ExponentVec exps);
  Value(ProfilePtr profile, Rational a, const std::vector<Rational>& q);

  static Value zero(ProfilePtr profile);
  static Value one(ProfilePtr profile);
  /// |t|^a.
  static Value t_power(ProfilePtr profile, Rational a);
  /// The threshold s of the profile.
  static Value threshold(ProfilePtr profile);

  bool is_zero() const { return zero_; }
  const ProfilePtr& profile() const { return profile_; }
  /// <a; q_1..q_n>; meaningless for zero.
  const ExponentVec& exponents() const { return exps_; }
  const Rational& a() const { return exps_[0]; }
  const Rational& q(std::size_t i) const { return exps_[i + 1]; }

  /// Weight a + sum q_i alpha_i as a double (infinite for zero).
  double weight() const;
  std::string str() const;

 private:
  ProfilePtr profile_;
  ExponentVec exps_;
  bool zero_ = true;
};

/// Norm order: less means |u| < |v|.
std::weak_ordering compare(const Value& u, const Value& v);

inline bool operator<(const Value& u, const Value& v) { return compare(u, v) < 0; }
inline bool operator<=(const Value& u, const Value& v) { return compare(u, v) <= 0; }
inline bool operator>(const Value& u, const Value& v) { return compare(u, v) > 0; }
inline bool operator>=(const Value& u, const Value& v) { return compare(u, v) >= 0; }
/// Equality of norms (not of exponent vectors).
inline bool norm_equal(const Value& u, const Value& v) { return compare(u, v) == 0; }

const Value& max_value(const Value& u, const Value& v);
const Value& min_value(const Value& u, const Value& v);

Value value_mul(const Value& u, const Value& v);
/// u^e for rational e; zero^e requires e > 0.
Value value_pow(const Value& u, const Rational& e);
Value value_inv(const Value& u);
Value value_div(const Value& u, const Value& v);

/// Whether a nonzero value lies in sqrt(|K^x|) = |t|^Q.
bool in_sqrt_K(const Value& v);

}  // namespace ultrametrica
