#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ultrametrica/valuegroup.hpp"

namespace ultrametrica {

/// One monomial c * t^a * x^q. The exponent vector is <a; q_1..q_n>, which is
/// also the value of the monomial.
struct Term {
  ExponentVec exp;
  std::uint32_t coeff = 0;

  friend bool operator==(const Term&, const Term&) = default;
};

/// Truncated element of K (n = 0) or of the perfected completion of
/// K(x_1..x_n) under a Gauss norm.
///
/// The element is known modulo terms of norm below `floor()`. A zero floor
/// means the stored terms are the whole element. Terms are kept sorted by
/// exponent vector and never carry a zero coefficient or a norm below the floor.
class SeriesElement {
 public:
  SeriesElement() = default;
  explicit SeriesElement(ProfilePtr profile);
  SeriesElement(ProfilePtr profile, Value floor);

  /// Builds from arbitrary terms: reduces coefficients mod p, merges equal
  /// exponents, drops zeros and terms below the floor, checks denominators.
  static SeriesElement from_terms(ProfilePtr profile, std::vector<Term> terms, Value floor);
  static SeriesElement from_terms(ProfilePtr profile, std::vector<Term> terms);

  static SeriesElement zero(ProfilePtr profile) { return SeriesElement(std::move(profile)); }
  static SeriesElement one(ProfilePtr profile);
  static SeriesElement monomial(ProfilePtr profile, ExponentVec exp, std::int64_t coeff = 1);
  /// c * t^a.
  static SeriesElement t_power(ProfilePtr profile, Rational a, std::int64_t coeff = 1);
  /// x_i (0-based i).
  static SeriesElement variable(ProfilePtr profile, std::size_t i);

  const ProfilePtr& profile() const { return profile_; }
  const std::vector<Term>& terms() const { return terms_; }
  const Value& floor() const { return floor_; }
  bool is_exact() const { return floor_.is_zero(); }
  /// No stored terms: the element is below its floor (or exactly zero).
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Coefficient of an exact exponent vector (0 when absent).
  std::uint32_t coeff(const ExponentVec& exp) const;

  /// Value of a monomial exponent under this profile.
  Value term_value(const Term& t) const { return Value(profile_, t.exp); }

  /// Raises the floor to max(floor, eta) and drops what falls below.
  SeriesElement coarsened(const Value& eta) const;

  std::string str() const;

  friend bool operator==(const SeriesElement& a, const SeriesElement& b);

 private:
  void normalize();

  ProfilePtr profile_;
  std::vector<Term> terms_;
  Value floor_;
};

/// Inverse of a nonzero c in F_p.
std::uint32_t fp_inverse(std::uint32_t c, std::int64_t p);

SeriesElement add(const SeriesElement& f, const SeriesElement& g);
SeriesElement neg(const SeriesElement& f);
SeriesElement sub(const SeriesElement& f, const SeriesElement& g);
SeriesElement mul(const SeriesElement& f, const SeriesElement& g);
/// Multiplies by the constant c in F_p.
SeriesElement scale(const SeriesElement& f, std::int64_t c);
SeriesElement power(const SeriesElement& f, std::uint64_t k);

inline SeriesElement operator+(const SeriesElement& f, const SeriesElement& g) { return add(f, g); }
inline SeriesElement operator-(const SeriesElement& f, const SeriesElement& g) { return sub(f, g); }
inline SeriesElement operator-(const SeriesElement& f) { return neg(f); }
inline SeriesElement operator*(const SeriesElement& f, const SeriesElement& g) { return mul(f, g); }

/// Max term norm, or nullopt when there are no terms (|f| < floor).
std::optional<Value> gauss_norm(const SeriesElement& f);
/// The Gauss norm, or the floor when the element is below it: a value v with
/// |f| <= v always.
Value norm_bound(const SeriesElement& f);

/// Sub-sum of the terms attaining the Gauss norm.
SeriesElement leading_part(const SeriesElement& f);
/// Exponent vector <a; q> of the unique term attaining the Gauss norm.
ExponentVec argnorm(const SeriesElement& f);

/// g with |f g - 1| < target_floor.
SeriesElement invert(const SeriesElement& f, const Value& target_floor);

SeriesElement frobenius(const SeriesElement& f);
SeriesElement pth_root(const SeriesElement& f);
/// p^k-th power or root: k > 0 applies frobenius k times, k < 0 takes roots.
SeriesElement frobenius_pow(const SeriesElement& f, int k);

/// The finite sub-sum of terms with norm >= m. The result is exact.
SeriesElement res_ge(const SeriesElement& beta, const Value& m);

/// Sum of the terms whose x-exponent equals q, as an element of K, and its
/// complement in f.
struct CoefficientSplit {
  SeriesElement coefficient;  // over the base profile
  SeriesElement rest;         // over f's profile
};
CoefficientSplit split_coefficient(const SeriesElement& f, const ExponentVec& q);

/// Embeds an element of K into K_r (x-exponents zero).
SeriesElement embed_base(const SeriesElement& c, const ProfilePtr& target);

/// A sound base-field floor for the x^q coefficient of an element with floor
/// eta: the largest integer power |t|^a with |t|^a r^q >= eta. Zero stays zero.
Value base_floor_for(const Value& eta, const ExponentVec& q);

struct AdaptedCertificate {
  ExponentVec q;
  Value s;
  SeriesElement b_q;    // coefficient of x^q, an element of K
  Value norm;           // |beta| (zero when below floor)
  Value tail_norm;      // |beta - b_q x^q|, or the floor when the tail is below it
  bool bounded = false;       // s < |beta| <= 1
  bool argnorm_ok = false;    // unique leading term, at x^q
  bool tail_ok = false;       // tail <= s |t|
  std::string reason;

  bool passed() const { return bounded && argnorm_ok && tail_ok; }
};

/// (q, s)-adaptedness of beta with s taken from beta's profile.
AdaptedCertificate is_adapted(const SeriesElement& beta, const ExponentVec& q);

}  // namespace ultrametrica
