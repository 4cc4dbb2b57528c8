#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace ultrametrica {

/// Exact rational number with 64-bit numerator and denominator.
///
/// Always stored in lowest terms with a positive denominator. Every operation
/// is overflow-checked through 128-bit intermediates and throws
/// `std::overflow_error` instead of wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(implicit)
  Rational(std::int64_t n, std::int64_t d);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  int sign() const { return (num_ > 0) - (num_ < 0); }

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  std::int64_t floor() const;
  std::int64_t ceil() const;
  Rational abs() const { return num_ < 0 ? -*this : *this; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// "n" or "n/d".
  std::string str() const;

  /// Accepts "n", "n/d", and "n/b^k" (e.g. "3/2^4").
  static Rational parse(std::string_view text);

 private:
  static Rational from_wide(__int128 n, __int128 d);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// p^k as a checked 64-bit integer.
std::int64_t ipow(std::int64_t p, int k);

/// Exponent k with den(x) = p^k, or -1 when the denominator is not a power of p.
int p_denominator_log(const Rational& x, std::int64_t p);

/// Largest k with p^k representable in 62 bits.
int max_p_power(std::int64_t p);

bool is_prime(std::int64_t p);
bool is_squarefree(std::int64_t d);

}  // namespace ultrametrica
