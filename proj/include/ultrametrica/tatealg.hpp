#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ultrametrica/series.hpp"

namespace ultrametrica {

/// c_e * T^e with e in Z[1/p]_{>=0}^m and c_e an element of K.
struct TateTerm {
  ExponentVec exp;
  SeriesElement coeff;
};

/// Truncated element of K<T_1^{1/p^inf}, ..., T_m^{1/p^inf}>.
///
/// Known modulo terms whose coefficient norm is below `floor()` (a value of
/// the base profile; zero means exact). Every stored coefficient carries the
/// element's floor and has at least one term above it.
class TateElement {
 public:
  TateElement() = default;
  TateElement(ProfilePtr base, std::size_t m);
  TateElement(ProfilePtr base, std::size_t m, Value floor);

  static TateElement from_terms(ProfilePtr base, std::size_t m, std::vector<TateTerm> terms, Value floor);
  static TateElement from_terms(ProfilePtr base, std::size_t m, std::vector<TateTerm> terms);
  /// c * T^e.
  static TateElement monomial(ProfilePtr base, std::size_t m, ExponentVec exp, SeriesElement c);
  static TateElement variable(ProfilePtr base, std::size_t m, std::size_t i);
  static TateElement constant(ProfilePtr base, std::size_t m, SeriesElement c);

  const ProfilePtr& base() const { return base_; }
  std::size_t vars() const { return m_; }
  const std::vector<TateTerm>& terms() const { return terms_; }
  const Value& floor() const { return floor_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  TateElement coarsened(const Value& eta) const;
  std::string str() const;

 private:
  void normalize();

  ProfilePtr base_;
  std::size_t m_ = 0;
  std::vector<TateTerm> terms_;
  Value floor_;
};

TateElement t_add(const TateElement& f, const TateElement& g);
TateElement t_neg(const TateElement& f);
TateElement t_sub(const TateElement& f, const TateElement& g);
TateElement t_mul(const TateElement& f, const TateElement& g);
/// c * f for c in K.
TateElement t_scale(const TateElement& f, const SeriesElement& c);
/// Sup of the coefficient norms; nullopt when below the floor.
std::optional<Value> t_gauss_norm(const TateElement& f);
TateElement t_frobenius(const TateElement& f);
TateElement t_pth_root(const TateElement& f);
TateElement t_frobenius_pow(const TateElement& f, int k);

/// Images of T_1..T_m in one target series field, each of norm <= 1.
class HomSpec {
 public:
  HomSpec() = default;
  explicit HomSpec(std::vector<SeriesElement> images);

  const std::vector<SeriesElement>& images() const { return images_; }
  const ProfilePtr& target() const { return target_; }
  std::size_t vars() const { return images_.size(); }

 private:
  std::vector<SeriesElement> images_;
  ProfilePtr target_;
};

/// phi(f), known modulo max(target_floor, floor of f, propagated image floors).
/// Terms are visited by decreasing coefficient norm and the loop stops once
/// the coefficients fall below the working floor.
SeriesElement evaluate(const TateElement& f, const HomSpec& phi, const Value& target_floor);

}  // namespace ultrametrica
