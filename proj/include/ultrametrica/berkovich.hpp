#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "ultrametrica/series.hpp"

namespace ultrametrica {

/// c_0 + c_1 T + ... + c_d T^d with coefficients in a series field.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(ProfilePtr profile, std::vector<SeriesElement> coeffs);

  /// T - a.
  static Polynomial linear(const SeriesElement& a);
  static Polynomial constant(const SeriesElement& c);

  const ProfilePtr& profile() const { return profile_; }
  const std::vector<SeriesElement>& coeffs() const { return coeffs_; }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  /// f(T + a), with binomial coefficients reduced mod p.
  Polynomial shifted(const SeriesElement& a) const;
  /// Same polynomial with coefficients embedded into `target` (x-exponents zero).
  Polynomial embedded(const ProfilePtr& target) const;

  std::string str() const;

 private:
  ProfilePtr profile_;
  std::vector<SeriesElement> coeffs_;
};

Polynomial poly_add(const Polynomial& f, const Polynomial& g);
Polynomial poly_mul(const Polynomial& f, const Polynomial& g);

/// binom(n, k) mod p by Lucas' theorem.
std::uint32_t binomial_mod_p(std::uint64_t n, std::uint64_t k, std::int64_t p);

/// The closed disk B(a, r), or the point a when r is zero.
///
/// The radius profile is the working profile: a center over its base field is
/// embedded on construction. The center must be known to within the radius.
class DiskPoint {
 public:
  DiskPoint() = default;
  /// With `unit_ball`, requires |a| <= 1 and r <= 1.
  DiskPoint(SeriesElement center, Value radius, bool unit_ball = true);

  const SeriesElement& center() const { return center_; }
  const Value& radius() const { return radius_; }
  const ProfilePtr& profile() const { return radius_.profile(); }

 private:
  SeriesElement center_;
  Value radius_;
};

/// Finite prefix of a nested sequence of disks.
class NestedPrefix {
 public:
  NestedPrefix() = default;
  explicit NestedPrefix(std::vector<DiskPoint> disks);

  const std::vector<DiskPoint>& disks() const { return disks_; }
  const ProfilePtr& profile() const { return disks_.front().profile(); }

 private:
  std::vector<DiskPoint> disks_;
};

using Point = std::variant<DiskPoint, NestedPrefix>;

enum class PointType { I, II, III, IVCandidate };
std::string to_string(PointType t);

/// sup of |f| over the disk: max_i |c_i| r^i after recentering f at the center.
/// Throws PrecisionError when an unresolved coefficient could reach the maximum.
Value eval_disk(const Polynomial& f, const DiskPoint& pt);

PointType classify(const DiskPoint& pt);
PointType classify(const NestedPrefix& np);
PointType classify(const Point& pt);

/// Min of the disk evaluations along the prefix. This is an upper bound for the
/// seminorm of the limit point. Throws InvariantError if the sequence increases.
Value eval_prefix(const Polynomial& f, const NestedPrefix& np);

struct PointInvariants {
  int value_rank_increment = 0;
  int residue_trdeg_increment = 0;
  bool semi_immediate = false;

  friend bool operator==(const PointInvariants&, const PointInvariants&) = default;
};
PointInvariants point_invariants(PointType t);
PointInvariants point_invariants(const Point& pt);

/// Finite data can never certify an empty intersection, so a nested prefix is
/// only a candidate.
enum class Simplicity { No, IVCandidate };
std::string to_string(Simplicity s);
Simplicity is_topologically_simple(const Point& pt);

}  // namespace ultrametrica
