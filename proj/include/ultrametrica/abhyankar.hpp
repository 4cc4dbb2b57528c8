#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "ultrametrica/berkovich.hpp"

namespace ultrametrica {

/// A coordinate whose restriction is the Gauss point of radius r over the
/// field built so far.
struct GaussCoordinate {
  Value radius;
};

/// A coordinate given by a nested prefix whose centers may involve the
/// previously adjoined Gauss variables.
struct TypeIVCoordinate {
  NestedPrefix prefix;
};

using CoordinateSpec = std::variant<GaussCoordinate, TypeIVCoordinate>;

/// A point of the m-dimensional polydisk, one coordinate at a time.
class TowerPoint {
 public:
  TowerPoint() = default;
  explicit TowerPoint(std::vector<CoordinateSpec> coords);

  const std::vector<CoordinateSpec>& coords() const { return coords_; }
  std::size_t dim() const { return coords_.size(); }

  friend TowerPoint concat(const TowerPoint& a, const TowerPoint& b);

 private:
  std::vector<CoordinateSpec> coords_;
};

/// Value group modulo sqrt|K^x| and residue transcendence degree of a valued
/// extension of K.
struct FieldDescriptor {
  std::vector<Value> free_value_generators;
  int residue_trdeg = 0;
  ProfilePtr base;

  /// Throws when the generators are not independent modulo sqrt|K^x|.
  void validate() const;
};

/// Rank of the span of the generators modulo sqrt|K^x|.
std::size_t free_rank(const std::vector<Value>& values);

std::size_t d_K(const TowerPoint& pt);
bool is_abhyankar(const TowerPoint& pt);

struct TemkinFactorization {
  std::vector<std::size_t> B;            // 1-based indices of the Gauss coordinates
  std::vector<Value> polyradius;
  std::vector<PointInvariants> remainder; // one per TypeIV coordinate
  FieldDescriptor field;                 // the field cut out by the coordinates in B
  int kernel_height = 0;                 // always 0 for tower points
};
TemkinFactorization factor_temkin(const TowerPoint& pt);

/// L over L0: the value group grows by torsion only and the residue field
/// stays algebraic. Throws when L does not contain L0.
bool is_semi_immediate(const FieldDescriptor& L, const FieldDescriptor& L0);

/// l <= n_vars - 1.
bool check_main_theorem_bound(long n_vars, long l);

}  // namespace ultrametrica
