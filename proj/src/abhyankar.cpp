#include "ultrametrica/abhyankar.hpp"

#include <map>
#include <stdexcept>
#include <string>

namespace ultrametrica {

namespace {

// log_|t| of a value modulo Q, as coordinates on the basis sqrt(d).
std::map<std::int64_t, Rational> free_class(const Value& v) {
  if (v.is_zero()) throw std::invalid_argument("zero is not a value-group element");
  std::map<std::int64_t, Rational> out;
  const auto& radii = v.profile()->radii();
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i].kind != RadiusSpec::Kind::Free || v.q(i).is_zero()) continue;
    out[radii[i].root] += v.q(i);
  }
  return out;
}

struct Walk {
  FieldDescriptor field;
  TemkinFactorization factor;
};

Walk walk(const TowerPoint& pt) {
  Walk w;
  for (std::size_t k = 0; k < pt.dim(); ++k) {
    const auto& c = pt.coords()[k];
    if (const auto* g = std::get_if<GaussCoordinate>(&c)) {
      if (!w.field.base) w.field.base = g->radius.profile()->base();
      const std::size_t before = free_rank(w.field.free_value_generators);
      auto grown = w.field.free_value_generators;
      grown.push_back(g->radius);
      // a radius outside the current value group adds rank, otherwise the
      // Gauss point is of type II over the field so far and adds a residue variable
      if (free_rank(grown) > before) {
        w.field.free_value_generators = std::move(grown);
      } else {
        w.field.residue_trdeg += 1;
      }
      w.factor.B.push_back(k + 1);
      w.factor.polyradius.push_back(g->radius);
    } else {
      const auto& iv = std::get<TypeIVCoordinate>(c);
      w.factor.remainder.push_back(point_invariants(Point(iv.prefix)));
    }
  }
  w.factor.field = w.field;
  return w;
}

}  // namespace

TowerPoint::TowerPoint(std::vector<CoordinateSpec> coords) : coords_(std::move(coords)) {
  std::size_t gauss_so_far = 0;
  for (std::size_t k = 0; k < coords_.size(); ++k) {
    const std::string where = "coordinate " + std::to_string(k + 1);
    if (const auto* g = std::get_if<GaussCoordinate>(&coords_[k])) {
      if (!g->radius.profile() || g->radius.is_zero()) throw std::invalid_argument(where + ": Gauss radius must be nonzero");
      if (g->radius > Value::one(g->radius.profile())) throw std::invalid_argument(where + ": Gauss radius exceeds 1");
      ++gauss_so_far;
      continue;
    }
    const auto& iv = std::get<TypeIVCoordinate>(coords_[k]);
    if (iv.prefix.disks().empty()) throw std::invalid_argument(where + ": empty prefix");
    for (const auto& d : iv.prefix.disks()) {
      for (const auto& t : d.center().terms()) {
        for (std::size_t i = gauss_so_far; i + 1 < t.exp.size(); ++i) {
          if (!t.exp[i + 1].is_zero()) {
            throw std::invalid_argument(where + ": center uses x_" + std::to_string(i + 1) +
                                        ", which is not a preceding Gauss variable");
          }
        }
      }
    }
  }
}

TowerPoint concat(const TowerPoint& a, const TowerPoint& b) {
  std::vector<CoordinateSpec> coords = a.coords_;
  coords.insert(coords.end(), b.coords_.begin(), b.coords_.end());
  TowerPoint r;
  r.coords_ = std::move(coords);
  return r;
}

std::size_t free_rank(const std::vector<Value>& values) {
  std::map<std::int64_t, std::size_t> column;
  std::vector<std::map<std::int64_t, Rational>> classes;
  for (const auto& v : values) {
    classes.push_back(free_class(v));
    for (const auto& [d, _] : classes.back()) column.emplace(d, column.size());
  }
  std::vector<std::vector<Rational>> rows;
  for (const auto& cl : classes) {
    std::vector<Rational> row(column.size());
    for (const auto& [d, x] : cl) row[column.at(d)] = x;
    rows.push_back(std::move(row));
  }
  std::size_t rank = 0;
  for (std::size_t col = 0; col < column.size() && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][col].is_zero()) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col].is_zero()) continue;
      const Rational f = rows[r][col] / rows[rank][col];
      for (std::size_t c = col; c < column.size(); ++c) rows[r][c] = rows[r][c] - f * rows[rank][c];
    }
    ++rank;
  }
  return rank;
}

void FieldDescriptor::validate() const {
  if (residue_trdeg < 0) throw std::invalid_argument("negative residue transcendence degree");
  if (free_rank(free_value_generators) != free_value_generators.size()) {
    throw std::invalid_argument("value generators are not independent modulo sqrt|K^x|");
  }
  for (const auto& v : free_value_generators) {
    if (base && v.profile()->p() != base->p()) throw std::invalid_argument("generator over a different prime");
  }
}

std::size_t d_K(const TowerPoint& pt) {
  const auto w = walk(pt);
  return free_rank(w.field.free_value_generators) + static_cast<std::size_t>(w.field.residue_trdeg);
}

bool is_abhyankar(const TowerPoint& pt) { return d_K(pt) == pt.dim(); }

TemkinFactorization factor_temkin(const TowerPoint& pt) { return walk(pt).factor; }

bool is_semi_immediate(const FieldDescriptor& L, const FieldDescriptor& L0) {
  L.validate();
  L0.validate();
  if (L.base && L0.base && L.base->p() != L0.base->p()) throw std::invalid_argument("descriptors over different primes");
  std::vector<Value> both = L.free_value_generators;
  both.insert(both.end(), L0.free_value_generators.begin(), L0.free_value_generators.end());
  const std::size_t rl = free_rank(L.free_value_generators);
  if (free_rank(both) != rl || L.residue_trdeg < L0.residue_trdeg) {
    throw std::invalid_argument("the first descriptor does not extend the second");
  }
  return rl == free_rank(L0.free_value_generators) && L.residue_trdeg == L0.residue_trdeg;
}

bool check_main_theorem_bound(long n_vars, long l) {
  if (n_vars < 1 || l < 0) throw std::invalid_argument("bound check needs n_vars >= 1 and l >= 0");
  return l <= n_vars - 1;
}

}  // namespace ultrametrica
