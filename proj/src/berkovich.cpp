#include "ultrametrica/berkovich.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

#include "ultrametrica/errors.hpp"

namespace ultrametrica {

namespace {

// Brings an element over K or over the target itself into the target profile.
SeriesElement to_profile(const SeriesElement& c, const ProfilePtr& target) {
  if (same_profile(c.profile(), target)) return c;
  if (c.profile()->n() == 0) return embed_base(c, target);
  throw ProfileMismatch();
}

bool exact_zero(const SeriesElement& c) { return c.empty() && c.is_exact(); }

}  // namespace

std::uint32_t binomial_mod_p(std::uint64_t n, std::uint64_t k, std::int64_t p) {
  const auto up = static_cast<std::uint64_t>(p);
  std::uint64_t result = 1;
  while (n || k) {
    const std::uint64_t ni = n % up, ki = k % up;
    if (ki > ni) return 0;
    // small binomial mod p; ni < p so the numerator never contains p
    std::uint64_t num = 1, den = 1;
    for (std::uint64_t j = 0; j < ki; ++j) {
      num = num * ((ni - j) % up) % up;
      den = den * ((j + 1) % up) % up;
    }
    result = result * num % up * fp_inverse(static_cast<std::uint32_t>(den), p) % up;
    n /= up;
    k /= up;
  }
  return static_cast<std::uint32_t>(result);
}

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(ProfilePtr profile, std::vector<SeriesElement> coeffs)
    : profile_(std::move(profile)), coeffs_(std::move(coeffs)) {
  if (!profile_) throw std::invalid_argument("polynomial without profile");
  for (const auto& c : coeffs_) require_same_profile(profile_, c.profile());
  while (!coeffs_.empty() && exact_zero(coeffs_.back())) coeffs_.pop_back();
}

Polynomial Polynomial::linear(const SeriesElement& a) {
  return Polynomial(a.profile(), {neg(a), SeriesElement::one(a.profile())});
}

Polynomial Polynomial::constant(const SeriesElement& c) { return Polynomial(c.profile(), {c}); }

Polynomial Polynomial::shifted(const SeriesElement& a) const {
  if (coeffs_.empty()) return *this;
  SeriesElement center = to_profile(a, profile_);
  const std::size_t d = coeffs_.size() - 1;
  std::vector<SeriesElement> apow{SeriesElement::one(profile_)};
  for (std::size_t k = 1; k <= d; ++k) apow.push_back(mul(apow.back(), center));
  std::vector<SeriesElement> out;
  for (std::size_t j = 0; j <= d; ++j) {
    SeriesElement c = SeriesElement::zero(profile_);
    for (std::size_t i = j; i <= d; ++i) {
      const std::uint32_t b = binomial_mod_p(i, j, profile_->p());
      if (b == 0) continue;
      c = add(c, scale(mul(coeffs_[i], apow[i - j]), b));
    }
    out.push_back(std::move(c));
  }
  return Polynomial(profile_, std::move(out));
}

Polynomial Polynomial::embedded(const ProfilePtr& target) const {
  std::vector<SeriesElement> out;
  for (const auto& c : coeffs_) out.push_back(to_profile(c, target));
  return Polynomial(target, std::move(out));
}

std::string Polynomial::str() const {
  std::string out;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (exact_zero(coeffs_[i])) continue;
    if (!out.empty()) out += " + ";
    out += "(" + coeffs_[i].str() + ")";
    if (i) out += "*T^" + std::to_string(i);
  }
  return out.empty() ? "0" : out;
}

Polynomial poly_add(const Polynomial& f, const Polynomial& g) {
  require_same_profile(f.profile(), g.profile());
  const std::size_t d = std::max(f.coeffs().size(), g.coeffs().size());
  std::vector<SeriesElement> out;
  for (std::size_t i = 0; i < d; ++i) {
    SeriesElement c = SeriesElement::zero(f.profile());
    if (i < f.coeffs().size()) c = add(c, f.coeffs()[i]);
    if (i < g.coeffs().size()) c = add(c, g.coeffs()[i]);
    out.push_back(std::move(c));
  }
  return Polynomial(f.profile(), std::move(out));
}

Polynomial poly_mul(const Polynomial& f, const Polynomial& g) {
  require_same_profile(f.profile(), g.profile());
  if (f.coeffs().empty() || g.coeffs().empty()) return Polynomial(f.profile(), {});
  std::vector<SeriesElement> out(f.coeffs().size() + g.coeffs().size() - 1, SeriesElement::zero(f.profile()));
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
    for (std::size_t j = 0; j < g.coeffs().size(); ++j) {
      out[i + j] = add(out[i + j], mul(f.coeffs()[i], g.coeffs()[j]));
    }
  }
  return Polynomial(f.profile(), std::move(out));
}

// ---------------------------------------------------------------------------
// Points

DiskPoint::DiskPoint(SeriesElement center, Value radius, bool unit_ball) : radius_(std::move(radius)) {
  if (!radius_.profile()) throw std::invalid_argument("disk radius without profile");
  center_ = to_profile(center, radius_.profile());
  if (!radius_.is_zero() && center_.floor() > radius_) {
    throw std::invalid_argument("center is known only to " + center_.floor().str() + ", coarser than the radius " +
                                radius_.str());
  }
  if (unit_ball) {
    const Value one = Value::one(radius_.profile());
    if (radius_ > one) throw std::invalid_argument("radius exceeds 1 in the unit ball");
    if (norm_bound(center_) > one) throw std::invalid_argument("center lies outside the unit ball");
  }
}

NestedPrefix::NestedPrefix(std::vector<DiskPoint> disks) : disks_(std::move(disks)) {
  if (disks_.empty()) throw std::invalid_argument("nested prefix needs at least one disk");
  for (std::size_t k = 0; k < disks_.size(); ++k) {
    require_same_profile(disks_[0].profile(), disks_[k].profile());
    if (disks_[k].radius().is_zero()) throw std::invalid_argument("nested prefix disks need positive radii");
    if (k == 0) continue;
    const auto& prev = disks_[k - 1];
    if (!(disks_[k].radius() < prev.radius())) {
      throw std::invalid_argument("radii of a nested prefix must strictly decrease (disk " + std::to_string(k + 1) +
                                  ")");
    }
    if (norm_bound(sub(disks_[k].center(), prev.center())) > prev.radius()) {
      throw std::invalid_argument("disk " + std::to_string(k + 1) + " is not inside disk " + std::to_string(k));
    }
  }
}

std::string to_string(PointType t) {
  switch (t) {
    case PointType::I: return "I";
    case PointType::II: return "II";
    case PointType::III: return "III";
    case PointType::IVCandidate: return "IV-candidate";
  }
  return "?";
}

std::string to_string(Simplicity s) { return s == Simplicity::No ? "false" : "iv-candidate"; }

Value eval_disk(const Polynomial& f, const DiskPoint& pt) {
  const ProfilePtr& prof = pt.profile();
  const Polynomial g = f.embedded(prof).shifted(pt.center());
  const auto& c = g.coeffs();
  if (c.empty()) return Value::zero(prof);

  if (pt.radius().is_zero()) {
    if (auto n = gauss_norm(c[0])) return *n;
    if (c[0].is_exact()) return Value::zero(prof);
    throw PrecisionError("value at the center is below the coefficient floor " + c[0].floor().str());
  }

  std::optional<Value> best;
  std::optional<Value> unresolved;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Value ri = value_pow(pt.radius(), Rational(static_cast<std::int64_t>(i)));
    if (auto n = gauss_norm(c[i])) {
      Value v = value_mul(*n, ri);
      if (!best || *best < v) best = v;
    } else if (!c[i].is_exact()) {
      Value v = value_mul(c[i].floor(), ri);
      if (!unresolved || *unresolved < v) unresolved = v;
    }
  }
  if (unresolved && (!best || *best <= *unresolved)) {
    throw PrecisionError("coefficient floors too coarse to fix the disk norm (bound " + unresolved->str() + ")");
  }
  return best ? *best : Value::zero(prof);
}

PointType classify(const DiskPoint& pt) {
  if (pt.radius().is_zero()) return PointType::I;
  return in_sqrt_K(pt.radius()) ? PointType::II : PointType::III;
}

PointType classify(const NestedPrefix&) { return PointType::IVCandidate; }

PointType classify(const Point& pt) {
  return std::visit([](const auto& p) { return classify(p); }, pt);
}

Value eval_prefix(const Polynomial& f, const NestedPrefix& np) {
  std::optional<Value> last;
  for (std::size_t k = 0; k < np.disks().size(); ++k) {
    Value v = eval_disk(f, np.disks()[k]);
    if (last && v > *last) {
      throw InvariantError("disk evaluations increase along the prefix at disk " + std::to_string(k + 1));
    }
    last = v;
  }
  return *last;
}

PointInvariants point_invariants(PointType t) {
  switch (t) {
    case PointType::I: return {0, 0, true};
    case PointType::II: return {0, 1, false};
    case PointType::III: return {1, 0, false};
    case PointType::IVCandidate: return {0, 0, true};
  }
  return {};
}

PointInvariants point_invariants(const Point& pt) { return point_invariants(classify(pt)); }

Simplicity is_topologically_simple(const Point& pt) {
  return std::holds_alternative<NestedPrefix>(pt) ? Simplicity::IVCandidate : Simplicity::No;
}

}  // namespace ultrametrica
