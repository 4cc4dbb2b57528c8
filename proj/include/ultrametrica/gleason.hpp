#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ultrametrica/series.hpp"
#include "ultrametrica/tatealg.hpp"

namespace ultrametrica {

enum class LatticeKind { NonNegative, NonPositive, All };

/// Enumeration of J inside Z[1/p]^n in order type omega.
///
/// Write q = (a_1..a_n)/p^k with k minimal. The height of q is
/// max(k, |a_1|, ..., |a_n|); each height class is finite. Inside a class the
/// order is by k, then max |a_i|, then lexicographic. Positions are 1-based.
class WellOrder {
 public:
  WellOrder(std::int64_t p, std::size_t n, LatticeKind kind);

  std::int64_t p() const { return p_; }
  std::size_t n() const { return n_; }
  LatticeKind kind() const { return kind_; }

  bool contains(const ExponentVec& q) const;
  /// omega(m), m >= 1.
  ExponentVec at(std::size_t m) const;
  /// Position of q; throws std::invalid_argument when q is not in J.
  std::size_t index(const ExponentVec& q) const;

  static std::int64_t height(const ExponentVec& q, std::int64_t p);
  /// k with denominators of q dividing p^k, k minimal.
  static int denominator_log(const ExponentVec& q, std::int64_t p);

 private:
  void grow_to_height(std::int64_t h) const;

  std::int64_t p_;
  std::size_t n_;
  LatticeKind kind_;
  mutable std::mutex mu_;
  mutable std::vector<ExponentVec> seq_;
  mutable std::int64_t built_height_ = -1;
};

/// Maps q in J to nonnegative coefficients h with sum h_k v_k = q.
using Representation = std::function<std::vector<Rational>(const ExponentVec& q)>;

/// q -> h with h_0 = max(0, -min q_i), h_i = q_i + h_0, returned as
/// (h_1..h_n, h_0) to match the monomial order (x_1..x_n, c x^{-1}).
std::vector<Rational> min_zero_representation(const ExponentVec& q);

struct ScheduleOptions {
  /// Tail bound in condition (4): p^{b_m - b_i} w(alpha_m) > tail_margin + w(s).
  /// 1 is the minimal choice; larger margins push tails of adapted elements
  /// further below s|t| at the price of faster growth of b_m.
  int tail_margin = 1;
};

/// One step of a Gleason schedule. Base-field quantities are t-powers stored
/// by exponent: e_m = t^e, eps_m = t^eps, d_{m,i} = t^{d[i]}.
struct GleasonStep {
  std::size_t m = 0;
  ExponentVec omega;          // x-exponent
  std::vector<Rational> h;    // W_m = prod V_k^{h_k}
  ExponentVec w_exp;          // exponent <t; x> of W_m
  Rational e;
  ExponentVec alpha_exp;      // exponent of alpha_m = e_m W_m
  Rational eps;
  int b = 0;
  std::vector<Rational> d;    // i = 1..m-1 (index i-1); d_{m,m} = 0 is implicit
  // conditions, recorded at construction
  bool c1 = false, c2 = false, c3 = false, c4 = false, c5 = false;

  bool all_conditions() const { return c1 && c2 && c3 && c4 && c5; }
};

/// Gleason element data for monomials V_1..V_l (each |V_k| < 1) and the lattice
/// J they generate, built step by step with minimal b_m.
class GleasonSchedule {
 public:
  GleasonSchedule(ProfilePtr profile, std::vector<ExponentVec> v, LatticeKind kind, Representation rep,
                  ScheduleOptions options = {});

  const ProfilePtr& profile() const { return profile_; }
  const std::vector<ExponentVec>& monomials() const { return v_; }
  const WellOrder& order() const { return *order_; }
  const ScheduleOptions& options() const { return options_; }
  std::size_t depth() const { return steps_.size(); }
  const GleasonStep& step(std::size_t m) const;  // 1-based
  const std::vector<GleasonStep>& steps() const { return steps_; }

  /// Builds steps up to m (no-op if already built).
  void extend_to(std::size_t m);

  /// sum_{i <= depth} alpha_i^{p^{b_i}}, with the floor that bounds every
  /// later term.
  SeriesElement element(std::size_t depth) const;
  /// Floor of the depth-truncated element: (|t|^K s)^{p^{b_depth}}.
  Value truncation_floor(std::size_t depth) const;

  /// (eps_m G - sum_{i<m} d_{m,i} W_i^{p^{b_i}})^{1/p^{b_m}} from the element
  /// truncated at `depth` >= m.
  SeriesElement adapted_element(std::size_t m, std::size_t depth) const;
  /// eps_m G - sum_{i<m} d_{m,i} W_i^{p^{b_i}} before the root.
  SeriesElement combination(std::size_t m, std::size_t depth) const;

  /// Smallest depth >= m at which adapted_element(m, depth) has floor <= eta.
  std::size_t depth_for(std::size_t m, const Value& eta);

 private:
  void build_step();

  ProfilePtr profile_;
  std::vector<ExponentVec> v_;
  std::unique_ptr<WellOrder> order_;
  Representation rep_;
  ScheduleOptions options_;
  std::vector<GleasonStep> steps_;
};

/// Gleason schedule for J = Z[1/p]_{>=0} with W_i = x^{omega(i)}, n = 1.
struct GPlus {
  std::shared_ptr<GleasonSchedule> schedule;
  SeriesElement g;
};
GPlus build_gplus(ProfilePtr profile, std::size_t depth, ScheduleOptions options = {});

/// Schedule for the lattice spanned by monomials v (|v_k| < 1).
struct GMultivar {
  std::shared_ptr<GleasonSchedule> schedule;
  SeriesElement g;
};
GMultivar build_gmultivar(ProfilePtr profile, std::vector<ExponentVec> v, LatticeKind kind, Representation rep,
                          std::size_t depth, ScheduleOptions options = {});

/// J = Z[1/p]_{<=0}, V = (c x^{-1}). The preimage sum e_m^{p^{b_m}} T^{h_m p^{b_m}}
/// maps to G_- exactly under T -> c x^{-1}.
struct GMinus {
  std::shared_ptr<GleasonSchedule> schedule;
  SeriesElement g;
  TateElement preimage;
  HomSpec phi;
  /// The preimage has a coefficient of norm > 1 when some |W_m| <= s.
  bool preimage_power_bounded = true;
};
GMinus build_gminus(ProfilePtr profile, const Rational& c_exponent, std::size_t depth,
                    ScheduleOptions options = {});

/// Smallest-denominator t-exponent a with s < |t^a * monomial| < 1, preferring
/// the smallest norm in the window. Throws when the window is empty.
Rational window_exponent(const ProfilePtr& profile, const ExponentVec& monomial);
/// A c = t^a with s < |c x_1^{-1}...x_n^{-1}| < 1, |c x^{-1}| as close to 1 as
/// the smallest denominator allows.
Rational standard_c_exponent(const ProfilePtr& profile);

/// Answer of an adapted-element oracle for one exponent q.
struct OracleAnswer {
  TateElement preimage;         // f_q, with |f_q| <= 1
  SeriesElement image;          // phi(f_q), (q, s)-adapted
  AdaptedCertificate certificate;
};
/// q (x-exponent) and a requested floor for the image.
using AdaptedOracle = std::function<OracleAnswer(const ExponentVec& q, const Value& precision)>;

/// The map T_1..T_n -> x_i, T_{n+1} -> c x^{-1}, T_{n+2} -> G of the standard
/// surjection, with its oracle for adapted elements.
class SurjectionSpec {
 public:
  /// `c_exponent` overrides the default c = t^a; it must satisfy s < |c x^{-1}| < 1.
  SurjectionSpec(ProfilePtr profile, std::size_t depth, ScheduleOptions options = {},
                 std::optional<Rational> c_exponent = std::nullopt);

  const ProfilePtr& profile() const { return profile_; }
  std::size_t n() const { return profile_->n(); }
  const Rational& c_exponent() const { return c_; }
  GleasonSchedule& schedule() { return *schedule_; }
  const GleasonSchedule& schedule() const { return *schedule_; }
  /// Maximum schedule depth the oracle may extend to.
  std::size_t max_depth() const { return max_depth_; }

  /// phi with G truncated at the current schedule depth.
  HomSpec phi() const;
  /// phi with G truncated at `depth`.
  HomSpec phi(std::size_t depth) const;

  /// Explicit preimage of the m-th adapted element.
  TateElement adapted_preimage(std::size_t m) const;
  /// W_i(T) = T_1^{h_1} ... T_n^{h_n} T_{n+1}^{h_0} as a Tate monomial exponent.
  ExponentVec tate_exponent(const std::vector<Rational>& h) const;

  /// Thread-safe, cached. Throws DepthError when index(q) > max_depth().
  OracleAnswer oracle(const ExponentVec& q, const Value& precision);
  AdaptedOracle as_oracle();

 private:
  ProfilePtr profile_;
  Rational c_;
  std::size_t max_depth_;
  std::shared_ptr<GleasonSchedule> schedule_;
  std::mutex mu_;
  struct Cached {
    std::size_t depth;
    OracleAnswer answer;
  };
  std::map<ExponentVec, Cached> cache_;
};

struct DivideResult {
  TateElement f;
  SeriesElement residual;
  std::size_t oracle_calls = 0;
};

/// One division step at level m: clears every term of beta of norm
/// >= |t|^{m+1} s using oracle elements. Requires |beta| <= |t|^m s.
/// `precision` bounds the floor of the residual (defaults to beta's floor).
DivideResult divide_step(const AdaptedOracle& oracle, const SeriesElement& beta, std::size_t m,
                         std::size_t tate_vars, std::optional<Value> precision = std::nullopt);

struct ReconstructResult {
  TateElement f;
  int rescale = 0;                       // beta was multiplied by t^rescale first
  std::vector<Value> residual_norms;     // after steps 1..M, a bound on |beta_m|
  std::vector<bool> below_floor;         // residual had no terms above its floor
};

/// M division steps from |beta| <= s (after rescaling by a power of t).
/// Returns f with |phi(f) - beta| <= |t|^M s (in rescaled units).
ReconstructResult reconstruct_preimage(const AdaptedOracle& oracle, const SeriesElement& beta, std::size_t steps,
                                       std::size_t tate_vars, std::optional<Value> precision = std::nullopt);

}  // namespace ultrametrica
