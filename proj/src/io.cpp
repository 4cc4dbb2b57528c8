#include "ultrametrica/io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace ultrametrica::io {

namespace {

const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(where + ": missing \"" + key + "\"");
  return *it;
}

std::int64_t integer_from(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw InputError(where + ": expected an integer");
  return j.get<std::int64_t>();
}

std::size_t count_from(const json& j, const std::string& where) {
  const auto v = integer_from(j, where);
  if (v < 0) throw InputError(where + ": expected a nonnegative integer");
  return static_cast<std::size_t>(v);
}

Rational rational_at(const json& j, const std::string& where) {
  try {
    return rational_from_json(j);
  } catch (const std::exception& e) {
    throw InputError(where + ": " + e.what());
  }
}

ExponentVec exps_from(const json& a, const json* q, std::size_t n, const std::string& where) {
  ExponentVec e(n + 1);
  e[0] = rational_at(a, where + ".a");
  if (q) {
    if (!q->is_array() || q->size() != n) {
      throw InputError(where + ".q: expected " + std::to_string(n) + " exponents");
    }
    for (std::size_t i = 0; i < n; ++i) e[i + 1] = rational_at((*q)[i], where + ".q[" + std::to_string(i) + "]");
  }
  return e;
}

json exps_to_json(const ExponentVec& e) {
  json q = json::array();
  for (std::size_t i = 1; i < e.size(); ++i) q.push_back(to_json(e[i]));
  return {{"a", to_json(e[0])}, {"q", q}};
}

json rationals_to_json(const ExponentVec& e) {
  json out = json::array();
  for (const auto& x : e) out.push_back(to_json(x));
  return out;
}

json rationals_to_json(const std::vector<Rational>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

ProfilePtr profile_of(const json& j, const ProfilePtr& fallback, const std::string& where) {
  if (j.is_object() && j.contains("profile")) return profile_from_json(j["profile"]);
  if (!fallback) throw InputError(where + ": missing \"profile\"");
  return fallback;
}

Value value_at(const json& j, const ProfilePtr& profile, const std::string& where) {
  try {
    return value_from_json(j, profile);
  } catch (const InputError& e) {
    throw InputError(where + ": " + e.what());
  }
}

DiskPoint disk_from(const json& j, const ProfilePtr& prof, const std::string& where) {
  SeriesElement center = j.contains("center") ? series_from_json(j["center"], prof) : SeriesElement::zero(prof);
  Value radius = value_at(need(j, "radius", where), prof, where + ".radius");
  const bool ball = j.value("unit_ball", true);
  try {
    return DiskPoint(std::move(center), std::move(radius), ball);
  } catch (const std::invalid_argument& e) {
    throw InputError(where + ": " + e.what());
  }
}

json disk_to_json(const DiskPoint& d) {
  return {{"center", to_json(d.center(), false)}, {"radius", to_json(d.radius())}};
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [k, _] : j.items()) {
    if (!known.count(k)) throw InputError(where + ": unknown key \"" + k + "\"");
  }
}

}  // namespace

json parse_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    if (auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    throw InputError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str(), path);
}

void write_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot write");
  out << j.dump(2) << "\n";
}

json to_json(const Rational& r) { return r.str(); }

Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  throw InputError("expected a rational as an integer or a string \"n/d\"");
}

// ---------------------------------------------------------------------------
// Profiles and values

json to_json(const ProfilePtr& profile) {
  json radii = json::array();
  for (const auto& r : profile->radii()) {
    if (r.kind == RadiusSpec::Kind::Free) {
      radii.push_back({{"free", r.root}});
    } else {
      radii.push_back({{"rational", to_json(r.exponent)}});
    }
  }
  return {{"p", profile->p()},
          {"radii", radii},
          {"threshold", exps_to_json(profile->threshold())},
          {"max_denominator_log", profile->max_denominator_log()}};
}

ProfilePtr profile_from_json(const json& j, std::optional<int> default_cap) {
  const std::string where = "profile";
  const auto p = integer_from(need(j, "p", where), where + ".p");
  int cap = default_cap.value_or(RadiusProfile::kDefaultMaxDenominatorLog);
  if (j.contains("max_denominator_log")) {
    cap = static_cast<int>(integer_from(j["max_denominator_log"], where + ".max_denominator_log"));
  }
  try {
    std::vector<RadiusSpec> radii;
    if (j.contains("radii")) {
      const auto& rs = j["radii"];
      if (!rs.is_array()) throw InputError(where + ".radii: expected an array");
      for (std::size_t i = 0; i < rs.size(); ++i) {
        const std::string w = where + ".radii[" + std::to_string(i) + "]";
        if (rs[i].contains("free")) {
          radii.push_back(RadiusSpec::free(integer_from(rs[i]["free"], w + ".free")));
        } else if (rs[i].contains("rational")) {
          radii.push_back(RadiusSpec::rational(rational_at(rs[i]["rational"], w + ".rational")));
        } else {
          throw InputError(w + ": expected {\"free\": d} or {\"rational\": e}");
        }
      }
    } else {
      const auto n = count_from(need(j, "n", where), where + ".n");
      if (n + 1 > kMaxExponents) throw InputError(where + ".n: at most " + std::to_string(kMaxExponents - 1));
      radii = RadiusProfile::free(p, n, cap)->radii();
    }
    std::optional<ExponentVec> s;
    if (j.contains("threshold")) {
      const auto& t = j["threshold"];
      s = exps_from(need(t, "a", where + ".threshold"), t.contains("q") ? &t["q"] : nullptr, radii.size(),
                    where + ".threshold");
    }
    return RadiusProfile::make(p, std::move(radii), s, cap);
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(where + ": " + e.what());
  }
}

json to_json(const Value& v) {
  if (v.is_zero()) return {{"zero", true}};
  return exps_to_json(v.exponents());
}

Value value_from_json(const json& j, const ProfilePtr& profile) {
  if (!j.is_object()) throw InputError("value: expected an object");
  if (j.value("zero", false)) return Value::zero(profile);
  const std::size_t n = profile->n();
  ExponentVec e = exps_from(need(j, "a", "value"), j.contains("q") ? &j["q"] : nullptr, n, "value");
  return Value(profile, e);
}

// ---------------------------------------------------------------------------
// Series and Tate elements

json to_json(const SeriesElement& f, bool with_profile) {
  json terms = json::array();
  for (const auto& t : f.terms()) {
    json x = json::array();
    for (std::size_t i = 1; i < t.exp.size(); ++i) x.push_back(to_json(t.exp[i]));
    terms.push_back({{"t", to_json(t.exp[0])}, {"x", x}, {"c", t.coeff}});
  }
  json out = {{"floor", to_json(f.floor())}, {"terms", terms}};
  if (with_profile) out["profile"] = to_json(f.profile());
  return out;
}

SeriesElement series_from_json(const json& j, const ProfilePtr& fallback) {
  const std::string where = "series";
  const ProfilePtr prof = profile_of(j, fallback, where);
  const std::size_t n = prof->n();
  Value floor = j.contains("floor") ? value_at(j["floor"], prof, where + ".floor") : Value::zero(prof);
  std::vector<Term> terms;
  if (j.contains("terms")) {
    const auto& ts = j["terms"];
    if (!ts.is_array()) throw InputError(where + ".terms: expected an array");
    for (std::size_t k = 0; k < ts.size(); ++k) {
      const std::string w = where + ".terms[" + std::to_string(k) + "]";
      const auto& t = ts[k];
      ExponentVec e(n + 1);
      e[0] = t.contains("t") ? rational_at(t["t"], w + ".t") : Rational(0);
      if (t.contains("x")) {
        if (!t["x"].is_array() || t["x"].size() != n) {
          throw InputError(w + ".x: expected " + std::to_string(n) + " exponents");
        }
        for (std::size_t i = 0; i < n; ++i) e[i + 1] = rational_at(t["x"][i], w + ".x[" + std::to_string(i) + "]");
      }
      std::int64_t c = t.contains("c") ? integer_from(t["c"], w + ".c") : 1;
      c %= prof->p();
      if (c < 0) c += prof->p();
      terms.push_back({e, static_cast<std::uint32_t>(c)});
    }
  }
  try {
    return SeriesElement::from_terms(prof, std::move(terms), std::move(floor));
  } catch (const std::exception& e) {
    throw InputError(where + ": " + e.what());
  }
}

json to_json(const TateElement& f) {
  json terms = json::array();
  for (const auto& t : f.terms()) terms.push_back({{"T", rationals_to_json(t.exp)}, {"c", to_json(t.coeff, false)}});
  return {{"base", to_json(f.base())}, {"vars", f.vars()}, {"floor", to_json(f.floor())}, {"terms", terms}};
}

TateElement tate_from_json(const json& j) {
  const std::string where = "tate";
  ProfilePtr base = profile_from_json(need(j, "base", where));
  if (base->n() != 0) base = base->base();
  const auto m = count_from(need(j, "vars", where), where + ".vars");
  Value floor = j.contains("floor") ? value_at(j["floor"], base, where + ".floor") : Value::zero(base);
  std::vector<TateTerm> terms;
  if (j.contains("terms")) {
    for (std::size_t k = 0; k < j["terms"].size(); ++k) {
      const std::string w = where + ".terms[" + std::to_string(k) + "]";
      const auto& t = j["terms"][k];
      const auto& T = need(t, "T", w);
      if (!T.is_array() || T.size() != m) throw InputError(w + ".T: expected " + std::to_string(m) + " exponents");
      ExponentVec e(m);
      for (std::size_t i = 0; i < m; ++i) e[i] = rational_at(T[i], w + ".T");
      terms.push_back({e, series_from_json(need(t, "c", w), base)});
    }
  }
  try {
    return TateElement::from_terms(base, m, std::move(terms), std::move(floor));
  } catch (const std::exception& e) {
    throw InputError(where + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Points and towers

json to_json(const Point& pt) {
  if (const auto* d = std::get_if<DiskPoint>(&pt)) {
    json out = disk_to_json(*d);
    out["profile"] = to_json(d->profile());
    return out;
  }
  const auto& np = std::get<NestedPrefix>(pt);
  json disks = json::array();
  for (const auto& d : np.disks()) disks.push_back(disk_to_json(d));
  return {{"profile", to_json(np.profile())}, {"disks", disks}};
}

Point point_from_json(const json& j, const ProfilePtr& fallback) {
  const std::string where = "point";
  const ProfilePtr prof = profile_of(j, fallback, where);
  if (j.contains("disks")) {
    const auto& ds = j["disks"];
    if (!ds.is_array()) throw InputError(where + ".disks: expected an array");
    std::vector<DiskPoint> disks;
    for (std::size_t k = 0; k < ds.size(); ++k) {
      const std::string w = where + ".disks[" + std::to_string(k) + "]";
      disks.push_back(disk_from(ds[k], profile_of(ds[k], prof, w), w));
    }
    try {
      return NestedPrefix(std::move(disks));
    } catch (const std::invalid_argument& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  return disk_from(j, prof, where);
}

json to_json(const TowerPoint& pt) {
  json coords = json::array();
  for (const auto& c : pt.coords()) {
    if (const auto* g = std::get_if<GaussCoordinate>(&c)) {
      coords.push_back({{"gauss", to_json(g->radius)}, {"profile", to_json(g->radius.profile())}});
    } else {
      coords.push_back({{"type_iv", to_json(Point(std::get<TypeIVCoordinate>(c).prefix))}});
    }
  }
  return {{"coords", coords}};
}

TowerPoint tower_from_json(const json& j) {
  ProfilePtr shared;
  const json* list = &j;
  if (j.is_object()) {
    if (j.contains("profile")) shared = profile_from_json(j["profile"]);
    list = &need(j, "coords", "tower");
  }
  if (!list->is_array()) throw InputError("tower: expected a list of coordinate specs");
  std::vector<CoordinateSpec> coords;
  for (std::size_t k = 0; k < list->size(); ++k) {
    const std::string w = "tower[" + std::to_string(k) + "]";
    const auto& c = (*list)[k];
    const ProfilePtr prof = c.is_object() && c.contains("profile") ? profile_from_json(c["profile"]) : shared;
    if (c.contains("gauss")) {
      if (!prof) throw InputError(w + ": missing \"profile\"");
      coords.push_back(GaussCoordinate{value_at(c["gauss"], prof, w + ".gauss")});
    } else if (c.contains("type_iv")) {
      Point pt = point_from_json(c["type_iv"], prof);
      if (!std::holds_alternative<NestedPrefix>(pt)) throw InputError(w + ".type_iv: expected \"disks\"");
      coords.push_back(TypeIVCoordinate{std::get<NestedPrefix>(pt)});
    } else {
      throw InputError(w + ": expected \"gauss\" or \"type_iv\"");
    }
  }
  try {
    return TowerPoint(std::move(coords));
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("tower: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Schedules

json to_json(const GleasonStep& st) {
  return {{"m", st.m},
          {"omega", rationals_to_json(st.omega)},
          {"h", rationals_to_json(st.h)},
          {"w_exp", rationals_to_json(st.w_exp)},
          {"e", to_json(st.e)},
          {"alpha_exp", rationals_to_json(st.alpha_exp)},
          {"eps", to_json(st.eps)},
          {"b", st.b},
          {"d", rationals_to_json(st.d)},
          {"conditions", {st.c1, st.c2, st.c3, st.c4, st.c5}}};
}

json to_json(const GleasonSchedule& sched) {
  json monomials = json::array();
  for (const auto& v : sched.monomials()) monomials.push_back(rationals_to_json(v));
  const char* kind = sched.order().kind() == LatticeKind::NonNegative   ? "nonnegative"
                     : sched.order().kind() == LatticeKind::NonPositive ? "nonpositive"
                                                                        : "all";
  json steps = json::array();
  for (const auto& st : sched.steps()) steps.push_back(to_json(st));
  return {{"profile", to_json(sched.profile())},
          {"monomials", monomials},
          {"lattice", kind},
          {"tail_margin", sched.options().tail_margin},
          {"steps", steps}};
}

json to_json(const AdaptedCertificate& c) {
  return {{"q", rationals_to_json(c.q)},
          {"b_q", to_json(c.b_q, false)},
          {"norm", to_json(c.norm)},
          {"tail_norm", to_json(c.tail_norm)},
          {"bounded", c.bounded},
          {"argnorm_ok", c.argnorm_ok},
          {"tail_ok", c.tail_ok},
          {"passed", c.passed()},
          {"reason", c.reason}};
}

// ---------------------------------------------------------------------------
// Config

Config config_from_json(const json& j) {
  const std::string where = "config";
  if (!j.is_object()) throw InputError(where + ": expected an object");
  reject_unknown(j,
                 {"profile", "p", "n", "radii", "threshold", "max_denominator_log", "c", "depth", "floor", "seed",
                  "tail_margin", "steps", "exponents", "terms"},
                 where);
  Config c;
  json pj;
  if (j.contains("profile")) {
    pj = j["profile"];
  } else {
    pj = json::object();
    for (const char* k : {"p", "n", "radii", "threshold", "max_denominator_log"}) {
      if (j.contains(k)) pj[k] = j[k];
    }
    if (!pj.contains("p")) pj["p"] = 2;
    if (!pj.contains("n") && !pj.contains("radii")) pj["n"] = 1;
  }
  const auto p = integer_from(need(pj, "p", where + ".profile"), where + ".p");
  if (!is_prime(p)) throw InputError(where + ".p: " + std::to_string(p) + " is not prime");
  c.profile = profile_from_json(pj, max_p_power(p));
  if (j.contains("c")) c.c_exponent = rational_at(j["c"], where + ".c");
  if (j.contains("depth")) c.depth = count_from(j["depth"], where + ".depth");
  if (j.contains("floor")) c.floor = rational_at(j["floor"], where + ".floor");
  if (j.contains("seed")) c.seed = static_cast<std::uint64_t>(count_from(j["seed"], where + ".seed"));
  if (j.contains("tail_margin")) c.tail_margin = static_cast<int>(integer_from(j["tail_margin"], where + ".tail_margin"));
  if (j.contains("steps")) c.steps = count_from(j["steps"], where + ".steps");
  if (j.contains("exponents")) {
    c.exponents = count_from(j["exponents"], where + ".exponents");
  } else {
    c.exponents = std::min(c.exponents, c.depth);
  }
  if (j.contains("terms")) c.terms = count_from(j["terms"], where + ".terms");
  if (c.depth < 1) throw InputError(where + ".depth: must be at least 1");
  if (c.exponents < 1 || c.exponents > c.depth) throw InputError(where + ".exponents: must lie in [1, depth]");
  if (c.terms < 1) throw InputError(where + ".terms: must be at least 1");
  if (c.tail_margin && *c.tail_margin < 1) throw InputError(where + ".tail_margin: must be at least 1");
  if (c.steps && *c.steps < 1) throw InputError(where + ".steps: must be at least 1");
  if (!c.profile->all_free()) throw InputError(where + ": the surjection needs a profile of free radii");
  return c;
}

json to_json(const Config& c) {
  json out = {{"profile", to_json(c.profile)},
              {"depth", c.depth},
              {"floor", to_json(c.floor)},
              {"seed", c.seed},
              {"exponents", c.exponents},
              {"terms", c.terms}};
  if (c.c_exponent) out["c"] = to_json(*c.c_exponent);
  if (c.tail_margin) out["tail_margin"] = *c.tail_margin;
  if (c.steps) out["steps"] = *c.steps;
  return out;
}

}  // namespace ultrametrica::io
