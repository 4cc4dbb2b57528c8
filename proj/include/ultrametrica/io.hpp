#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ultrametrica/abhyankar.hpp"
#include "ultrametrica/berkovich.hpp"
#include "ultrametrica/gleason.hpp"
#include "ultrametrica/series.hpp"
#include "ultrametrica/tatealg.hpp"

namespace ultrametrica::io {

using json = nlohmann::json;

/// Malformed or invalid input. The message names the source and, for syntax
/// errors, the line and column.
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

json parse_text(const std::string& text, const std::string& source);
json read_file(const std::string& path);
void write_file(const std::string& path, const json& j);

json to_json(const Rational& r);
Rational rational_from_json(const json& j);

// {"p": 2, "n": 1} or {"p": 2, "radii": [{"free": 2}, {"rational": "1/2"}],
//  "threshold": {"a": .., "q": [..]}, "max_denominator_log": 16}
json to_json(const ProfilePtr& profile);
ProfilePtr profile_from_json(const json& j, std::optional<int> default_cap = std::nullopt);

// {"a": "3/2", "q": ["1"]} or {"zero": true}
json to_json(const Value& v);
Value value_from_json(const json& j, const ProfilePtr& profile);

// {"profile": .., "floor": Value, "terms": [{"t": "1/2", "x": ["1"], "c": 1}]}
// The profile may be omitted when `fallback` is given.
json to_json(const SeriesElement& f, bool with_profile = true);
SeriesElement series_from_json(const json& j, const ProfilePtr& fallback = nullptr);

// {"base": .., "vars": m, "floor": Value, "terms": [{"T": [..], "c": Series}]}
json to_json(const TateElement& f);
TateElement tate_from_json(const json& j);

// {"profile": .., "center": Series, "radius": Value} or {"profile": .., "disks": [..]}
json to_json(const Point& pt);
Point point_from_json(const json& j, const ProfilePtr& fallback = nullptr);

// [{"gauss": Value, "profile": ..}, {"type_iv": {"disks": [..]}}, ..], or an
// object {"profile": .., "coords": [..]} sharing one profile.
json to_json(const TowerPoint& pt);
TowerPoint tower_from_json(const json& j);

json to_json(const GleasonStep& st);
json to_json(const GleasonSchedule& sched);
json to_json(const AdaptedCertificate& c);

/// Settings of a surjection run.
struct Config {
  ProfilePtr profile;
  std::optional<Rational> c_exponent;
  std::size_t depth = 12;
  Rational floor{12};        // t-exponent of the truncation floor of beta
  std::uint64_t seed = 1;
  std::optional<int> tail_margin;     // defaults to the number of steps
  std::optional<std::size_t> steps;   // defaults to the least M with |t|^M s below the floor
  std::size_t exponents = 10;         // beta draws x-exponents among the first this many
  std::size_t terms = 6;              // terms per random beta
};
Config config_from_json(const json& j);
json to_json(const Config& c);

}  // namespace ultrametrica::io
