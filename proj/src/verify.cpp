#include "ultrametrica/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace ultrametrica {

namespace {

std::string fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

TrialRecord run_trial(SurjectionSpec& spec, const HomSpec& phi, const SeriesElement& beta, std::size_t steps,
                      const Value& floor) {
  TrialRecord rec;
  rec.digest = fnv1a(io::to_json(beta, false).dump());
  const auto& prof = spec.profile();
  const Value s = Value::threshold(prof);
  try {
    auto r = reconstruct_preimage(spec.as_oracle(), beta, steps, spec.n() + 2);
    rec.rescale = r.rescale;
    rec.residuals = r.residual_norms;
    rec.below_floor = r.below_floor;
    rec.preimage_terms = r.f.size();
    rec.monotone = true;
    rec.bounded = true;
    for (std::size_t m = 0; m < r.residual_norms.size(); ++m) {
      if (m > 0 && r.residual_norms[m] > r.residual_norms[m - 1]) rec.monotone = false;
      const auto shift = static_cast<std::int64_t>(m + 1) - r.rescale;
      // a residual that vanished below its floor meets the bound at the working precision
      if (!r.below_floor[m] && r.residual_norms[m] > value_mul(s, Value::t_power(prof, Rational(shift)))) {
        rec.bounded = false;
      }
    }
    SeriesElement diff = sub(evaluate(r.f, phi, floor), beta).coarsened(floor);
    rec.agrees = diff.empty() && diff.floor() <= floor;
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  return rec;
}

}  // namespace

std::size_t default_steps(const ProfilePtr& profile, const Rational& floor_exponent) {
  const Value floor = Value::t_power(profile, floor_exponent);
  Value v = Value::threshold(profile);
  std::size_t m = 0;
  while (!(v < floor)) {
    v = value_mul(v, Value::t_power(profile, Rational(1)));
    ++m;
  }
  return m;
}

SeriesElement random_beta(const SurjectionSpec& spec, const Rational& floor_exponent, std::size_t exponents,
                          std::size_t terms, std::mt19937_64& rng, bool exact) {
  const auto& prof = spec.profile();
  const std::int64_t p = prof->p();
  const ExponentVec& s = prof->threshold();
  const double sigma = prof->weight(s);
  const double top = floor_exponent.to_double();
  const Value floor = Value::t_power(prof, floor_exponent);
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<Term> out;
    for (std::size_t j = 0; j < terms; ++j) {
      const ExponentVec q = spec.schedule().order().at(1 + rng() % exponents);
      ExponentVec e = q.with_head(Rational(0));
      const double wq = prof->weight(e);
      const std::int64_t scale = ipow(p, static_cast<int>(rng() % 2));
      const auto lo = static_cast<std::int64_t>(std::ceil((sigma - wq) * static_cast<double>(scale)));
      const auto hi = static_cast<std::int64_t>(std::floor((top - wq) * static_cast<double>(scale)));
      if (hi < lo) continue;
      e[0] = Rational(lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1)), scale);
      // keep only exact members of the window |floor| <= |term| <= s
      if (prof->compare_weight(e, s) < 0) continue;
      out.push_back({e, static_cast<std::uint32_t>(1 + rng() % static_cast<std::uint64_t>(p - 1))});
    }
    SeriesElement beta = SeriesElement::from_terms(prof, std::move(out), floor);
    if (!beta.empty()) return exact ? SeriesElement::from_terms(prof, beta.terms()) : beta;
  }
  throw std::invalid_argument("no term fits between s and the floor; lower the floor");
}

std::size_t VerifyReport::passed() const {
  std::size_t n = 0;
  for (const auto& t : trials) n += t.passed();
  return n;
}

VerifyReport surject_verify(const io::Config& config, std::size_t trials, const std::optional<SeriesElement>& beta) {
  const auto start = std::chrono::steady_clock::now();
  VerifyReport rep;
  rep.config = config;
  rep.steps = config.steps.value_or(default_steps(config.profile, config.floor));
  rep.tail_margin = config.tail_margin.value_or(static_cast<int>(rep.steps));
  ScheduleOptions opt;
  opt.tail_margin = rep.tail_margin;
  SurjectionSpec spec(config.profile, config.depth, opt, config.c_exponent);
  rep.c_exponent = spec.c_exponent();
  for (const auto& st : spec.schedule().steps()) rep.schedule_b.push_back(st.b);
  const HomSpec phi = spec.phi(config.depth);
  const Value floor = Value::t_power(config.profile, config.floor);

  std::vector<SeriesElement> targets;
  if (beta) {
    require_same_profile(config.profile, beta->profile());
    targets.push_back(*beta);
  } else {
    for (std::size_t i = 0; i < trials; ++i) {
      std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                        static_cast<std::uint32_t>(i)};
      std::mt19937_64 rng(seq);
      targets.push_back(random_beta(spec, config.floor, config.exponents, config.terms, rng));
    }
  }

  rep.trials.resize(targets.size());
  const auto count = static_cast<std::int64_t>(targets.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    rep.trials[i] = run_trial(spec, phi, targets[i], rep.steps, floor);
    rep.trials[i].trial = static_cast<std::size_t>(i);
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

io::json to_json(const VerifyReport& rep) {
  io::json trials = io::json::array();
  for (const auto& t : rep.trials) {
    io::json residuals = io::json::array();
    io::json weights = io::json::array();
    for (const auto& v : t.residuals) {
      residuals.push_back(io::to_json(v));
      weights.push_back(v.weight());
    }
    io::json rec = {{"trial", t.trial},
                    {"digest", t.digest},
                    {"rescale", t.rescale},
                    {"residuals", residuals},
                    {"residual_weights", weights},
                    {"below_floor", t.below_floor},
                    {"preimage_terms", t.preimage_terms},
                    {"monotone", t.monotone},
                    {"bounded", t.bounded},
                    {"agrees", t.agrees},
                    {"passed", t.passed()}};
    if (!t.error.empty()) rec["error"] = t.error;
    trials.push_back(std::move(rec));
  }
  return {{"config", io::to_json(rep.config)},
          {"steps", rep.steps},
          {"tail_margin", rep.tail_margin},
          {"c", io::to_json(rep.c_exponent)},
          {"schedule_b", rep.schedule_b},
          {"trials", trials},
          {"passed", rep.passed()},
          {"failed", rep.failed()},
          {"wall_clock_seconds", rep.seconds}};
}

std::string residual_tsv(const VerifyReport& rep) {
  std::ostringstream out;
  out << "trial\tstep\tresidual_weight\n";
  char buf[64];
  for (const auto& t : rep.trials) {
    for (std::size_t m = 0; m < t.residuals.size(); ++m) {
      std::snprintf(buf, sizeof buf, "%.12f", t.residuals[m].weight());
      out << t.trial << '\t' << (m + 1) << '\t' << buf << '\n';
    }
  }
  return out.str();
}

}  // namespace ultrametrica
