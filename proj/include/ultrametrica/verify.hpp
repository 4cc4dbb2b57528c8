#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ultrametrica/gleason.hpp"
#include "ultrametrica/io.hpp"

namespace ultrametrica {

/// Least M with |t|^M s strictly below |t|^floor_exponent.
std::size_t default_steps(const ProfilePtr& profile, const Rational& floor_exponent);

/// Random beta with |beta| <= s and floor |t|^floor_exponent. x-exponents are
/// drawn from the first `exponents` positions of the lattice order. With
/// `exact`, the same terms form an exact element.
SeriesElement random_beta(const SurjectionSpec& spec, const Rational& floor_exponent, std::size_t exponents,
                          std::size_t terms, std::mt19937_64& rng, bool exact = false);

struct TrialRecord {
  std::size_t trial = 0;
  std::string digest;                // FNV-1a of the serialized beta
  int rescale = 0;
  std::vector<Value> residuals;      // bound on |beta_m| after each step, original units
  std::vector<bool> below_floor;
  std::size_t preimage_terms = 0;
  bool monotone = false;             // residuals never increase
  bool bounded = false;              // residual after step m <= |t|^m s (rescaled units) or below its floor
  bool agrees = false;               // phi(f) = beta on all terms above the floor
  std::string error;

  bool passed() const { return error.empty() && monotone && bounded && agrees; }
};

struct VerifyReport {
  io::Config config;
  std::size_t steps = 0;
  int tail_margin = 1;
  Rational c_exponent;
  std::vector<int> schedule_b;
  std::vector<TrialRecord> trials;   // sorted by trial id
  double seconds = 0;

  std::size_t passed() const;
  std::size_t failed() const { return trials.size() - passed(); }
};

/// Reconstructs and checks preimages for `trials` random targets, in parallel.
/// With `beta`, checks that one target instead.
VerifyReport surject_verify(const io::Config& config, std::size_t trials,
                            const std::optional<SeriesElement>& beta = std::nullopt);

io::json to_json(const VerifyReport& report);
/// trial, step, residual weight (12 decimals), with a header row.
std::string residual_tsv(const VerifyReport& report);

}  // namespace ultrametrica
