#pragma once

#include <cstdint>
#include <vector>

#include "ultrametrica/series.hpp"

namespace ultrametrica::kernels {

/// Inputs to a sparse product: both factors' terms, the characteristic, and a
/// pruning weight. Products whose weight is certainly above `max_weight`
/// (norm certainly below the result floor) are skipped; the caller still
/// filters the survivors exactly.
struct ProductJob {
  const std::vector<Term>* f = nullptr;
  const std::vector<Term>* g = nullptr;
  const RadiusProfile* profile = nullptr;
  double max_weight = 0;
  bool prune = false;
};

/// Reference implementation: one pass over all pairs, then sort and combine.
std::vector<Term> sparse_product_serial(const ProductJob& job);

/// OpenMP version: rows of f are split across threads, each thread combines
/// its own block, and the blocks are merged. Same output as the serial one.
std::vector<Term> sparse_product_parallel(const ProductJob& job);

/// Sorts by exponent, adds coefficients of equal exponents mod p and drops zeros.
void combine_sorted(std::vector<Term>& terms, std::int64_t p);

/// Below this many pairs the parallel product falls back to the serial one.
inline constexpr std::size_t kParallelPairThreshold = 1u << 14;

}  // namespace ultrametrica::kernels
