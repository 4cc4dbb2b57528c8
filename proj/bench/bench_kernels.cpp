// Serial reference versus OpenMP kernels: the sparse product and a batch of
// surjection trials. Thread count comes from OMP_NUM_THREADS.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>

#include "ultrametrica/kernels.hpp"
#include "ultrametrica/verify.hpp"

using namespace ultrametrica;

namespace {

std::vector<Term> random_terms(const ProfilePtr& prof, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Term> terms;
  for (std::size_t k = 0; k < count; ++k) {
    ExponentVec e(prof->n() + 1);
    for (std::size_t i = 0; i <= prof->n(); ++i) {
      e[i] = Rational(static_cast<std::int64_t>(rng() % 64) - (i ? 32 : 0), 4);
    }
    terms.push_back({e, static_cast<std::uint32_t>(1 + rng() % static_cast<std::uint64_t>(prof->p() - 1))});
  }
  kernels::combine_sorted(terms, prof->p());
  return terms;
}

template <bool Parallel>
void BM_SparseProduct(benchmark::State& state) {
  auto prof = RadiusProfile::free(3, 2);
  const auto f = random_terms(prof, static_cast<std::size_t>(state.range(0)), 1);
  const auto g = random_terms(prof, static_cast<std::size_t>(state.range(0)), 2);
  kernels::ProductJob job{&f, &g, prof.get(), 0, false};
  for (auto _ : state) {
    auto out = Parallel ? kernels::sparse_product_parallel(job) : kernels::sparse_product_serial(job);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.size() * g.size()));
}

// one thread is the serial reference for the trial loop
template <bool Parallel>
void BM_SurjectionBatch(benchmark::State& state) {
  io::Config cfg;
  cfg.profile = RadiusProfile::free(2, static_cast<std::size_t>(state.range(0)), max_p_power(2));
  const int threads = omp_get_max_threads();
  if (!Parallel) omp_set_num_threads(1);
  for (auto _ : state) {
    auto rep = surject_verify(cfg, 20);
    benchmark::DoNotOptimize(rep.trials.data());
  }
  omp_set_num_threads(threads);
}

}  // namespace

BENCHMARK(BM_SparseProduct<false>)->Arg(100)->Arg(300)->Arg(1000);
BENCHMARK(BM_SparseProduct<true>)->Arg(100)->Arg(300)->Arg(1000);
BENCHMARK(BM_SurjectionBatch<false>)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SurjectionBatch<true>)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
