#include "ultrametrica/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <numeric>

namespace ultrametrica::kernels {

namespace {

constexpr double kPruneSlack = 1e-7;

struct Prepared {
  std::vector<double> wf;
  std::vector<std::size_t> g_order;  // g indices by ascending weight
  std::vector<double> wg_sorted;
};

Prepared prepare(const ProductJob& job) {
  Prepared pr;
  const auto& f = *job.f;
  const auto& g = *job.g;
  pr.wf.resize(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) pr.wf[i] = job.profile->weight(f[i].exp);
  std::vector<double> wg(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) wg[j] = job.profile->weight(g[j].exp);
  pr.g_order.resize(g.size());
  std::iota(pr.g_order.begin(), pr.g_order.end(), 0);
  std::sort(pr.g_order.begin(), pr.g_order.end(), [&](std::size_t a, std::size_t b) { return wg[a] < wg[b]; });
  pr.wg_sorted.resize(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) pr.wg_sorted[j] = wg[pr.g_order[j]];
  return pr;
}

void row_products(const ProductJob& job, const Prepared& pr, std::size_t i, std::vector<Term>& out) {
  const auto& fi = (*job.f)[i];
  const auto& g = *job.g;
  const auto p = static_cast<std::uint64_t>(job.profile->p());
  for (std::size_t k = 0; k < pr.g_order.size(); ++k) {
    if (job.prune && pr.wf[i] + pr.wg_sorted[k] > job.max_weight + kPruneSlack) break;
    const auto& gj = g[pr.g_order[k]];
    Term t;
    t.exp = fi.exp + gj.exp;
    t.coeff = static_cast<std::uint32_t>((static_cast<std::uint64_t>(fi.coeff) * gj.coeff) % p);
    out.push_back(t);
  }
}

}  // namespace

void combine_sorted(std::vector<Term>& terms, std::int64_t p) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.exp < b.exp; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms.size();) {
    std::uint64_t c = 0;
    std::size_t j = i;
    for (; j < terms.size() && terms[j].exp == terms[i].exp; ++j) c += terms[j].coeff;
    c %= static_cast<std::uint64_t>(p);
    if (c != 0) {
      terms[out].exp = terms[i].exp;
      terms[out].coeff = static_cast<std::uint32_t>(c);
      ++out;
    }
    i = j;
  }
  terms.resize(out);
}

std::vector<Term> sparse_product_serial(const ProductJob& job) {
  std::vector<Term> out;
  if (job.f->empty() || job.g->empty()) return out;
  Prepared pr = prepare(job);
  for (std::size_t i = 0; i < job.f->size(); ++i) row_products(job, pr, i, out);
  combine_sorted(out, job.profile->p());
  return out;
}

std::vector<Term> sparse_product_parallel(const ProductJob& job) {
  if (job.f->empty() || job.g->empty()) return {};
  if (job.f->size() * job.g->size() < kParallelPairThreshold || omp_get_max_threads() == 1) {
    return sparse_product_serial(job);
  }
  Prepared pr = prepare(job);
  const auto rows = static_cast<std::int64_t>(job.f->size());
  int nthreads = omp_get_max_threads();
  std::vector<std::vector<Term>> blocks(static_cast<std::size_t>(nthreads));

#pragma omp parallel num_threads(nthreads)
  {
    auto& local = blocks[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < rows; ++i) row_products(job, pr, static_cast<std::size_t>(i), local);
    combine_sorted(local, job.profile->p());
  }

  std::size_t total = 0;
  for (const auto& b : blocks) total += b.size();
  std::vector<Term> out;
  out.reserve(total);
  for (auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
  combine_sorted(out, job.profile->p());
  return out;
}

}  // namespace ultrametrica::kernels
