#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "expdet/kahan.hpp"

namespace expdet::detail {

// Fixed work-chunk size for the parallel enumeration kernels. Chunk
// boundaries and the combine order depend only on the iteration count, never
// on the thread count or schedule, so results are run-to-run identical.
inline constexpr std::uint64_t kChunkSize = 1024;

inline std::uint64_t chunk_count(std::uint64_t n) { return (n + kChunkSize - 1) / kChunkSize; }

// Sums chunk_fn(begin, end) over the chunks of [0, count). chunk_fn does its
// own compensated accumulation inside the range; the per-chunk partials are
// combined with Kahan summation in chunk-index order.
template <class ChunkFn>
double chunked_sum(std::uint64_t count, const ChunkFn& chunk_fn) {
  if (count == 0) return 0.0;
  const std::int64_t chunks = static_cast<std::int64_t>(chunk_count(count));
  std::vector<double> partial(static_cast<std::size_t>(chunks), 0.0);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t c = 0; c < chunks; ++c) {
    const std::uint64_t begin = static_cast<std::uint64_t>(c) * kChunkSize;
    const std::uint64_t end = std::min(count, begin + kChunkSize);
    partial[static_cast<std::size_t>(c)] = chunk_fn(begin, end);
  }
  KahanSum total;
  for (double x : partial) total.add(x);
  return total.value();
}

// Streaming mean / second central moment (Welford), mergeable across chunks.
struct Moments {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }
};

inline Moments merge(const Moments& a, const Moments& b) {
  if (a.count == 0) return b;
  if (b.count == 0) return a;
  Moments r;
  r.count = a.count + b.count;
  const double delta = b.mean - a.mean;
  const double nb_over_n = static_cast<double>(b.count) / static_cast<double>(r.count);
  r.mean = a.mean + delta * nb_over_n;
  r.m2 = a.m2 + b.m2 + delta * delta * static_cast<double>(a.count) * nb_over_n;
  return r;
}

// Same chunking scheme as chunked_sum, merging Moments in chunk order.
template <class ChunkFn>
Moments chunked_moments(std::uint64_t count, const ChunkFn& chunk_fn) {
  Moments total;
  if (count == 0) return total;
  const std::int64_t chunks = static_cast<std::int64_t>(chunk_count(count));
  std::vector<Moments> partial(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t c = 0; c < chunks; ++c) {
    const std::uint64_t begin = static_cast<std::uint64_t>(c) * kChunkSize;
    const std::uint64_t end = std::min(count, begin + kChunkSize);
    partial[static_cast<std::size_t>(c)] = chunk_fn(begin, end);
  }
  for (const Moments& m : partial) total = merge(total, m);
  return total;
}

}  // namespace expdet::detail
