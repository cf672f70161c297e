#include "expdet/serial.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "expdet/combin.hpp"
#include "expdet/kahan.hpp"
#include "expdet/parallel.hpp"

namespace expdet::serial {

double expected_det_bruteforce(const RankOneEnsemble& e, unsigned max_m) {
  const std::size_t n = e.dim();
  const std::size_t m = e.terms();
  if (m > max_m || m >= 63)
    throw CapacityError("expected_det_bruteforce: 2^" + std::to_string(m) +
                        " states exceed the cap of 2^" + std::to_string(max_m));
  const std::uint64_t states = std::uint64_t(1) << m;
  std::vector<double> buf(n * n);
  KahanSum acc;
  for (std::uint64_t s = 0; s < states; ++s) {
    const double prob = expdet::detail::outcome_probability(e.p(), s);
    if (prob == 0.0) continue;
    expdet::detail::assemble_outcome(e, s, buf);
    acc.add(prob * linalg::detail::det_in_place(buf, n));
  }
  return acc.value();
}

double expected_det_cauchy_binet(const RankOneEnsemble& e, std::uint64_t max_subsets) {
  const std::size_t n = e.dim();
  const std::size_t m = e.terms();
  if (m < n) return 0.0;
  if (binomial(m, n) > max_subsets)
    throw CapacityError("expected_det_cauchy_binet: C(" + std::to_string(m) + ", " +
                        std::to_string(n) + ") exceeds the subset cap");
  std::vector<unsigned> subset;
  colex_first(static_cast<unsigned>(n), subset);
  std::vector<double> buf(n * n);
  KahanSum acc;
  do {
    expdet::detail::assemble_weighted_subset(e, subset, buf);
    acc.add(linalg::detail::det_in_place(buf, n));
  } while (colex_next(subset, static_cast<unsigned>(m)));
  return acc.value();
}

McEstimate expected_det_monte_carlo(const RankOneEnsemble& e, std::uint64_t samples,
                                    std::uint64_t seed) {
  if (samples < 2) throw DomainError("monte carlo needs at least 2 samples");
  const std::size_t n = e.dim();
  std::vector<double> buf(n * n);
  expdet::detail::Moments mo;
  for (std::uint64_t s = 0; s < samples; ++s) {
    const std::uint64_t bits = expdet::detail::sample_outcome_bits(e.p(), seed, s);
    expdet::detail::assemble_outcome(e, bits, buf);
    mo.add(linalg::detail::det_in_place(buf, n));
  }
  McEstimate est;
  est.mean = mo.mean;
  const double variance = mo.count > 1 ? mo.m2 / static_cast<double>(mo.count - 1) : 0.0;
  est.std_error = std::sqrt(variance / static_cast<double>(mo.count));
  est.samples = samples;
  est.seed = seed;
  return est;
}

double block_expected_det_bruteforce(const BlockEnsemble& b, unsigned max_k) {
  const std::size_t n = b.dim();
  const std::size_t k = b.block_count();
  if (k > max_k || k >= 63)
    throw CapacityError("block_expected_det_bruteforce: 2^" + std::to_string(k) +
                        " states exceed the cap of 2^" + std::to_string(max_k));
  const std::uint64_t states = std::uint64_t(1) << k;
  std::vector<double> buf(n * n);
  KahanSum acc;
  for (std::uint64_t s = 0; s < states; ++s) {
    const double prob = expdet::detail::outcome_probability(b.p(), s);
    if (prob == 0.0) continue;
    expdet::detail::assemble_block_outcome(b, s, buf);
    acc.add(prob * linalg::detail::det_in_place(buf, n));
  }
  return acc.value();
}

double expected_tree_count_bruteforce(const graphs::WeightedGraph& g, unsigned max_edges) {
  const std::size_t m = g.edge_count();
  if (m > max_edges || m >= 63)
    throw CapacityError("expected_tree_count_bruteforce: " + std::to_string(m) +
                        " edges exceed the cap of " + std::to_string(max_edges));
  const int vc = g.vertex_count();
  const std::size_t n = static_cast<std::size_t>(vc - 1);
  const std::uint64_t states = std::uint64_t(1) << m;
  std::vector<double> buf(n * n);
  KahanSum acc;
  for (std::uint64_t s = 0; s < states; ++s) {
    double prob = 1.0;
    for (std::size_t i = 0; i < m; ++i)
      prob *= ((s >> i) & 1u) ? g.edges()[i].prob : 1.0 - g.edges()[i].prob;
    if (prob == 0.0) continue;
    std::fill(buf.begin(), buf.end(), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      if (!((s >> i) & 1u)) continue;
      const graphs::Edge& e = g.edges()[i];
      const double w = e.weight;
      const bool keep_tail = e.tail != 0;
      const bool keep_head = e.head != 0;
      const int rt = e.tail - 1;
      const int rh = e.head - 1;
      if (keep_tail) buf[rt * n + rt] += w;
      if (keep_head) buf[rh * n + rh] += w;
      if (keep_tail && keep_head) {
        buf[rt * n + rh] -= w;
        buf[rh * n + rt] -= w;
      }
    }
    acc.add(prob * linalg::detail::det_in_place(buf, n));
  }
  return acc.value();
}

}  // namespace expdet::serial
