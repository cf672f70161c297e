#pragma once

#include <cstdint>

#include "expdet/expdet.hpp"
#include "expdet/graphs.hpp"

namespace expdet::serial {

// Straight-line single-threaded implementations of the enumeration kernels.
// These are the reference the parallel kernels are tested and benchmarked
// against: one flat compensated loop each, no chunking.

double expected_det_bruteforce(const RankOneEnsemble& e, unsigned max_m = kDefaultBruteForceCap);
double expected_det_cauchy_binet(const RankOneEnsemble& e,
                                 std::uint64_t max_subsets = kDefaultSubsetCap);
McEstimate expected_det_monte_carlo(const RankOneEnsemble& e, std::uint64_t samples,
                                    std::uint64_t seed);
double block_expected_det_bruteforce(const BlockEnsemble& b,
                                     unsigned max_k = kDefaultBruteForceCap);
double expected_tree_count_bruteforce(const graphs::WeightedGraph& g, unsigned max_edges = 16);

}  // namespace expdet::serial
