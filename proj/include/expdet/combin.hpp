#pragma once

#include <cstdint>
#include <vector>

namespace expdet {

// C(n, k), saturating at UINT64_MAX on overflow.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

// k-subsets of [0, m) in colexicographic order, stored as ascending index
// lists. Colex rank of {s_0 < s_1 < ...} is sum_i C(s_i, i + 1).
void colex_first(unsigned k, std::vector<unsigned>& subset);
bool colex_next(std::vector<unsigned>& subset, unsigned m);
void colex_unrank(std::uint64_t rank, unsigned k, unsigned m, std::vector<unsigned>& subset);

}  // namespace expdet
