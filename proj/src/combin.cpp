#include "expdet/combin.hpp"

#include <limits>

namespace expdet {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t num = n - k + i;
    if (r > std::numeric_limits<std::uint64_t>::max() / num)
      return std::numeric_limits<std::uint64_t>::max();
    // r * num is divisible by i at every step, so this stays exact.
    r = r * num / i;
  }
  return r;
}

void colex_first(unsigned k, std::vector<unsigned>& subset) {
  subset.resize(k);
  for (unsigned i = 0; i < k; ++i) subset[i] = i;
}

bool colex_next(std::vector<unsigned>& subset, unsigned m) {
  const unsigned k = static_cast<unsigned>(subset.size());
  for (unsigned i = 0; i < k; ++i) {
    const unsigned limit = (i + 1 < k) ? subset[i + 1] : m;
    if (subset[i] + 1 < limit) {
      ++subset[i];
      for (unsigned j = 0; j < i; ++j) subset[j] = j;
      return true;
    }
  }
  return false;
}

void colex_unrank(std::uint64_t rank, unsigned k, unsigned m, std::vector<unsigned>& subset) {
  subset.resize(k);
  for (unsigned i = k; i-- > 0;) {
    unsigned c = i;  // smallest admissible value at position i
    while (c + 1 < m && binomial(c + 1, i + 1) <= rank) ++c;
    subset[i] = c;
    rank -= binomial(c, i + 1);
  }
}

}  // namespace expdet
