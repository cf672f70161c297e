#pragma once

#include <cstdint>
#include <vector>

#include "expdet/linalg.hpp"

namespace expdet {

using linalg::Matrix;
using linalg::Vector;

/// Paired rank-one factor columns u_i, v_i with independent Bernoulli
/// on-probabilities p_i. The quantity of interest is
/// E[det(Σ_i π_i u_i v_iᵀ)], π_i ~ Bernoulli(p_i).
class RankOneEnsemble {
 public:
  RankOneEnsemble(Matrix u, Matrix v, Vector p);

  std::size_t dim() const { return u_.rows(); }    // n
  std::size_t terms() const { return u_.cols(); }  // m

  const Matrix& u() const { return u_; }
  const Matrix& v() const { return v_; }
  const Vector& p() const { return p_; }

  /// True when m < n: every realization is rank deficient, so the expected
  /// determinant is 0. Not an error, just a flag the caller may surface.
  bool always_singular() const { return terms() < dim(); }

 private:
  Matrix u_;
  Matrix v_;
  Vector p_;
};

/// Rank-r_i factor pairs (U_i, V_i), each block switched by one Bernoulli
/// indicator.
class BlockEnsemble {
 public:
  struct Block {
    Matrix u;  // n × r_i
    Matrix v;  // n × r_i
  };

  BlockEnsemble(std::vector<Block> blocks, Vector p);

  std::size_t dim() const { return blocks_.front().u.rows(); }
  std::size_t block_count() const { return blocks_.size(); }
  const Block& block(std::size_t i) const { return blocks_[i]; }
  const Vector& p() const { return p_; }

  /// Rank-one view of an ensemble whose blocks all have r_i == 1.
  RankOneEnsemble flatten() const;

 private:
  std::vector<Block> blocks_;
  Vector p_;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

inline constexpr unsigned kDefaultBruteForceCap = 20;         // at most 2^20 outcomes
inline constexpr std::uint64_t kDefaultSubsetCap = 1000000;   // at most 1e6 subsets

/// det(U diag(p) Vᵀ). This single determinant equals the full expectation
/// over the 2^m on/off outcomes; O(n²m + n³).
double expected_det_closed_form(const RankOneEnsemble& e);

/// The definitionally exact expectation: sum over all 2^m outcomes of
/// outcome probability times det. Throws CapacityError when m > max_m.
double expected_det_bruteforce(const RankOneEnsemble& e, unsigned max_m = kDefaultBruteForceCap);

/// Subset-expansion form: Σ over n-subsets Q of det(Σ_{k∈Q} p_k u_k v_kᵀ),
/// iterated in colexicographic order. Throws CapacityError when C(m, n)
/// exceeds max_subsets. Returns 0 when m < n (empty expansion).
double expected_det_cauchy_binet(const RankOneEnsemble& e,
                                 std::uint64_t max_subsets = kDefaultSubsetCap);

/// Sample mean and standard error of det(U Π Vᵀ) over independent Bernoulli
/// draws. Sample i draws from SplitMix64::substream(seed, i), so one seed
/// fully determines the estimate regardless of thread count.
McEstimate expected_det_monte_carlo(const RankOneEnsemble& e, std::uint64_t samples,
                                    std::uint64_t seed);

/// Exact expectation over the 2^k block on/off states.
double block_expected_det_bruteforce(const BlockEnsemble& b,
                                     unsigned max_k = kDefaultBruteForceCap);

/// det(Σ_i p_i U_i V_iᵀ), a lower bound on the block expectation for
/// symmetric ensembles (V_i = U_i).
double block_lower_bound(const BlockEnsemble& b);

namespace detail {

// Shared per-term assembly used by both the parallel kernels and the serial
// reference implementations.
double outcome_probability(const Vector& p, std::uint64_t bits);
void assemble_outcome(const RankOneEnsemble& e, std::uint64_t bits, std::vector<double>& buf);
void assemble_weighted_subset(const RankOneEnsemble& e, const std::vector<unsigned>& subset,
                              std::vector<double>& buf);
void assemble_block_outcome(const BlockEnsemble& b, std::uint64_t bits, std::vector<double>& buf);
std::uint64_t sample_outcome_bits(const Vector& p, std::uint64_t seed, std::uint64_t index);

}  // namespace detail

}  // namespace expdet
