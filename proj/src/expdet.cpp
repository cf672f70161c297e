#include "expdet/expdet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "expdet/combin.hpp"
#include "expdet/parallel.hpp"
#include "expdet/rng.hpp"

namespace expdet {

namespace {

void check_probabilities(const Vector& p) {
  for (double x : p)
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("probability outside [0, 1]");
}

void check_state_cap(std::size_t count, unsigned cap, const char* what) {
  if (count > cap || count >= 63)
    throw CapacityError(std::string(what) + ": 2^" + std::to_string(count) +
                        " states exceed the cap of 2^" + std::to_string(cap));
}

// Adds w · (column i of u)(column i of v)ᵀ to an n×n row-major buffer.
void add_outer(std::vector<double>& buf, const Matrix& u, const Matrix& v, std::size_t i,
               double w) {
  const std::size_t n = u.rows();
  for (std::size_t r = 0; r < n; ++r) {
    const double ur = w * u(r, i);
    if (ur == 0.0) continue;
    for (std::size_t c = 0; c < n; ++c) buf[r * n + c] += ur * v(c, i);
  }
}

}  // namespace

RankOneEnsemble::RankOneEnsemble(Matrix u, Matrix v, Vector p)
    : u_(std::move(u)), v_(std::move(v)), p_(std::move(p)) {
  if (u_.rows() != v_.rows() || u_.cols() != v_.cols())
    throw DimensionError("U and V must share shape n×m");
  if (p_.size() != u_.cols()) throw DimensionError("p must have one entry per term");
  check_probabilities(p_);
}

BlockEnsemble::BlockEnsemble(std::vector<Block> blocks, Vector p)
    : blocks_(std::move(blocks)), p_(std::move(p)) {
  if (blocks_.empty()) throw DimensionError("block ensemble needs at least one block");
  const std::size_t n = blocks_.front().u.rows();
  for (const Block& b : blocks_) {
    if (b.u.rows() != b.v.rows() || b.u.cols() != b.v.cols())
      throw DimensionError("each U_i and V_i must share shape n×r_i");
    if (b.u.rows() != n) throw DimensionError("all blocks must share the state dimension n");
  }
  if (p_.size() != blocks_.size()) throw DimensionError("p must have one entry per block");
  check_probabilities(p_);
}

RankOneEnsemble BlockEnsemble::flatten() const {
  const std::size_t n = dim();
  const std::size_t k = block_count();
  Matrix u(n, k);
  Matrix v(n, k);
  for (std::size_t i = 0; i < k; ++i) {
    if (blocks_[i].u.cols() != 1) throw DomainError("flatten requires every block rank r_i == 1");
    for (std::size_t r = 0; r < n; ++r) {
      u(r, i) = blocks_[i].u(r, 0);
      v(r, i) = blocks_[i].v(r, 0);
    }
  }
  return RankOneEnsemble(std::move(u), std::move(v), p_);
}

double detail::outcome_probability(const Vector& p, std::uint64_t bits) {
  double prob = 1.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    prob *= ((bits >> i) & 1u) ? p[i] : 1.0 - p[i];
  return prob;
}

void detail::assemble_outcome(const RankOneEnsemble& e, std::uint64_t bits,
                              std::vector<double>& buf) {
  std::fill(buf.begin(), buf.end(), 0.0);
  for (std::size_t i = 0; i < e.terms(); ++i)
    if ((bits >> i) & 1u) add_outer(buf, e.u(), e.v(), i, 1.0);
}

void detail::assemble_weighted_subset(const RankOneEnsemble& e,
                                      const std::vector<unsigned>& subset,
                                      std::vector<double>& buf) {
  std::fill(buf.begin(), buf.end(), 0.0);
  for (unsigned k : subset) add_outer(buf, e.u(), e.v(), k, e.p()[k]);
}

void detail::assemble_block_outcome(const BlockEnsemble& b, std::uint64_t bits,
                                    std::vector<double>& buf) {
  const std::size_t n = b.dim();
  std::fill(buf.begin(), buf.end(), 0.0);
  for (std::size_t i = 0; i < b.block_count(); ++i) {
    if (!((bits >> i) & 1u)) continue;
    const auto& blk = b.block(i);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t k = 0; k < blk.u.cols(); ++k) {
        const double ur = blk.u(r, k);
        if (ur == 0.0) continue;
        for (std::size_t c = 0; c < n; ++c) buf[r * n + c] += ur * blk.v(c, k);
      }
  }
}

std::uint64_t detail::sample_outcome_bits(const Vector& p, std::uint64_t seed,
                                          std::uint64_t index) {
  SplitMix64 rng = SplitMix64::substream(seed, index);
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (rng.next_bernoulli(p[i])) bits |= std::uint64_t(1) << i;
  return bits;
}

double expected_det_closed_form(const RankOneEnsemble& e) {
  const std::size_t n = e.dim();
  const std::size_t m = e.terms();
  Matrix mat(n, n);
  // M = U diag(p) Vᵀ
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < m; ++k) {
      const double w = e.u()(i, k) * e.p()[k];
      if (w == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) mat(i, j) += w * e.v()(j, k);
    }
  return linalg::det(mat);
}

double expected_det_bruteforce(const RankOneEnsemble& e, unsigned max_m) {
  const std::size_t n = e.dim();
  const std::size_t m = e.terms();
  check_state_cap(m, max_m, "expected_det_bruteforce");
  const std::uint64_t states = std::uint64_t(1) << m;
  return detail::chunked_sum(states, [&](std::uint64_t begin, std::uint64_t end) {
    std::vector<double> buf(n * n);
    KahanSum acc;
    for (std::uint64_t s = begin; s < end; ++s) {
      const double prob = detail::outcome_probability(e.p(), s);
      if (prob == 0.0) continue;
      detail::assemble_outcome(e, s, buf);
      acc.add(prob * linalg::detail::det_in_place(buf, n));
    }
    return acc.value();
  });
}

double expected_det_cauchy_binet(const RankOneEnsemble& e, std::uint64_t max_subsets) {
  const std::size_t n = e.dim();
  const std::size_t m = e.terms();
  if (m < n) return 0.0;  // no n-subset exists; the expectation is identically 0
  const std::uint64_t subsets = binomial(m, n);
  if (subsets > max_subsets)
    throw CapacityError("expected_det_cauchy_binet: C(" + std::to_string(m) + ", " +
                        std::to_string(n) + ") exceeds the subset cap");
  return detail::chunked_sum(subsets, [&](std::uint64_t begin, std::uint64_t end) {
    std::vector<unsigned> subset;
    colex_unrank(begin, static_cast<unsigned>(n), static_cast<unsigned>(m), subset);
    std::vector<double> buf(n * n);
    KahanSum acc;
    for (std::uint64_t r = begin; r < end; ++r) {
      detail::assemble_weighted_subset(e, subset, buf);
      acc.add(linalg::detail::det_in_place(buf, n));
      if (r + 1 < end) colex_next(subset, static_cast<unsigned>(m));
    }
    return acc.value();
  });
}

McEstimate expected_det_monte_carlo(const RankOneEnsemble& e, std::uint64_t samples,
                                    std::uint64_t seed) {
  if (samples < 2) throw DomainError("monte carlo needs at least 2 samples");
  const std::size_t n = e.dim();
  const auto moments =
      detail::chunked_moments(samples, [&](std::uint64_t begin, std::uint64_t end) {
        std::vector<double> buf(n * n);
        detail::Moments mo;
        for (std::uint64_t s = begin; s < end; ++s) {
          const std::uint64_t bits = detail::sample_outcome_bits(e.p(), seed, s);
          detail::assemble_outcome(e, bits, buf);
          mo.add(linalg::detail::det_in_place(buf, n));
        }
        return mo;
      });
  McEstimate est;
  est.mean = moments.mean;
  const double variance =
      moments.count > 1 ? moments.m2 / static_cast<double>(moments.count - 1) : 0.0;
  est.std_error = std::sqrt(variance / static_cast<double>(moments.count));
  est.samples = samples;
  est.seed = seed;
  return est;
}

double block_expected_det_bruteforce(const BlockEnsemble& b, unsigned max_k) {
  const std::size_t n = b.dim();
  const std::size_t k = b.block_count();
  check_state_cap(k, max_k, "block_expected_det_bruteforce");
  const std::uint64_t states = std::uint64_t(1) << k;
  return detail::chunked_sum(states, [&](std::uint64_t begin, std::uint64_t end) {
    std::vector<double> buf(n * n);
    KahanSum acc;
    for (std::uint64_t s = begin; s < end; ++s) {
      const double prob = detail::outcome_probability(b.p(), s);
      if (prob == 0.0) continue;
      detail::assemble_block_outcome(b, s, buf);
      acc.add(prob * linalg::detail::det_in_place(buf, n));
    }
    return acc.value();
  });
}

double block_lower_bound(const BlockEnsemble& b) {
  const std::size_t n = b.dim();
  Matrix mat(n, n);
  for (std::size_t i = 0; i < b.block_count(); ++i) {
    const auto& blk = b.block(i);
    const double pi = b.p()[i];
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t k = 0; k < blk.u.cols(); ++k) {
        const double ur = pi * blk.u(r, k);
        if (ur == 0.0) continue;
        for (std::size_t c = 0; c < n; ++c) mat(r, c) += ur * blk.v(c, k);
      }
  }
  return linalg::det(mat);
}

}  // namespace expdet
