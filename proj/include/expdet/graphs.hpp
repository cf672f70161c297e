#pragma once

#include <cstdint>
#include <vector>

#include "expdet/linalg.hpp"

namespace expdet::graphs {

using linalg::Matrix;

struct Edge {
  static constexpr int kNoBlock = -1;

  int tail = 0;
  int head = 0;
  double weight = 1.0;
  double prob = 1.0;
  int block = kNoBlock;  // optional partition id; all-or-none across the graph
};

enum class Orientation { kLowerToHigher, kHigherToLower };

/// Undirected weighted graph with per-edge operational probabilities.
/// Vertices are 0-based; self-loops are rejected, parallel edges allowed.
/// When a block partition is present, all edges of a block must carry the
/// same probability (one Bernoulli indicator per block); block ids are
/// normalized to 0..k-1 in ascending order of the original ids.
class WeightedGraph {
 public:
  WeightedGraph(int vertex_count, std::vector<Edge> edges);

  int vertex_count() const { return vertex_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  bool has_blocks() const { return block_count_ > 0; }
  int block_count() const { return block_count_; }
  const std::vector<double>& block_probs() const { return block_probs_; }

 private:
  int vertex_count_;
  std::vector<Edge> edges_;
  int block_count_ = 0;
  std::vector<double> block_probs_;
};

/// Reduced unweighted incidence matrix: one ±1 column per edge, the removed
/// vertex's row deleted. The default orientation puts +1 at the lower vertex
/// id; either convention yields the same A Aᵀ.
Matrix reduced_incidence(const WeightedGraph& g, int removed_vertex = 0,
                         Orientation orientation = Orientation::kLowerToHigher);

/// Weighted number of spanning trees t_w: det of the reduced weighted
/// Laplacian (equivalently det(A_w A_wᵀ)). 0 for disconnected graphs.
double weighted_tree_count(const WeightedGraph& g, int removed_vertex = 0);

/// All spanning trees as edge-index sets, in colexicographic order.
std::vector<std::vector<int>> enumerate_spanning_trees(const WeightedGraph& g,
                                                       unsigned max_edges = 16);

/// Expected weighted tree count of the random graph: t_{w_p} of the graph
/// reweighted edge-wise to p_i·w(e_i).
double expected_tree_count(const WeightedGraph& g, int removed_vertex = 0);

/// Exact expectation over the 2^m edge on/off states.
double expected_tree_count_bruteforce(const WeightedGraph& g, unsigned max_edges = 16);

enum class BlockMethod { kClosed, kBruteForce };

/// Expected weighted tree count for block-correlated edges. kBruteForce sums
/// over the 2^k block states; kClosed evaluates the tree-sum with per-edge
/// factors p_b^(1/n_b(T)), where n_b(T) counts the tree's edges in block b.
double block_expected_tree_count(const WeightedGraph& g, BlockMethod method,
                                 unsigned max_edges = 16, unsigned max_blocks = 20);

}  // namespace expdet::graphs
