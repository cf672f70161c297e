#include "expdet/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "expdet/combin.hpp"
#include "expdet/kahan.hpp"
#include "expdet/parallel.hpp"

namespace expdet::graphs {

namespace {

struct UnionFind {
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }

  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];  // path halving
      x = parent[x];
    }
    return x;
  }

  bool merge(int a, int b) {
    const int ra = find(a);
    const int rb = find(b);
    if (ra == rb) return false;
    parent[ra] = rb;
    return true;
  }

  std::vector<int> parent;
};

int reduced_row(int vertex, int removed) { return vertex < removed ? vertex : vertex - 1; }

// Reduced weighted Laplacian Σ w_i a_i a_iᵀ assembled directly; weight(i)
// supplies the per-edge weight so the same assembly serves t_w, t_{w_p} and
// the outcome subgraphs.
template <class WeightFn>
void assemble_reduced_laplacian(const WeightedGraph& g, int removed, const WeightFn& weight,
                                std::vector<double>& buf) {
  const std::size_t n = static_cast<std::size_t>(g.vertex_count() - 1);
  std::fill(buf.begin(), buf.end(), 0.0);
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const double w = weight(i);
    if (w == 0.0) continue;
    const Edge& e = g.edges()[i];
    const bool keep_tail = e.tail != removed;
    const bool keep_head = e.head != removed;
    const int rt = reduced_row(e.tail, removed);
    const int rh = reduced_row(e.head, removed);
    if (keep_tail) buf[rt * n + rt] += w;
    if (keep_head) buf[rh * n + rh] += w;
    if (keep_tail && keep_head) {
      buf[rt * n + rh] -= w;
      buf[rh * n + rt] -= w;
    }
  }
}

void check_removed_vertex(const WeightedGraph& g, int removed) {
  if (removed < 0 || removed >= g.vertex_count())
    throw DomainError("removed vertex " + std::to_string(removed) + " does not exist");
}

void check_edge_cap(const WeightedGraph& g, unsigned max_edges, const char* what) {
  if (g.edge_count() > max_edges || g.edge_count() >= 63)
    throw CapacityError(std::string(what) + ": " + std::to_string(g.edge_count()) +
                        " edges exceed the cap of " + std::to_string(max_edges));
}

}  // namespace

WeightedGraph::WeightedGraph(int vertex_count, std::vector<Edge> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)) {
  if (vertex_count_ < 2) throw DomainError("graph needs at least two vertices");
  if (edges_.empty()) throw DomainError("graph needs at least one edge");
  bool any_block = false;
  bool all_block = true;
  for (const Edge& e : edges_) {
    if (e.tail < 0 || e.tail >= vertex_count_ || e.head < 0 || e.head >= vertex_count_)
      throw DomainError("edge endpoint outside the vertex range");
    if (e.tail == e.head) throw DomainError("self-loops are not allowed");
    if (!(e.weight > 0.0) || !std::isfinite(e.weight))
      throw DomainError("edge weights must be positive and finite");
    if (!(e.prob >= 0.0 && e.prob <= 1.0)) throw DomainError("edge probability outside [0, 1]");
    if (e.block == Edge::kNoBlock)
      all_block = false;
    else if (e.block < 0)
      throw DomainError("block ids must be nonnegative");
    else
      any_block = true;
  }
  if (any_block && !all_block)
    throw DomainError("block partition must cover every edge or none");
  if (any_block) {
    std::map<int, double> probs;  // original id -> common probability
    for (const Edge& e : edges_) {
      auto [it, inserted] = probs.emplace(e.block, e.prob);
      if (!inserted && it->second != e.prob)
        throw DomainError("all edges of a block must carry the same probability");
    }
    std::map<int, int> remap;
    for (const auto& [id, prob] : probs) {
      remap[id] = block_count_++;
      block_probs_.push_back(prob);
    }
    for (Edge& e : edges_) e.block = remap[e.block];
  }
}

Matrix reduced_incidence(const WeightedGraph& g, int removed_vertex, Orientation orientation) {
  check_removed_vertex(g, removed_vertex);
  const std::size_t n = static_cast<std::size_t>(g.vertex_count() - 1);
  Matrix a(n, g.edge_count());
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const Edge& e = g.edges()[i];
    const int lo = std::min(e.tail, e.head);
    const int hi = std::max(e.tail, e.head);
    const int plus = orientation == Orientation::kLowerToHigher ? lo : hi;
    const int minus = orientation == Orientation::kLowerToHigher ? hi : lo;
    if (plus != removed_vertex) a(reduced_row(plus, removed_vertex), i) = 1.0;
    if (minus != removed_vertex) a(reduced_row(minus, removed_vertex), i) = -1.0;
  }
  return a;
}

double weighted_tree_count(const WeightedGraph& g, int removed_vertex) {
  check_removed_vertex(g, removed_vertex);
  const std::size_t n = static_cast<std::size_t>(g.vertex_count() - 1);
  std::vector<double> buf(n * n);
  assemble_reduced_laplacian(
      g, removed_vertex, [&](std::size_t i) { return g.edges()[i].weight; }, buf);
  return linalg::detail::det_in_place(buf, n);
}

std::vector<std::vector<int>> enumerate_spanning_trees(const WeightedGraph& g,
                                                       unsigned max_edges) {
  check_edge_cap(g, max_edges, "enumerate_spanning_trees");
  const unsigned m = static_cast<unsigned>(g.edge_count());
  const unsigned k = static_cast<unsigned>(g.vertex_count() - 1);
  std::vector<std::vector<int>> trees;
  if (m < k) return trees;
  std::vector<unsigned> subset;
  colex_first(k, subset);
  do {
    UnionFind uf(g.vertex_count());
    bool acyclic = true;
    for (unsigned idx : subset) {
      const Edge& e = g.edges()[idx];
      if (!uf.merge(e.tail, e.head)) {
        acyclic = false;
        break;
      }
    }
    // k successful merges over vertex_count vertices leave one component.
    if (acyclic) trees.emplace_back(subset.begin(), subset.end());
  } while (colex_next(subset, m));
  return trees;
}

double expected_tree_count(const WeightedGraph& g, int removed_vertex) {
  check_removed_vertex(g, removed_vertex);
  const std::size_t n = static_cast<std::size_t>(g.vertex_count() - 1);
  std::vector<double> buf(n * n);
  assemble_reduced_laplacian(
      g, removed_vertex,
      [&](std::size_t i) { return g.edges()[i].prob * g.edges()[i].weight; }, buf);
  return linalg::detail::det_in_place(buf, n);
}

double expected_tree_count_bruteforce(const WeightedGraph& g, unsigned max_edges) {
  check_edge_cap(g, max_edges, "expected_tree_count_bruteforce");
  const std::size_t n = static_cast<std::size_t>(g.vertex_count() - 1);
  const std::size_t m = g.edge_count();
  const std::uint64_t states = std::uint64_t(1) << m;
  return detail::chunked_sum(states, [&](std::uint64_t begin, std::uint64_t end) {
    std::vector<double> buf(n * n);
    KahanSum acc;
    for (std::uint64_t s = begin; s < end; ++s) {
      double prob = 1.0;
      for (std::size_t i = 0; i < m; ++i)
        prob *= ((s >> i) & 1u) ? g.edges()[i].prob : 1.0 - g.edges()[i].prob;
      if (prob == 0.0) continue;
      assemble_reduced_laplacian(
          g, 0, [&](std::size_t i) { return ((s >> i) & 1u) ? g.edges()[i].weight : 0.0; },
          buf);
      acc.add(prob * linalg::detail::det_in_place(buf, n));
    }
    return acc.value();
  });
}

double block_expected_tree_count(const WeightedGraph& g, BlockMethod method,
                                 unsigned max_edges, unsigned max_blocks) {
  if (!g.has_blocks()) throw DomainError("graph has no block partition");
  const std::size_t k = static_cast<std::size_t>(g.block_count());

  if (method == BlockMethod::kBruteForce) {
    if (k > max_blocks || k >= 63)
      throw CapacityError("block_expected_tree_count: " + std::to_string(k) +
                          " blocks exceed the cap of " + std::to_string(max_blocks));
    const std::size_t n = static_cast<std::size_t>(g.vertex_count() - 1);
    const std::uint64_t states = std::uint64_t(1) << k;
    return detail::chunked_sum(states, [&](std::uint64_t begin, std::uint64_t end) {
      std::vector<double> buf(n * n);
      KahanSum acc;
      for (std::uint64_t s = begin; s < end; ++s) {
        double prob = 1.0;
        for (std::size_t b = 0; b < k; ++b)
          prob *= ((s >> b) & 1u) ? g.block_probs()[b] : 1.0 - g.block_probs()[b];
        if (prob == 0.0) continue;
        assemble_reduced_laplacian(
            g, 0,
            [&](std::size_t i) {
              return ((s >> g.edges()[i].block) & 1u) ? g.edges()[i].weight : 0.0;
            },
            buf);
        acc.add(prob * linalg::detail::det_in_place(buf, n));
      }
      return acc.value();
    });
  }

  // Closed form: per tree, each edge contributes w(e)·p_b^(1/n_b(T)). With
  // p_b = 0 and n_b(T) > 0 the factor is 0 (limit convention).
  const auto trees = enumerate_spanning_trees(g, max_edges);
  std::vector<int> block_edge_count(k);
  KahanSum total;
  for (const auto& tree : trees) {
    std::fill(block_edge_count.begin(), block_edge_count.end(), 0);
    for (int idx : tree) ++block_edge_count[g.edges()[idx].block];
    double term = 1.0;
    for (int idx : tree) {
      const Edge& e = g.edges()[idx];
      const double pb = g.block_probs()[e.block];
      const double frac =
          pb == 0.0 ? 0.0 : std::exp(std::log(pb) / block_edge_count[e.block]);
      term *= e.weight * frac;
    }
    total.add(term);
  }
  return total.value();
}

}  // namespace expdet::graphs
