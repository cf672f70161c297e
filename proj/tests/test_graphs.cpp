#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "expdet/graphs.hpp"
#include "expdet/kahan.hpp"
#include "expdet/serial.hpp"
#include "expdet/verify.hpp"

using namespace expdet;
using namespace expdet::graphs;

namespace {

WeightedGraph triangle(double w1 = 1, double w2 = 1, double w3 = 1, double p = 1.0) {
  return WeightedGraph(3, {{0, 1, w1, p, Edge::kNoBlock},
                           {0, 2, w2, p, Edge::kNoBlock},
                           {1, 2, w3, p, Edge::kNoBlock}});
}

double tree_sum_oracle(const WeightedGraph& g) {
  KahanSum sum;
  for (const auto& tree : enumerate_spanning_trees(g)) {
    double prod = 1.0;
    for (int idx : tree) prod *= g.edges()[idx].weight;
    sum.add(prod);
  }
  return sum.value();
}

}  // namespace

TEST_SUITE_BEGIN("graphs");

TEST_CASE("construction rejects invalid graphs") {
  CHECK_THROWS_AS(WeightedGraph(1, {{0, 0, 1, 1, -1}}), DomainError);
  CHECK_THROWS_AS(WeightedGraph(3, {{0, 0, 1, 1, -1}}), DomainError);  // self-loop
  CHECK_THROWS_AS(WeightedGraph(3, {{0, 5, 1, 1, -1}}), DomainError);  // bad vertex
  CHECK_THROWS_AS(WeightedGraph(3, {{0, 1, 0.0, 1, -1}}), DomainError);  // zero weight
  CHECK_THROWS_AS(WeightedGraph(3, {{0, 1, 1, 1.5, -1}}), DomainError);  // bad prob
  CHECK_THROWS_AS(WeightedGraph(3, std::vector<Edge>{}), DomainError);
  // Block column all-or-none.
  CHECK_THROWS_AS(WeightedGraph(3, {{0, 1, 1, 1, 0}, {1, 2, 1, 1, -1}}), DomainError);
  // One probability per block.
  CHECK_THROWS_AS(WeightedGraph(3, {{0, 1, 1, 0.5, 0}, {1, 2, 1, 0.6, 0}}), DomainError);
  // Block ids are normalized to 0..k-1.
  const WeightedGraph g(3, {{0, 1, 1, 0.5, 7}, {1, 2, 1, 0.25, 3}});
  CHECK(g.block_count() == 2);
  CHECK(g.edges()[0].block == 1);
  CHECK(g.edges()[1].block == 0);
  CHECK(g.block_probs()[0] == 0.25);
}

TEST_CASE("reduced incidence matrix") {
  const WeightedGraph single(2, {{0, 1, 1, 1, -1}});
  const Matrix a = reduced_incidence(single, 0);
  CHECK(a.rows() == 1);
  CHECK(a.cols() == 1);
  CHECK(std::fabs(a(0, 0)) == 1.0);
  CHECK(linalg::det(linalg::matmul(a, a.transposed())) == 1.0);

  const Matrix t = reduced_incidence(triangle(), 0);
  const Matrix lap = linalg::matmul(t, t.transposed());
  CHECK(lap(0, 0) == 2.0);
  CHECK(lap(1, 1) == 2.0);
  CHECK(lap(0, 1) == -1.0);
  CHECK(lap(1, 0) == -1.0);

  CHECK_THROWS_AS(reduced_incidence(triangle(), 9), DomainError);

  // Disconnected: two components, AAᵀ singular.
  const WeightedGraph disc(4, {{0, 1, 1, 1, -1}, {2, 3, 1, 1, -1}});
  const Matrix d = reduced_incidence(disc, 0);
  CHECK(std::fabs(linalg::det(linalg::matmul(d, d.transposed()))) <= 1e-12);
}

TEST_CASE("weighted tree count on pinned graphs") {
  CHECK(weighted_tree_count(triangle()) == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(weighted_tree_count(triangle(2, 3, 5)) == doctest::Approx(31.0).epsilon(1e-13));

  const WeightedGraph path(3, {{0, 1, 2, 1, -1}, {1, 2, 7, 1, -1}});
  CHECK(weighted_tree_count(path) == doctest::Approx(14.0).epsilon(1e-13));

  const WeightedGraph disc(4, {{0, 1, 1, 1, -1}, {2, 3, 1, 1, -1}});
  CHECK(std::fabs(weighted_tree_count(disc)) <= 1e-12);

  // Parallel edges add their weights.
  const WeightedGraph par(2, {{0, 1, 2, 1, -1}, {0, 1, 3, 1, -1}});
  CHECK(weighted_tree_count(par) == doctest::Approx(5.0).epsilon(1e-13));
}

TEST_CASE("spanning tree enumeration") {
  const auto trees = enumerate_spanning_trees(triangle());
  REQUIRE(trees.size() == 3);
  CHECK(trees[0] == std::vector<int>{0, 1});
  CHECK(trees[1] == std::vector<int>{0, 2});
  CHECK(trees[2] == std::vector<int>{1, 2});

  const WeightedGraph path(3, {{0, 1, 2, 1, -1}, {1, 2, 7, 1, -1}});
  const auto single = enumerate_spanning_trees(path);
  REQUIRE(single.size() == 1);
  CHECK(single[0] == std::vector<int>{0, 1});

  const WeightedGraph disc(4, {{0, 1, 1, 1, -1}, {2, 3, 1, 1, -1}});
  CHECK(enumerate_spanning_trees(disc).empty());

  std::vector<Edge> many;
  for (int i = 0; i < 17; ++i) many.push_back({0, 1 + i % 2, 1, 1, -1});
  CHECK_THROWS_AS(enumerate_spanning_trees(WeightedGraph(3, many)), CapacityError);
}

TEST_CASE("matrix-tree cross-check on random graphs") {
  SplitMix64 rng(31);
  for (int i = 0; i < 80; ++i) {
    const auto g = verify::random_connected_graph(rng);
    const double oracle = tree_sum_oracle(g);
    CHECK(std::fabs(weighted_tree_count(g) - oracle) <=
          1e-9 * std::max(1.0, std::fabs(oracle)));
  }
}

TEST_CASE("choice of removed vertex and orientation is immaterial") {
  SplitMix64 rng(32);
  for (int i = 0; i < 30; ++i) {
    const auto g = verify::random_connected_graph(rng);
    const double base = weighted_tree_count(g, 0);
    const double expected_base = expected_tree_count(g, 0);
    for (int v = 1; v < g.vertex_count(); ++v) {
      CHECK(std::fabs(weighted_tree_count(g, v) - base) <=
            1e-10 * std::max(1.0, std::fabs(base)));
      CHECK(std::fabs(expected_tree_count(g, v) - expected_base) <=
            1e-10 * std::max(1.0, std::fabs(expected_base)));
    }
    // det(A_w A_wᵀ) from the incidence matrix, both orientations.
    for (const auto orient : {Orientation::kLowerToHigher, Orientation::kHigherToLower}) {
      Matrix aw = reduced_incidence(g, 0, orient);
      for (std::size_t c = 0; c < aw.cols(); ++c) {
        const double s = std::sqrt(g.edges()[c].weight);
        for (std::size_t r = 0; r < aw.rows(); ++r) aw(r, c) *= s;
      }
      const double via_incidence = linalg::det(linalg::matmul(aw, aw.transposed()));
      CHECK(std::fabs(via_incidence - base) <= 1e-10 * std::max(1.0, std::fabs(base)));
    }
  }
}

TEST_CASE("expected tree count on pinned graphs") {
  CHECK(expected_tree_count(triangle(1, 1, 1, 0.5)) == doctest::Approx(0.75).epsilon(1e-12));

  // p = 1 leaves the weighted count unchanged.
  const auto g = triangle(2, 3, 5);
  CHECK(expected_tree_count(g) == doctest::Approx(weighted_tree_count(g)).epsilon(1e-13));

  // An edge with p = 0 behaves like a deleted edge.
  const WeightedGraph with_dead(3, {{0, 1, 2, 1, -1}, {0, 2, 3, 1, -1}, {1, 2, 5, 0.0, -1}});
  const WeightedGraph without(3, {{0, 1, 2, 1, -1}, {0, 2, 3, 1, -1}});
  CHECK(expected_tree_count(with_dead) ==
        doctest::Approx(expected_tree_count(without)).epsilon(1e-13));
}

TEST_CASE("expected tree count equals the edge-state oracle") {
  SplitMix64 rng(33);
  for (int i = 0; i < 60; ++i) {
    const auto g = verify::random_connected_graph(rng);
    const double oracle = expected_tree_count_bruteforce(g);
    CHECK(std::fabs(expected_tree_count(g) - oracle) <=
          1e-9 * std::max(1.0, std::fabs(oracle)));
    CHECK(std::fabs(serial::expected_tree_count_bruteforce(g) - oracle) <=
          1e-12 * std::max(1.0, std::fabs(oracle)));
  }

  const WeightedGraph single(2, {{0, 1, 3.5, 0.25, -1}});
  CHECK(expected_tree_count_bruteforce(single) == doctest::Approx(0.875).epsilon(1e-14));
}

TEST_CASE("raising an edge probability never hurts") {
  SplitMix64 rng(34);
  for (int i = 0; i < 30; ++i) {
    const auto g = verify::random_connected_graph(rng);
    const std::size_t pick = rng.next_below(g.edge_count());
    auto edges = g.edges();
    edges[pick].prob = 0.0;
    const double off = expected_tree_count(WeightedGraph(g.vertex_count(), edges));
    edges[pick].prob = 1.0;
    const double on = expected_tree_count(WeightedGraph(g.vertex_count(), edges));
    CHECK(on >= off - 1e-12 * std::max(1.0, std::fabs(on)));
  }
}

TEST_CASE("block-correlated edges: worked K3 example") {
  // Blocks {e1, e2} with p = 1/2 and {e3} with p = 1/2: expectation 1.
  const WeightedGraph g(3, {{0, 1, 1, 0.5, 0}, {0, 2, 1, 0.5, 0}, {1, 2, 1, 0.5, 1}});
  CHECK(block_expected_tree_count(g, BlockMethod::kBruteForce) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(block_expected_tree_count(g, BlockMethod::kClosed) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("block method degenerations") {
  // Every edge its own block reduces to independent edges.
  SplitMix64 rng(35);
  for (int i = 0; i < 20; ++i) {
    const auto base = verify::random_connected_graph(rng, 5, 8);
    auto edges = base.edges();
    for (std::size_t j = 0; j < edges.size(); ++j) edges[j].block = static_cast<int>(j);
    const WeightedGraph g(base.vertex_count(), edges);
    const double expected = expected_tree_count(g);
    CHECK(std::fabs(block_expected_tree_count(g, BlockMethod::kClosed) - expected) <=
          1e-12 * std::max(1.0, std::fabs(expected)));
    CHECK(std::fabs(block_expected_tree_count(g, BlockMethod::kBruteForce) - expected) <=
          1e-12 * std::max(1.0, std::fabs(expected)));
  }

  // A single block is all-or-nothing: p · t_w.
  for (int i = 0; i < 20; ++i) {
    const auto base = verify::random_connected_graph(rng, 5, 8);
    auto edges = base.edges();
    const double p = rng.next_unit();
    for (auto& e : edges) {
      e.block = 0;
      e.prob = p;
    }
    const WeightedGraph g(base.vertex_count(), edges);
    const double expected = p * weighted_tree_count(g);
    CHECK(std::fabs(block_expected_tree_count(g, BlockMethod::kClosed) - expected) <=
          1e-12 * std::max(1.0, std::fabs(expected)));
    CHECK(std::fabs(block_expected_tree_count(g, BlockMethod::kBruteForce) - expected) <=
          1e-12 * std::max(1.0, std::fabs(expected)));
  }

  CHECK_THROWS_AS(block_expected_tree_count(triangle(), BlockMethod::kClosed), DomainError);
}

TEST_CASE("lemma 2: closed form equals the block-state oracle") {
  SplitMix64 rng(36);
  for (int i = 0; i < 40; ++i) {
    const auto g = verify::random_connected_graph(rng, 5, 10, /*with_blocks=*/true, 5);
    const double brute = block_expected_tree_count(g, BlockMethod::kBruteForce);
    const double closed = block_expected_tree_count(g, BlockMethod::kClosed);
    CHECK(std::fabs(closed - brute) <= 1e-9 * std::max(1.0, std::fabs(brute)));
  }
}

TEST_SUITE_END();
