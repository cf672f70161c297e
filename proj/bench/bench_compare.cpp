// Times the OpenMP enumeration kernels against the serial reference
// implementations on identical inputs and reports values, deviations and
// speedups. Not a correctness gate; the test suites own that.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "expdet/expdet.hpp"
#include "expdet/graphs.hpp"
#include "expdet/serial.hpp"
#include "expdet/verify.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Timing {
  double value = 0.0;
  double secs = 0.0;
};

template <class Fn>
Timing time_best_of(int repeats, const Fn& fn) {
  Timing best{0.0, 1e30};
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = Clock::now();
    const double v = fn();
    const double s = seconds_since(t0);
    if (s < best.secs) best = {v, s};
  }
  return best;
}

void row(const char* name, const Timing& serial, const Timing& parallel) {
  std::printf("%-22s serial %10.4fs  parallel %10.4fs  speedup %5.2fx  |dev| %.3e\n", name,
              serial.secs, parallel.secs, serial.secs / parallel.secs,
              std::fabs(serial.value - parallel.value));
}

}  // namespace

int main(int argc, char** argv) {
  unsigned m = 22;           // brute-force term count (2^m outcomes)
  std::uint64_t samples = 2000000;
  int repeats = 3;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--m" && i + 1 < argc)
      m = static_cast<unsigned>(std::strtoul(argv[++i], nullptr, 10));
    else if (arg == "--samples" && i + 1 < argc)
      samples = std::strtoull(argv[++i], nullptr, 10);
    else if (arg == "--repeat" && i + 1 < argc)
      repeats = std::atoi(argv[++i]);
    else {
      std::fprintf(stderr, "usage: %s [--m M] [--samples N] [--repeat R]\n", argv[0]);
      return 2;
    }
  }

#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif

  expdet::SplitMix64 rng(2024);

  // Rank-one brute force: n = 4, 2^m outcomes.
  {
    expdet::Matrix u(4, m), v(4, m);
    expdet::Vector p(m);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        u(i, j) = rng.next_in(-1, 1);
        v(i, j) = rng.next_in(-1, 1);
      }
    for (std::size_t j = 0; j < m; ++j) p[j] = rng.next_unit();
    const expdet::RankOneEnsemble e(u, v, p);
    const auto ser =
        time_best_of(repeats, [&] { return expdet::serial::expected_det_bruteforce(e, m); });
    const auto par = time_best_of(repeats, [&] { return expdet::expected_det_bruteforce(e, m); });
    row("bruteforce", ser, par);
    std::printf("%-22s closed form %.12g vs brute %.12g\n", "",
                expdet::expected_det_closed_form(e), par.value);
  }

  // Subset expansion: n = 5 over 2m columns keeps C(2m, 5) near the cap.
  {
    const unsigned cols = 2 * m;
    expdet::Matrix u(5, cols), v(5, cols);
    expdet::Vector p(cols);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < cols; ++j) {
        u(i, j) = rng.next_in(-1, 1);
        v(i, j) = rng.next_in(-1, 1);
      }
    for (std::size_t j = 0; j < cols; ++j) p[j] = rng.next_unit();
    const expdet::RankOneEnsemble e(u, v, p);
    const auto ser = time_best_of(
        repeats, [&] { return expdet::serial::expected_det_cauchy_binet(e, 100000000); });
    const auto par =
        time_best_of(repeats, [&] { return expdet::expected_det_cauchy_binet(e, 100000000); });
    row("cauchy-binet", ser, par);
  }

  // Monte Carlo.
  {
    expdet::SplitMix64 g(5);
    const expdet::RankOneEnsemble e = expdet::verify::random_ensemble(g, 4, 12);
    const auto ser = time_best_of(repeats, [&] {
      return expdet::serial::expected_det_monte_carlo(e, samples, 42).mean;
    });
    const auto par = time_best_of(repeats, [&] {
      return expdet::expected_det_monte_carlo(e, samples, 42).mean;
    });
    row("monte-carlo", ser, par);
  }

  // Random-graph brute force: a ring with chords, m edges.
  {
    const int vc = 8;
    std::vector<expdet::graphs::Edge> edges;
    for (unsigned i = 0; i < m; ++i) {
      expdet::graphs::Edge e;
      e.tail = static_cast<int>(i % vc);
      e.head = static_cast<int>((i + 1 + i % 3) % vc);
      if (e.tail == e.head) e.head = (e.head + 1) % vc;
      e.weight = 1.0 + rng.next_unit();
      e.prob = rng.next_unit();
      edges.push_back(e);
    }
    const expdet::graphs::WeightedGraph g(vc, edges);
    const auto ser = time_best_of(
        repeats, [&] { return expdet::serial::expected_tree_count_bruteforce(g, m); });
    const auto par =
        time_best_of(repeats, [&] { return expdet::graphs::expected_tree_count_bruteforce(g, m); });
    row("tree-bruteforce", ser, par);
  }

  return 0;
}
