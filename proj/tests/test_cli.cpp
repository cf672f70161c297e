#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

struct CmdResult {
  int exit_code = -1;
  std::string out;
};

CmdResult run(const std::string& args, const std::string& env_prefix = "") {
  const std::string cmd = env_prefix + " \"" EXPDET_CLI_PATH "\" " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CmdResult result;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = ::fread(buf.data(), 1, buf.size(), pipe)) > 0) result.out.append(buf.data(), got);
  const int status = ::pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

// Extracts "key=value" from a line-oriented report; fails if absent.
std::string field(const std::string& report, const std::string& key) {
  std::istringstream lines(report);
  std::string line;
  while (std::getline(lines, line))
    if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
  FAIL("field not found: ", key, "\nin:\n", report);
  return {};
}

double num_field(const std::string& report, const std::string& key) {
  return std::stod(field(report, key));
}

std::string strip_timing(const std::string& report) {
  std::istringstream lines(report);
  std::ostringstream out;
  std::string line;
  while (std::getline(lines, line))
    if (line.rfind("elapsed_ms=", 0) != 0) out << line << '\n';
  return out.str();
}

struct TempDir {
  fs::path path;

  TempDir() {
    path = fs::temp_directory_path() / ("expdet-cli-test-" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }

  std::string write(const std::string& name, const std::string& content) const {
    const fs::path p = path / name;
    std::ofstream out(p);
    out << content;
    return p.string();
  }
};

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("expdet subcommand") {
  TempDir dir;
  const auto u = dir.write("u.csv", "2\n");
  const auto v = dir.write("v.csv", "3\n");
  const auto p = dir.write("p.csv", "0.5\n");

  const auto basic = run("expdet " + u + " " + v + " " + p);
  CHECK(basic.exit_code == 0);
  CHECK(num_field(basic.out, "result.closed_form") == doctest::Approx(3.0).epsilon(1e-15));

  // The worked 2x3 ensemble with every oracle on.
  const auto u2 = dir.write("u2.csv", "1,0,1\n0,1,1\n");
  const auto p2 = dir.write("p2.csv", "0.5,0.5,0.5\n");
  const auto all =
      run("expdet " + u2 + " " + u2 + " " + p2 + " --bruteforce --cauchy-binet --mc 20000 --seed 7");
  CHECK(all.exit_code == 0);
  CHECK(num_field(all.out, "result.closed_form") == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(num_field(all.out, "result.bruteforce_abs_dev") <= 1e-12);
  CHECK(num_field(all.out, "result.cauchy_binet_abs_dev") <= 1e-12);
  CHECK(field(all.out, "note.mc_seed") == "7");
  const double mc_mean = num_field(all.out, "result.mc_mean");
  const double mc_se = num_field(all.out, "result.mc_std_error");
  CHECK(std::fabs(mc_mean - 0.75) <= 4 * mc_se);

  // Shape mismatch is an input error.
  const auto bad = run("expdet " + u2 + " " + u + " " + p2);
  CHECK(bad.exit_code == 2);

  // Missing file is an input error.
  CHECK(run("expdet nope.csv " + v + " " + p).exit_code == 2);

  // JSON mode carries the same numbers.
  const auto json_run = run("expdet " + u2 + " " + u2 + " " + p2 + " --json");
  CHECK(json_run.exit_code == 0);
  const auto parsed = nlohmann::json::parse(json_run.out);
  CHECK(parsed["command"] == "expdet");
  CHECK(parsed["results"]["closed_form"].get<double>() == doctest::Approx(0.75).epsilon(1e-12));

  // Monte Carlo with a fixed seed is bit-identical across separate runs.
  const auto mc1 = run("expdet " + u2 + " " + u2 + " " + p2 + " --mc 50000 --seed 9");
  const auto mc2 = run("expdet " + u2 + " " + u2 + " " + p2 + " --mc 50000 --seed 9");
  CHECK(strip_timing(mc1.out) == strip_timing(mc2.out));

  // m < n is flagged, not rejected: the expectation is legitimately 0.
  const auto tall_u = dir.write("tall_u.csv", "1\n2\n");
  const auto tall_p = dir.write("tall_p.csv", "0.5\n");
  const auto tall = run("expdet " + tall_u + " " + tall_u + " " + tall_p);
  CHECK(tall.exit_code == 0);
  CHECK(field(tall.out, "note.always_singular").find("m < n") != std::string::npos);
}

TEST_CASE("trees subcommand") {
  TempDir dir;
  const auto k3 = dir.write("k3.edges", "0 1 1 0.5\n0 2 1 0.5\n1 2 1 0.5\n");
  const auto expected = run("trees " + k3 + " --expected --bruteforce");
  CHECK(expected.exit_code == 0);
  CHECK(num_field(expected.out, "result.weighted_tree_count") ==
        doctest::Approx(3.0).epsilon(1e-13));
  CHECK(num_field(expected.out, "result.expected_tree_count") ==
        doctest::Approx(0.75).epsilon(1e-12));
  CHECK(num_field(expected.out, "result.expected_bruteforce_abs_dev") <= 1e-12);

  const auto path_graph = dir.write("path.edges", "0 1 2 1\n1 2 7 1\n");
  const auto tw = run("trees " + path_graph);
  CHECK(tw.exit_code == 0);
  CHECK(num_field(tw.out, "result.weighted_tree_count") == doctest::Approx(14.0).epsilon(1e-13));

  const auto blocks = dir.write("blocks.edges", "0 1 1 0.5 0\n0 2 1 0.5 0\n1 2 1 0.5 1\n");
  const auto blk = run("trees " + blocks + " --blocks");
  CHECK(blk.exit_code == 0);
  CHECK(num_field(blk.out, "result.block_closed") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(num_field(blk.out, "result.block_bruteforce") == doctest::Approx(1.0).epsilon(1e-12));

  // --blocks without a block column is an input error.
  CHECK(run("trees " + k3 + " --blocks").exit_code == 2);

  // The removed vertex is arbitrary.
  const auto other = run("trees " + k3 + " --removed-vertex 2");
  CHECK(other.exit_code == 0);
  CHECK(num_field(other.out, "result.weighted_tree_count") ==
        doctest::Approx(3.0).epsilon(1e-12));
  CHECK(run("trees " + k3 + " --removed-vertex 7").exit_code == 2);
}

TEST_CASE("capacity errors and the EXPDET_MAX_BRUTE override") {
  TempDir dir;
  std::ostringstream big;
  for (int i = 0; i < 17; ++i) big << (i % 2) << ' ' << 2 + i / 2 << " 1 0.5\n";
  const auto edges = dir.write("big.edges", big.str());

  CHECK(run("trees " + edges + " --bruteforce").exit_code == 3);
  CHECK(run("trees " + edges + " --bruteforce", "EXPDET_MAX_BRUTE=18").exit_code == 0);
  CHECK(run("trees " + edges + " --bruteforce", "EXPDET_MAX_BRUTE=banana").exit_code == 2);
}

TEST_CASE("select subcommand") {
  TempDir dir;
  const auto h = dir.write("h.csv", "1,0\n1,0\n0,1\n0,1\n");
  const auto sel = run("select " + h + " --k 2");
  CHECK(sel.exit_code == 0);
  CHECK(num_field(sel.out, "result.expected_doptimality_relaxed") >= 1.0 - 1e-6);
  CHECK(field(sel.out, "note.selected").size() >= 3);

  const auto all = run("select " + h + " --k 4");
  CHECK(all.exit_code == 0);
  for (int i = 0; i < 4; ++i)
    CHECK(num_field(all.out, "result.p." + std::to_string(i)) == 1.0);

  CHECK(run("select " + h + " --k 1").exit_code == 2);  // infeasible
  CHECK(run("select " + h + " --k 9").exit_code == 2);

  const auto bad = dir.write("bad.csv", "1,0\n2,0\n3,0\n");
  CHECK(run("select " + bad + " --k 2").exit_code == 3);  // singular model
}

TEST_CASE("verify determinism") {
  const auto a = run("verify --size small --seed 42");
  CHECK(a.exit_code == 0);
  CHECK(field(a.out, "note.all_passed") == "true");
  const auto b = run("verify --size small --seed 42");
  CHECK(b.exit_code == 0);
  CHECK(strip_timing(a.out) == strip_timing(b.out));

  // The chunked reductions make results independent of the thread count.
  const auto one = run("verify --size small --seed 42", "OMP_NUM_THREADS=1");
  const auto four = run("verify --size small --seed 42", "OMP_NUM_THREADS=4");
  CHECK(strip_timing(one.out) == strip_timing(four.out));
  CHECK(strip_timing(one.out) == strip_timing(a.out));
}

TEST_SUITE_END();
