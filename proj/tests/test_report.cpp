#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include <json.hpp>

#include "expdet/errors.hpp"
#include "expdet/report.hpp"

using namespace expdet::cli;

TEST_SUITE_BEGIN("report");

TEST_CASE("format_double round-trips exactly") {
  for (double v : {0.75, 1.0 / 3.0, -2.5e-17, 3.0, 1e300, 0.1 + 0.2}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(3.0) == "3");
}

TEST_CASE("text rendering is ordered and stable") {
  RunReport r;
  r.command = "expdet";
  r.inputs = {{"u", "u.csv"}};
  r.results = {{"closed_form", 0.75}, {"bruteforce", 0.75}};
  r.notes = {{"mc_seed", "42"}};
  r.elapsed_ms = 1.5;
  const std::string text = render_text(r);
  CHECK(text ==
        "command=expdet\n"
        "input.u=u.csv\n"
        "result.closed_form=0.75\n"
        "result.bruteforce=0.75\n"
        "note.mc_seed=42\n"
        "elapsed_ms=1.5\n");
  CHECK(render_text(r) == text);
}

TEST_CASE("check lines carry pass, deviation and optional fields") {
  RunReport r;
  r.command = "verify";
  CheckLine failing;
  failing.name = "demo";
  failing.passed = false;
  failing.max_deviation = 0.25;
  failing.instances = 10;
  failing.failing_seed = 3;
  failing.note = "went sideways";
  r.checks.push_back(failing);
  const std::string text = render_text(r);
  CHECK(text.find("check.demo.pass=false\n") != std::string::npos);
  CHECK(text.find("check.demo.max_deviation=0.25\n") != std::string::npos);
  CHECK(text.find("check.demo.instances=10\n") != std::string::npos);
  CHECK(text.find("check.demo.failing_seed=3\n") != std::string::npos);
  CHECK(text.find("check.demo.note=went sideways\n") != std::string::npos);
}

TEST_CASE("non-finite numeric fields are rejected") {
  RunReport r;
  r.command = "expdet";
  r.results = {{"bad", std::nan("")}};
  CHECK_THROWS_AS(render_text(r), expdet::Error);
  CHECK_THROWS_AS(render_json(r), expdet::Error);
}

TEST_CASE("json rendering mirrors the text fields") {
  RunReport r;
  r.command = "trees";
  r.inputs = {{"edges", "k3.edges"}};
  r.results = {{"weighted_tree_count", 3.0}};
  r.notes = {{"flag", "on"}};
  CheckLine ok;
  ok.name = "demo";
  ok.instances = 5;
  r.checks.push_back(ok);
  r.elapsed_ms = 0.5;

  const auto j = nlohmann::json::parse(render_json(r));
  CHECK(j["command"] == "trees");
  CHECK(j["inputs"]["edges"] == "k3.edges");
  CHECK(j["results"]["weighted_tree_count"].get<double>() == 3.0);
  CHECK(j["notes"]["flag"] == "on");
  CHECK(j["checks"].size() == 1);
  CHECK(j["checks"][0]["name"] == "demo");
  CHECK(j["checks"][0]["pass"] == true);
  CHECK(!j["checks"][0].contains("failing_seed"));
  CHECK(j["elapsed_ms"].get<double>() == 0.5);
}

TEST_SUITE_END();
