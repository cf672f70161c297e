#include "expdet/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "expdet/errors.hpp"

namespace expdet::cli {

namespace {

void require_finite(const std::string& key, double v) {
  if (!std::isfinite(v)) throw Error("report field '" + key + "' is not finite");
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string render_text(const RunReport& report) {
  std::ostringstream out;
  out << "command=" << report.command << '\n';
  for (const auto& [k, v] : report.inputs) out << "input." << k << '=' << v << '\n';
  for (const auto& [k, v] : report.results) {
    require_finite(k, v);
    out << "result." << k << '=' << format_double(v) << '\n';
  }
  for (const auto& [k, v] : report.notes) out << "note." << k << '=' << v << '\n';
  for (const CheckLine& c : report.checks) {
    out << "check." << c.name << ".pass=" << (c.passed ? "true" : "false") << '\n';
    out << "check." << c.name << ".max_deviation=" << format_double(c.max_deviation) << '\n';
    out << "check." << c.name << ".instances=" << c.instances << '\n';
    if (c.failing_seed)
      out << "check." << c.name << ".failing_seed=" << *c.failing_seed << '\n';
    if (!c.note.empty()) out << "check." << c.name << ".note=" << c.note << '\n';
  }
  require_finite("elapsed_ms", report.elapsed_ms);
  out << "elapsed_ms=" << format_double(report.elapsed_ms) << '\n';
  return out.str();
}

std::string render_json(const RunReport& report) {
  nlohmann::ordered_json j;
  j["command"] = report.command;
  j["inputs"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.inputs) j["inputs"][k] = v;
  j["results"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.results) {
    require_finite(k, v);
    j["results"][k] = v;
  }
  j["notes"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.notes) j["notes"][k] = v;
  j["checks"] = nlohmann::ordered_json::array();
  for (const CheckLine& c : report.checks) {
    nlohmann::ordered_json jc;
    jc["name"] = c.name;
    jc["pass"] = c.passed;
    jc["max_deviation"] = c.max_deviation;
    jc["instances"] = c.instances;
    if (c.failing_seed) jc["failing_seed"] = *c.failing_seed;
    if (!c.note.empty()) jc["note"] = c.note;
    j["checks"].push_back(std::move(jc));
  }
  require_finite("elapsed_ms", report.elapsed_ms);
  j["elapsed_ms"] = report.elapsed_ms;
  return j.dump(2) + "\n";
}

}  // namespace expdet::cli
