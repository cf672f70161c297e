#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace expdet::cli {

struct CheckLine {
  std::string name;
  bool passed = true;
  double max_deviation = 0.0;
  std::uint64_t instances = 0;
  std::optional<std::uint64_t> failing_seed;
  std::string note;
};

/// One run's machine-readable output: key=value lines by default, a single
/// JSON object with the same fields under --json. Everything except
/// elapsed_ms is deterministic for fixed inputs, flags and seeds.
struct RunReport {
  std::string command;
  std::vector<std::pair<std::string, std::string>> inputs;
  std::vector<std::pair<std::string, double>> results;
  std::vector<std::pair<std::string, std::string>> notes;
  std::vector<CheckLine> checks;
  double elapsed_ms = 0.0;
};

/// Round-trip exact decimal rendering ("%.17g").
std::string format_double(double v);

std::string render_text(const RunReport& report);
std::string render_json(const RunReport& report);

}  // namespace expdet::cli
