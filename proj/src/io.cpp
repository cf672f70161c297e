#include "expdet/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace expdet::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view token, const std::string& path, int line) {
  const std::string_view t = trim(token);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size())
    throw ParseError(path, line, "expected a number, got '" + std::string(t) + "'");
  if (!std::isfinite(value))
    throw ParseError(path, line, "non-finite value '" + std::string(t) + "'");
  return value;
}

int parse_nonneg_int(std::string_view token, const std::string& path, int line,
                     const char* what) {
  const std::string_view t = trim(token);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size() || value < 0)
    throw ParseError(path, line,
                     std::string("expected a nonnegative integer ") + what + ", got '" +
                         std::string(t) + "'");
  return value;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return in;
}

std::vector<std::vector<double>> read_csv_grid(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string_view cell =
          comma == std::string::npos
              ? std::string_view(line).substr(start)
              : std::string_view(line).substr(start, comma - start);
      row.push_back(parse_double(cell, path, line_no));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError(path, line_no,
                       "ragged row: expected " + std::to_string(rows.front().size()) +
                           " values, got " + std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(path, 0, "file holds no rows");
  return rows;
}

}  // namespace

linalg::Matrix read_csv_matrix(const std::string& path) {
  const auto rows = read_csv_grid(path);
  const std::size_t r = rows.size();
  const std::size_t c = rows.front().size();
  std::vector<double> entries;
  entries.reserve(r * c);
  for (const auto& row : rows) entries.insert(entries.end(), row.begin(), row.end());
  return linalg::Matrix(r, c, std::move(entries));
}

linalg::Vector read_csv_vector(const std::string& path) {
  const auto rows = read_csv_grid(path);
  if (rows.size() == 1) return linalg::Vector(rows.front());
  if (rows.front().size() == 1) {
    std::vector<double> entries;
    entries.reserve(rows.size());
    for (const auto& row : rows) entries.push_back(row.front());
    return linalg::Vector(std::move(entries));
  }
  throw ParseError(path, 0, "expected a single row or a single column");
}

graphs::WeightedGraph read_edge_list(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::vector<graphs::Edge> edges;
  int max_vertex = -1;
  int arity = 0;  // 4 or 5 once the first edge fixes it
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const std::size_t hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream ss(line);
    std::vector<std::string> tokens;
    for (std::string tok; ss >> tok;) tokens.push_back(std::move(tok));
    if (tokens.empty()) continue;
    if (tokens.size() != 4 && tokens.size() != 5)
      throw ParseError(path, line_no,
                       "expected 'tail head weight prob [block]', got " +
                           std::to_string(tokens.size()) + " fields");
    if (arity == 0)
      arity = static_cast<int>(tokens.size());
    else if (arity != static_cast<int>(tokens.size()))
      throw ParseError(path, line_no, "block column must be present on all edges or none");
    graphs::Edge e;
    e.tail = parse_nonneg_int(tokens[0], path, line_no, "vertex id");
    e.head = parse_nonneg_int(tokens[1], path, line_no, "vertex id");
    e.weight = parse_double(tokens[2], path, line_no);
    e.prob = parse_double(tokens[3], path, line_no);
    if (tokens.size() == 5) e.block = parse_nonneg_int(tokens[4], path, line_no, "block id");
    max_vertex = std::max({max_vertex, e.tail, e.head});
    edges.push_back(e);
  }
  if (edges.empty()) throw ParseError(path, 0, "edge list holds no edges");
  return graphs::WeightedGraph(max_vertex + 1, std::move(edges));
}

}  // namespace expdet::io
