#pragma once

#include <string>

#include "expdet/graphs.hpp"
#include "expdet/linalg.hpp"

namespace expdet::io {

/// CSV matrix: one row per line, comma-separated, '.' decimal separator, no
/// header. Blank lines are skipped; ragged or non-numeric rows raise
/// ParseError carrying the 1-based line number.
linalg::Matrix read_csv_matrix(const std::string& path);

/// A CSV file holding a single row or a single column.
linalg::Vector read_csv_vector(const std::string& path);

/// Edge list: one edge per line, whitespace-separated
/// `tail head weight prob [block]`, '#' starts a comment. The block column
/// is optional but must be present on all edges or none.
graphs::WeightedGraph read_edge_list(const std::string& path);

}  // namespace expdet::io
