#pragma once

#include <stdexcept>
#include <string>

namespace expdet {

// Base class for every error thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shape mismatch between operands (non-square det, incompatible product, ...).
struct DimensionError : Error {
  using Error::Error;
};

// Value outside the operation's domain (bad probability, unknown vertex, ...).
struct DomainError : Error {
  using Error::Error;
};

// Requested enumeration would exceed the configured cap.
struct CapacityError : Error {
  using Error::Error;
};

// SPD factorization failed. pivot_index is the offending column, -1 if unknown.
struct SingularityError : Error {
  explicit SingularityError(const std::string& what, int pivot_index_ = -1)
      : Error(what), pivot_index(pivot_index_) {}
  int pivot_index;
};

// Malformed input file. line is 1-based, 0 when no line applies.
struct ParseError : Error {
  ParseError(std::string file_, int line_, const std::string& what)
      : Error(file_ + ":" + std::to_string(line_) + ": " + what),
        file(std::move(file_)),
        line(line_) {}
  std::string file;
  int line;
};

}  // namespace expdet
