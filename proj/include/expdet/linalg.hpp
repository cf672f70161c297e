#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "expdet/errors.hpp"

namespace expdet::linalg {

/// Dense real matrix, row-major. Constructors that accept user data reject
/// non-finite entries and empty shapes.
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols);  // zero-filled
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  std::span<const double> entries() const { return entries_; }
  std::span<double> entries() { return entries_; }

  Matrix transposed() const;
  double max_abs() const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> entries_;
};

/// Dense real vector with finite entries.
class Vector {
 public:
  explicit Vector(std::size_t len) : entries_(len, 0.0) { require_positive(len); }
  explicit Vector(std::vector<double> entries);

  static Vector constant(std::size_t len, double value);

  std::size_t size() const { return entries_.size(); }

  double& operator[](std::size_t i) { return entries_[i]; }
  double operator[](std::size_t i) const { return entries_[i]; }

  std::span<const double> entries() const { return entries_; }

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

 private:
  static void require_positive(std::size_t len);
  std::vector<double> entries_;
};

/// Determinant by LU with partial pivoting. A pivot whose magnitude falls
/// below 1e-300 yields exactly 0: rank-deficient input is a meaningful case
/// here, not an error.
double det(const Matrix& m);

Matrix matmul(const Matrix& a, const Matrix& b);
Vector matvec(const Matrix& a, const Vector& x);
Vector matvec_transposed(const Matrix& a, const Vector& x);  // aᵀ x

/// Solves A x = b for symmetric positive definite A via Cholesky. Symmetry is
/// checked up front (max |A - Aᵀ| <= 1e-10 max |A|); a non-positive pivot
/// raises SingularityError carrying the failing column.
Vector solve_spd(const Matrix& a, const Vector& b);

/// Lower-triangular Cholesky factor of a symmetric matrix, or nullopt when a
/// pivot is not strictly positive (*fail_index receives the column).
std::optional<Matrix> cholesky(const Matrix& a, int* fail_index = nullptr);

/// log det of an SPD matrix via Cholesky; nullopt when not positive definite.
/// Assumes symmetric storage, which callers guarantee by construction.
std::optional<double> log_det_spd(const Matrix& a);

Matrix inverse_spd(const Matrix& a);

Vector forward_subst(const Matrix& l, const Vector& b);              // L x = b
Vector backward_subst_transposed(const Matrix& l, const Vector& b);  // Lᵀ x = b
Matrix forward_subst_matrix(const Matrix& l, const Matrix& b);       // L X = B

namespace detail {

// LU with partial pivoting on a row-major n×n buffer; destroys the buffer.
double det_in_place(std::span<double> a, std::size_t n);

void check_symmetric(const Matrix& a);

}  // namespace detail

}  // namespace expdet::linalg
