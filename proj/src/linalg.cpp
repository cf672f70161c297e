#include "expdet/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace expdet::linalg {

namespace {

constexpr double kPivotFloor = 1e-300;

void check_finite(std::span<const double> xs) {
  for (double x : xs)
    if (!std::isfinite(x)) throw DomainError("non-finite entry");
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {
  if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
  if (entries_.size() != rows * cols)
    throw DimensionError("entry count does not match matrix shape");
  check_finite(entries_);
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double x : entries_) m = std::max(m, std::fabs(x));
  return m;
}

void Vector::require_positive(std::size_t len) {
  if (len == 0) throw DimensionError("vector length must be positive");
}

Vector::Vector(std::vector<double> entries) : entries_(std::move(entries)) {
  require_positive(entries_.size());
  check_finite(entries_);
}

Vector Vector::constant(std::size_t len, double value) {
  Vector v(len);
  for (std::size_t i = 0; i < len; ++i) v[i] = value;
  return v;
}

double detail::det_in_place(std::span<double> a, std::size_t n) {
  double d = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = std::fabs(a[col * n + col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double v = std::fabs(a[r * n + col]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best < kPivotFloor) return 0.0;
    if (piv != col) {
      for (std::size_t j = col; j < n; ++j) std::swap(a[col * n + j], a[piv * n + j]);
      d = -d;
    }
    const double pivot = a[col * n + col];
    d *= pivot;
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / pivot;
      if (f == 0.0) continue;
      for (std::size_t j = col + 1; j < n; ++j) a[r * n + j] -= f * a[col * n + j];
    }
  }
  return d;
}

double det(const Matrix& m) {
  if (!m.is_square()) throw DimensionError("det requires a square matrix");
  std::vector<double> buf(m.entries().begin(), m.entries().end());
  return detail::det_in_place(buf, m.rows());
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matmul: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Vector matvec(const Matrix& a, const Vector& x) {
  if (a.cols() != x.size()) throw DimensionError("matvec: dimensions differ");
  Vector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

Vector matvec_transposed(const Matrix& a, const Vector& x) {
  if (a.rows() != x.size()) throw DimensionError("matvec_transposed: dimensions differ");
  Vector y(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    for (std::size_t j = 0; j < a.cols(); ++j) y[j] += a(i, j) * xi;
  }
  return y;
}

void detail::check_symmetric(const Matrix& a) {
  if (!a.is_square()) throw DimensionError("expected a square matrix");
  double dev = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      dev = std::max(dev, std::fabs(a(i, j) - a(j, i)));
  if (dev > 1e-10 * std::max(1e-300, a.max_abs()))
    throw DomainError("matrix is not symmetric within tolerance");
}

std::optional<Matrix> cholesky(const Matrix& a, int* fail_index) {
  const std::size_t n = a.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) {  // also rejects NaN
      if (fail_index) *fail_index = static_cast<int>(j);
      return std::nullopt;
    }
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

std::optional<double> log_det_spd(const Matrix& a) {
  const auto l = cholesky(a);
  if (!l) return std::nullopt;
  double s = 0.0;
  for (std::size_t j = 0; j < a.rows(); ++j) s += std::log((*l)(j, j));
  return 2.0 * s;
}

Vector forward_subst(const Matrix& l, const Vector& b) {
  const std::size_t n = l.rows();
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t j = 0; j < i; ++j) s -= l(i, j) * x[j];
    x[i] = s / l(i, i);
  }
  return x;
}

Vector backward_subst_transposed(const Matrix& l, const Vector& b) {
  const std::size_t n = l.rows();
  Vector x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= l(j, i) * x[j];
    x[i] = s / l(i, i);
  }
  return x;
}

Matrix forward_subst_matrix(const Matrix& l, const Matrix& b) {
  if (l.rows() != b.rows()) throw DimensionError("forward_subst_matrix: dimensions differ");
  const std::size_t n = l.rows();
  Matrix x(n, b.cols());
  for (std::size_t c = 0; c < b.cols(); ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = b(i, c);
      for (std::size_t j = 0; j < i; ++j) s -= l(i, j) * x(j, c);
      x(i, c) = s / l(i, i);
    }
  }
  return x;
}

Vector solve_spd(const Matrix& a, const Vector& b) {
  detail::check_symmetric(a);
  if (a.rows() != b.size()) throw DimensionError("solve_spd: dimensions differ");
  int fail = -1;
  const auto l = cholesky(a, &fail);
  if (!l) throw SingularityError("matrix is not positive definite at column " +
                                     std::to_string(fail),
                                 fail);
  return backward_subst_transposed(*l, forward_subst(*l, b));
}

Matrix inverse_spd(const Matrix& a) {
  detail::check_symmetric(a);
  const std::size_t n = a.rows();
  int fail = -1;
  const auto l = cholesky(a, &fail);
  if (!l) throw SingularityError("matrix is not positive definite at column " +
                                     std::to_string(fail),
                                 fail);
  Matrix inv = forward_subst_matrix(*l, Matrix::identity(n));
  // Finish with Lᵀ X = L⁻¹, then symmetrize away rounding skew.
  Matrix x(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t i = n; i-- > 0;) {
      double s = inv(i, c);
      for (std::size_t j = i + 1; j < n; ++j) s -= (*l)(j, i) * x(j, c);
      x(i, c) = s / (*l)(i, i);
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (x(i, j) + x(j, i));
      x(i, j) = v;
      x(j, i) = v;
    }
  return x;
}

}  // namespace expdet::linalg
