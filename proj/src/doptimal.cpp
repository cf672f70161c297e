#include "expdet/doptimal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace expdet::doptimal {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_survival(const Vector& p, std::size_t m) {
  if (p.size() != m) throw DimensionError("probability vector must have one entry per sensor");
  for (double x : p)
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("probability outside [0, 1]");
}

// M(p) = Σ_i p_i h̄_i h̄_iᵀ over the rows of H̄, stored exactly symmetric.
Matrix information_at(const Matrix& hbar, const Vector& p) {
  const std::size_t m = hbar.rows();
  const std::size_t n = hbar.cols();
  Matrix mat(n, n);
  for (std::size_t i = 0; i < m; ++i) {
    const double pi = p[i];
    if (pi == 0.0) continue;
    for (std::size_t a = 0; a < n; ++a) {
      const double ha = pi * hbar(i, a);
      if (ha == 0.0) continue;
      for (std::size_t b = a; b < n; ++b) mat(a, b) += ha * hbar(i, b);
    }
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) mat(b, a) = mat(a, b);
  return mat;
}

}  // namespace

void LinearSensorModel::validate() const {
  if (h_.rows() < h_.cols())
    throw DimensionError("observation matrix needs at least n rows (m >= n)");
  if (survival_.size() != h_.rows())
    throw DimensionError("survival vector must have one entry per sensor");
  for (double x : survival_)
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("survival probability outside [0, 1]");
}

LinearSensorModel::LinearSensorModel(Matrix h, Vector noise_variances, Vector survival)
    : h_(std::move(h)),
      whitened_(h_.rows(), h_.cols()),
      noise_diag_(std::move(noise_variances)),
      survival_(std::move(survival)) {
  validate();
  if (noise_diag_->size() != h_.rows())
    throw DimensionError("noise variance vector must have one entry per sensor");
  for (double v : *noise_diag_)
    if (!(v > 0.0)) throw DomainError("noise variances must be positive");
  for (std::size_t i = 0; i < h_.rows(); ++i) {
    const double s = 1.0 / std::sqrt((*noise_diag_)[i]);
    for (std::size_t j = 0; j < h_.cols(); ++j) whitened_(i, j) = s * h_(i, j);
  }
}

LinearSensorModel::LinearSensorModel(Matrix h, Matrix noise_covariance, Vector survival)
    : h_(std::move(h)), whitened_(h_.rows(), h_.cols()), survival_(std::move(survival)) {
  validate();
  if (noise_covariance.rows() != h_.rows() || noise_covariance.cols() != h_.rows())
    throw DimensionError("noise covariance must be m×m");
  linalg::detail::check_symmetric(noise_covariance);
  auto l = linalg::cholesky(noise_covariance);
  if (!l) throw DomainError("noise covariance is not positive definite");
  chol_noise_ = std::move(*l);
  whitened_ = linalg::forward_subst_matrix(*chol_noise_, h_);
}

Vector LinearSensorModel::whiten(const Vector& z) const {
  if (z.size() != sensors()) throw DimensionError("observation vector must have length m");
  if (noise_diag_) {
    Vector out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i] / std::sqrt((*noise_diag_)[i]);
    return out;
  }
  return linalg::forward_subst(*chol_noise_, z);
}

Matrix fisher_information(const LinearSensorModel& model) {
  return information_at(model.whitened(), Vector::constant(model.sensors(), 1.0));
}

Vector mle_estimate(const LinearSensorModel& model, const Vector& z) {
  const Vector zbar = model.whiten(z);
  const Vector rhs = linalg::matvec_transposed(model.whitened(), zbar);
  try {
    return linalg::solve_spd(fisher_information(model), rhs);
  } catch (const SingularityError& e) {
    throw SingularityError("model is not identifiable: " + std::string(e.what()),
                           e.pivot_index);
  }
}

Matrix crlb_covariance(const LinearSensorModel& model) {
  try {
    return linalg::inverse_spd(fisher_information(model));
  } catch (const SingularityError& e) {
    throw SingularityError("model is not identifiable: " + std::string(e.what()),
                           e.pivot_index);
  }
}

double expected_doptimality(const LinearSensorModel& model, const Vector& p) {
  check_survival(p, model.sensors());
  const Matrix ht = model.whitened().transposed();  // columns are the h̄_i
  return expected_det_closed_form(RankOneEnsemble(ht, ht, p));
}

double log_expected_doptimality(const LinearSensorModel& model, const Vector& p) {
  const auto ld = linalg::log_det_spd(information_at(model.whitened(), p));
  return ld ? *ld : kNegInf;
}

Vector doptimality_gradient(const LinearSensorModel& model, const Vector& p) {
  const Matrix& hbar = model.whitened();
  const std::size_t m = hbar.rows();
  const std::size_t n = hbar.cols();
  const auto l = linalg::cholesky(information_at(hbar, p));
  if (!l) throw SingularityError("information matrix is not positive definite", -1);
  Vector g(m);
  Vector hi(n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) hi[j] = hbar(i, j);
    const Vector x = linalg::backward_subst_transposed(*l, linalg::forward_subst(*l, hi));
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += hi[j] * x[j];
    g[i] = s;
  }
  return g;
}

Vector project_box_simplex(const Vector& y, double k) {
  const std::size_t m = y.size();
  if (k >= static_cast<double>(m)) return Vector::constant(m, 1.0);
  if (k <= 0.0) return Vector::constant(m, 0.0);
  double lo = *std::min_element(y.begin(), y.end()) - 1.0;
  double hi = *std::max_element(y.begin(), y.end());
  // Σ clamp(y - λ, 0, 1) is continuous and non-increasing in λ; 100 bisection
  // steps pin λ far below the 1e-8 feasibility tolerance.
  for (int iter = 0; iter < 100; ++iter) {
    const double mid = 0.5 * (lo + hi);
    double s = 0.0;
    for (double yi : y) s += std::clamp(yi - mid, 0.0, 1.0);
    if (s > k)
      lo = mid;
    else
      hi = mid;
  }
  const double lambda = 0.5 * (lo + hi);
  Vector p(m);
  for (std::size_t i = 0; i < m; ++i) p[i] = std::clamp(y[i] - lambda, 0.0, 1.0);
  return p;
}

SelectionResult select_sensors(const LinearSensorModel& model, unsigned k,
                               const SolverOptions& opts) {
  const std::size_t m = model.sensors();
  const std::size_t n = model.states();
  if (k < n || k > m)
    throw DomainError("selection size k must satisfy n <= k <= m (k=" + std::to_string(k) +
                      ", n=" + std::to_string(n) + ", m=" + std::to_string(m) + ")");

  SelectionResult result{Vector::constant(m, static_cast<double>(k) / static_cast<double>(m)),
                         {},
                         {},
                         false};
  Vector& p = result.probs;
  double f = log_expected_doptimality(model, p);
  if (!std::isfinite(f))
    throw SingularityError(
        "information matrix singular at the feasible start; no k-subset can be informative",
        -1);
  result.objective_trace.emplace_back(0u, f);

  const double kd = static_cast<double>(k);
  for (unsigned iter = 1; iter <= opts.max_iters; ++iter) {
    const Vector g = doptimality_gradient(model, p);

    Vector probe(m);
    for (std::size_t i = 0; i < m; ++i) probe[i] = p[i] + g[i];
    const Vector mapped = project_box_simplex(probe, kd);
    double pg_norm_sq = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double d = mapped[i] - p[i];
      pg_norm_sq += d * d;
    }
    if (std::sqrt(pg_norm_sq) <= opts.tol) {
      result.converged = true;
      break;
    }

    double step = opts.step;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving) {
      Vector cand(m);
      for (std::size_t i = 0; i < m; ++i) cand[i] = p[i] + step * g[i];
      cand = project_box_simplex(cand, kd);
      const double fc = log_expected_doptimality(model, cand);
      if (fc > f) {
        p = cand;
        f = fc;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    result.objective_trace.emplace_back(iter, f);
    if (!accepted) {
      // No ascent at step·2⁻⁶⁰: numerically stationary.
      result.converged = true;
      break;
    }
  }

  for (std::size_t i = 0; i < m; ++i) p[i] = std::clamp(p[i], 0.0, 1.0);

  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return p[a] > p[b]; });
  result.selected.assign(order.begin(), order.begin() + k);
  std::sort(result.selected.begin(), result.selected.end());
  return result;
}

}  // namespace expdet::doptimal
