#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "expdet/expdet.hpp"
#include "expdet/linalg.hpp"

namespace expdet::doptimal {

using linalg::Matrix;
using linalg::Vector;

/// Linear observation model z = Hx + ε with ε ~ N(0, Σ) and per-sensor
/// survival probabilities. The whitened matrix H̄ = Σ^(-1/2) H is
/// materialized once at construction; with a full covariance the whitening
/// uses Σ = LLᵀ and H̄ = L⁻¹H.
class LinearSensorModel {
 public:
  LinearSensorModel(Matrix h, Vector noise_variances, Vector survival);
  LinearSensorModel(Matrix h, Matrix noise_covariance, Vector survival);

  std::size_t sensors() const { return h_.rows(); }  // m
  std::size_t states() const { return h_.cols(); }   // n

  const Matrix& observation() const { return h_; }
  const Matrix& whitened() const { return whitened_; }
  const Vector& survival() const { return survival_; }

  Vector whiten(const Vector& z) const;  // Σ^(-1/2) z

 private:
  void validate() const;

  Matrix h_;
  Matrix whitened_;
  std::optional<Vector> noise_diag_;
  std::optional<Matrix> chol_noise_;  // L with Σ = LLᵀ
  Vector survival_;
};

/// Fisher information matrix H̄ᵀH̄ (n×n, symmetric PSD).
Matrix fisher_information(const LinearSensorModel& model);

/// Generalized least-squares estimate solving (H̄ᵀH̄) x = H̄ᵀ z̄ with
/// whitened z̄. Throws SingularityError when the model is not identifiable.
Vector mle_estimate(const LinearSensorModel& model, const Vector& z);

/// Estimator covariance (H̄ᵀH̄)⁻¹.
Matrix crlb_covariance(const LinearSensorModel& model);

/// Expected D-optimality under independent sensor survival:
/// det(Σ_i p_i h̄_i h̄_iᵀ), evaluated through the rank-one closed form with
/// U = V = H̄ᵀ.
double expected_doptimality(const LinearSensorModel& model, const Vector& p);

/// log det(Σ_i p_i h̄_i h̄_iᵀ); -inf when the matrix is not positive
/// definite (sentinel, not an error, so line searches can reject the step).
double log_expected_doptimality(const LinearSensorModel& model, const Vector& p);

/// Gradient of the log objective: g_i = h̄_iᵀ M(p)⁻¹ h̄_i.
Vector doptimality_gradient(const LinearSensorModel& model, const Vector& p);

/// Euclidean projection onto the box-capped simplex
/// {0 <= p <= 1, Σ p = k}, by bisection on the shift (water-filling).
Vector project_box_simplex(const Vector& y, double k);

struct SolverOptions {
  unsigned max_iters = 5000;
  double step = 1.0;   // initial line-search step, halved until ascent
  double tol = 1e-12;  // stop when ‖project(p + g) - p‖₂ <= tol
};

struct SelectionResult {
  Vector probs;                                              // relaxed optimum
  std::vector<int> selected;                                 // k chosen sensors
  std::vector<std::pair<unsigned, double>> objective_trace;  // (iteration, log det)
  bool converged = false;
};

/// Maximizes log det(Σ p_i h̄_i h̄_iᵀ) over the box-capped simplex by
/// projected gradient ascent with backtracking, starting from p = (k/m)·1.
/// Rounding picks the k largest probabilities, ties broken by lower index.
SelectionResult select_sensors(const LinearSensorModel& model, unsigned k,
                               const SolverOptions& opts = {});

}  // namespace expdet::doptimal
