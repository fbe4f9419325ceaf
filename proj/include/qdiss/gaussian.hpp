#pragma once

#include <cstddef>
#include <vector>

#include "qdiss/dynamics.hpp"
#include "qdiss/linalg.hpp"
#include "qdiss/model.hpp"

namespace qdiss {

/// Moment state whose full covariance is positive definite.
class GaussianState {
 public:
  /// Throws ModelError when the Cholesky factorization of the covariance fails.
  explicit GaussianState(const MomentState& moments);

  const MomentState& moments() const { return moments_; }
  const Vector& mean() const { return moments_.mean(); }
  const Matrix& covariance() const { return moments_.covariance(); }
  std::size_t n_modes() const { return moments_.n_modes(); }

 private:
  MomentState moments_;
};

/// W(z) = (2 pi)^{-N} det(sigma)^{-1/2} exp(-(z - V)^T sigma^{-1} (z - V) / 2),
/// which integrates to one over the 2N-dimensional phase space.
double wigner_eval(const GaussianState& state, const Vector& z);

/// Gaussian marginal over the coordinates of the given modes.
class PositionMarginal {
 public:
  PositionMarginal(const GaussianState& state, std::vector<std::size_t> modes);

  const std::vector<std::size_t>& modes() const { return modes_; }
  const Vector& mean() const { return mean_; }
  const Matrix& covariance() const { return cov_; }

  /// Density at q (one coordinate per selected mode).
  double operator()(const Vector& q) const;

 private:
  std::vector<std::size_t> modes_;
  Vector mean_;
  Matrix cov_;
  Eigen::LLT<Matrix> llt_;
  double log_norm_ = 0.0;
};

/// Evaluates the coordinate marginal of the selected modes at every point.
std::vector<double> position_density(const GaussianState& state, const std::vector<std::size_t>& modes,
                                     const std::vector<Vector>& points);

/// Probability that q_k > 0: erfc(-<q_k> / sqrt(2 sigma_qkqk)) / 2, with
/// results below 1e-300 returned as 0.
double penetration_probability(const MomentState& state, std::size_t mode);

/// sigma_qq sigma_pp - sigma_qp^2 per mode.
std::vector<double> uncertainty_products(const MomentState& state);

/// sigma_{q_i q_j} / sqrt(sigma_{q_i q_i} sigma_{q_j q_j}).
double correlation_coefficient(const MomentState& state, std::size_t i, std::size_t j);

/// Sum over modes of (omega_k / 2) coth(omega_k / 2T). Throws ModelError if
/// any mode is an inverted barrier.
double asymptotic_energy(const SystemParams& params, double temperature);

/// <H> from the first and second moments, including every coupling term.
double mean_energy(const SystemParams& params, const MomentState& state);

}  // namespace qdiss
