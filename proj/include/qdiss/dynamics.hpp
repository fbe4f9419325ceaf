#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qdiss/linalg.hpp"
#include "qdiss/model.hpp"
#include "qdiss/transport.hpp"

namespace qdiss {

/// Drift of the first and second moments: dV/dt = M V and
/// d sigma/dt = M sigma + sigma M^T + 2D.
class DriftMatrix {
 public:
  explicit DriftMatrix(const Matrix& m);
  const Matrix& matrix() const { return m_; }
  std::size_t n_modes() const { return static_cast<std::size_t>(m_.rows() / 2); }

 private:
  Matrix m_;
};

/// Per-mode block (q_k, p_k):
///   [ -lambda_kk + mu_kk        1/M_k            ]
///   [ -/+ M_k Omega_k^2         -lambda_kk - mu_kk ]
/// with + for inverted-barrier modes, and for k != j
///   (q_k, q_j) = -lambda_kj + mu_kj    (q_k, p_j) = -alpha_kj + kappa_kj
///   (p_k, q_j) =  eta_kj - nu_kj       (p_k, p_j) = -lambda_jk - mu_jk
DriftMatrix drift_matrix(const SystemParams& params, const DissipationParams& d);

struct Spectrum {
  bool is_stable = false;
  double max_real_part = 0.0;
  std::vector<std::complex<double>> eigenvalues;
};

/// Stable iff the largest real part is below -1e-12 ||M||_1. Throws
/// NumericalError if the eigenvalue iteration does not converge.
Spectrum stability(const DriftMatrix& m);

/// Solves M s + s M^T + 2D = 0. Throws NumericalError for unstable M, a
/// singular system, or a residual above 1e-10 ||2D||.
Matrix steady_covariance(const DriftMatrix& m, const DiffusionMatrix& d);

Vector propagate_mean(const DriftMatrix& m, const Vector& mean0, double t);

/// Closed form e^{Mt} (s0 - s~) e^{M^T t} + s~ with s~ supplied by the caller.
Matrix propagate_covariance(const DriftMatrix& m, const Matrix& steady, const Matrix& sigma0, double t);
/// Same, computing s~ from D first.
Matrix propagate_covariance(const DriftMatrix& m, const DiffusionMatrix& d, const Matrix& sigma0, double t);

/// Mean vector and symmetric covariance in interleaved order.
class MomentState {
 public:
  /// Throws ModelError on shape mismatch, non-finite entries, asymmetry
  /// above 1e-10 (relative) or a per-mode 2x2 block that is not positive
  /// definite. The stored covariance is exactly symmetric.
  MomentState(Vector mean, const Matrix& covariance);

  const Vector& mean() const { return mean_; }
  const Matrix& covariance() const { return cov_; }
  std::size_t n_modes() const { return static_cast<std::size_t>(mean_.size() / 2); }

 private:
  Vector mean_;
  Matrix cov_;
};

/// Covariance of the target Gibbs state: diag(c/(2 m w), m w c/2) per mode.
Matrix gibbs_covariance(const SystemParams& params, double temperature);

struct TrajectoryOptions {
  bool zero_cross_mode_diffusion = false;
};

struct Trajectory {
  std::vector<double> times;  // internal units (1/MeV)
  std::vector<MomentState> states;
  std::uint64_t parameter_hash = 0;
  bool cross_mode_diffusion_zeroed = false;
  /// True when M was unstable and moments were integrated numerically.
  bool integrated = false;
};

/// Deterministic FNV-1a hash over every parameter bit pattern.
std::uint64_t parameter_hash(const SystemParams& params, const DissipationParams& d);

/// Evaluates the moments on a strictly increasing grid of times >= 0
/// (internal units). Stable systems use the closed forms; otherwise the
/// moment equations are integrated with RK4 from t = 0 using the step
/// min(1e-3 / ||M||_1, spacing / 10).
Trajectory trajectory(const SystemParams& params, const DissipationParams& d, const MomentState& initial,
                      const std::vector<double>& times, const TrajectoryOptions& options = {});

}  // namespace qdiss
