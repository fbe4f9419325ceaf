#include "qdiss/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qdiss/error.hpp"
#include "qdiss/transport.hpp"

namespace qdiss {

GaussianState::GaussianState(const MomentState& moments) : moments_(moments) {
  Eigen::LLT<Matrix> llt(moments_.covariance());
  if (llt.info() != Eigen::Success) throw ModelError("covariance is not positive definite");
}

double wigner_eval(const GaussianState& state, const Vector& z) {
  if (z.size() != state.mean().size()) throw ModelError("phase-space point has the wrong dimension");
  const Eigen::LLT<Matrix> llt(state.covariance());
  const Vector dz = z - state.mean();
  const Vector w = llt.matrixL().solve(dz);
  const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  const double n = static_cast<double>(state.n_modes());
  return std::exp(-n * std::log(2.0 * std::numbers::pi) - 0.5 * log_det - 0.5 * w.squaredNorm());
}

PositionMarginal::PositionMarginal(const GaussianState& state, std::vector<std::size_t> modes)
    : modes_(std::move(modes)) {
  if (modes_.empty()) throw ModelError("position marginal needs at least one mode");
  const auto n = static_cast<Eigen::Index>(modes_.size());
  mean_.resize(n);
  cov_.resize(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    const std::size_t k = modes_[static_cast<std::size_t>(a)];
    if (k >= state.n_modes()) throw ModelError("mode index out of range");
    mean_[a] = state.mean()[q_index(k)];
    for (Eigen::Index b = 0; b < n; ++b) {
      cov_(a, b) = state.covariance()(q_index(k), q_index(modes_[static_cast<std::size_t>(b)]));
    }
  }
  llt_.compute(cov_);
  if (llt_.info() != Eigen::Success) throw ModelError("coordinate covariance is not positive definite");
  const double log_det = 2.0 * llt_.matrixL().toDenseMatrix().diagonal().array().log().sum();
  log_norm_ = -0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi) - 0.5 * log_det;
}

double PositionMarginal::operator()(const Vector& q) const {
  if (q.size() != mean_.size()) throw ModelError("coordinate point has the wrong dimension");
  const Vector w = llt_.matrixL().solve(q - mean_);
  return std::exp(log_norm_ - 0.5 * w.squaredNorm());
}

std::vector<double> position_density(const GaussianState& state, const std::vector<std::size_t>& modes,
                                     const std::vector<Vector>& points) {
  const PositionMarginal marginal(state, modes);
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& q : points) out.push_back(marginal(q));
  return out;
}

double penetration_probability(const MomentState& state, std::size_t mode) {
  if (mode >= state.n_modes()) throw ModelError("mode index out of range");
  const double var = state.covariance()(q_index(mode), q_index(mode));
  if (!(var > 0.0)) throw ModelError("coordinate variance must be positive");
  const double mean = state.mean()[q_index(mode)];
  const double p = 0.5 * std::erfc(-mean / std::sqrt(2.0 * var));
  return p < 1e-300 ? 0.0 : p;
}

std::vector<double> uncertainty_products(const MomentState& state) {
  std::vector<double> out(state.n_modes());
  const Matrix& s = state.covariance();
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double qp = s(q_index(k), p_index(k));
    out[k] = s(q_index(k), q_index(k)) * s(p_index(k), p_index(k)) - qp * qp;
  }
  return out;
}

double correlation_coefficient(const MomentState& state, std::size_t i, std::size_t j) {
  if (i >= state.n_modes() || j >= state.n_modes()) throw ModelError("mode index out of range");
  const Matrix& s = state.covariance();
  const double vi = s(q_index(i), q_index(i));
  const double vj = s(q_index(j), q_index(j));
  if (!(vi > 0.0) || !(vj > 0.0)) throw ModelError("correlation needs positive variances");
  return s(q_index(i), q_index(j)) / std::sqrt(vi * vj);
}

double asymptotic_energy(const SystemParams& params, double temperature) {
  if (params.has_barrier()) throw ModelError("asymptotic energy is defined for oscillator modes only");
  if (!(temperature > 0.0)) throw ModelError("temperature must be positive");
  double e = 0.0;
  for (Eigen::Index k = 0; k < params.eq_frequency.size(); ++k) {
    const double w = params.eq_frequency[k];
    e += 0.5 * w * thermal_factor(w, temperature);
  }
  return e;
}

double mean_energy(const SystemParams& params, const MomentState& state) {
  if (state.n_modes() != params.n_modes()) throw ModelError("state does not match the number of modes");
  const Vector& v = state.mean();
  const Matrix& s = state.covariance();
  // Symmetrized second moment <(x_a x_b + x_b x_a)/2>.
  const auto second = [&](Eigen::Index a, Eigen::Index b) { return s(a, b) + v[a] * v[b]; };

  double e = 0.0;
  const std::size_t n = params.n_modes();
  for (std::size_t k = 0; k < n; ++k) {
    const auto ik = static_cast<Eigen::Index>(k);
    const double big_m = params.mass[ik];
    const double stiffness = big_m * params.frequency[ik] * params.frequency[ik];
    const Eigen::Index q = q_index(k);
    const Eigen::Index p = p_index(k);
    e += second(p, p) / (2.0 * big_m);
    e += (params.is_barrier(k) ? -0.5 : 0.5) * stiffness * second(q, q);
    e += params.mu(ik, ik) * second(p, q);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == k) continue;
      const auto ij = static_cast<Eigen::Index>(j);
      e += 0.5 * params.nu(ik, ij) * second(q, q_index(j));
      e += 0.5 * params.kappa(ik, ij) * second(p, p_index(j));
      e += params.mu(ik, ij) * second(p, q_index(j));
    }
  }
  return e;
}

}  // namespace qdiss
