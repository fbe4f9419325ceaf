#include "qdiss/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qdiss/error.hpp"

namespace qdiss {

DriftMatrix::DriftMatrix(const Matrix& m) : m_(m) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0 || m.rows() == 0) {
    throw ModelError("drift matrix must be square with even, nonzero dimension");
  }
  if (!m.allFinite()) throw ModelError("drift matrix has non-finite entries");
}

DriftMatrix drift_matrix(const SystemParams& params, const DissipationParams& d) {
  params.check_structure();
  const std::size_t n = params.n_modes();
  d.check_structure(n);
  const auto dim = static_cast<Eigen::Index>(2 * n);
  Matrix m = Matrix::Zero(dim, dim);
  for (std::size_t kk = 0; kk < n; ++kk) {
    const auto k = static_cast<Eigen::Index>(kk);
    const double stiffness = params.mass[k] * params.frequency[k] * params.frequency[k];
    m(q_index(kk), q_index(kk)) = -d.lambda(k, k) + params.mu(k, k);
    m(q_index(kk), p_index(kk)) = 1.0 / params.mass[k];
    m(p_index(kk), q_index(kk)) = params.is_barrier(kk) ? stiffness : -stiffness;
    m(p_index(kk), p_index(kk)) = -d.lambda(k, k) - params.mu(k, k);
    for (std::size_t jj = 0; jj < n; ++jj) {
      if (jj == kk) continue;
      const auto j = static_cast<Eigen::Index>(jj);
      m(q_index(kk), q_index(jj)) = -d.lambda(k, j) + params.mu(k, j);
      m(q_index(kk), p_index(jj)) = -d.alpha(k, j) + params.kappa(k, j);
      m(p_index(kk), q_index(jj)) = d.eta(k, j) - params.nu(k, j);
      m(p_index(kk), p_index(jj)) = -d.lambda(j, k) - params.mu(j, k);
    }
  }
  return DriftMatrix(m);
}

Spectrum stability(const DriftMatrix& m) {
  Eigen::EigenSolver<Matrix> solver(m.matrix(), false);
  if (solver.info() != Eigen::Success) throw NumericalError("eigenvalue iteration for the drift matrix failed");
  Spectrum out;
  const auto& ev = solver.eigenvalues();
  out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), [](const auto& a, const auto& b) {
    return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
  });
  out.max_real_part = out.eigenvalues.front().real();
  out.is_stable = out.max_real_part < -1e-12 * one_norm(m.matrix());
  return out;
}

Matrix steady_covariance(const DriftMatrix& m, const DiffusionMatrix& d) {
  if (d.matrix().rows() != m.matrix().rows()) throw ModelError("drift and diffusion dimensions differ");
  const Spectrum spectrum = stability(m);
  if (!spectrum.is_stable) {
    std::ostringstream os;
    os << "drift matrix is not stable (max real part " << spectrum.max_real_part << "); no steady covariance";
    throw NumericalError(os.str());
  }
  const Matrix two_d = 2.0 * d.matrix();
  const Matrix s = solve_symmetric_lyapunov(m.matrix(), two_d);
  const Matrix& a = m.matrix();
  const double residual = (a * s + s * a.transpose() + two_d).cwiseAbs().maxCoeff();
  const double scale = two_d.cwiseAbs().maxCoeff();
  if (residual > 1e-10 * scale) {
    std::ostringstream os;
    os << "Lyapunov residual " << residual << " exceeds 1e-10 * ||2D|| = " << 1e-10 * scale;
    throw NumericalError(os.str());
  }
  return s;
}

Vector propagate_mean(const DriftMatrix& m, const Vector& mean0, double t) {
  if (mean0.size() != m.matrix().rows()) throw ModelError("mean vector does not match the drift matrix");
  if (t == 0.0) return mean0;
  return expm(m.matrix() * t) * mean0;
}

namespace {

Matrix checked_symmetric(const Matrix& s) {
  const double asym = relative_asymmetry(s);
  if (asym > 1e-10) {
    std::ostringstream os;
    os << "covariance lost symmetry (relative asymmetry " << asym << ")";
    throw NumericalError(os.str());
  }
  return symmetrized(s);
}

}  // namespace

Matrix propagate_covariance(const DriftMatrix& m, const Matrix& steady, const Matrix& sigma0, double t) {
  const auto dim = m.matrix().rows();
  if (steady.rows() != dim || steady.cols() != dim || sigma0.rows() != dim || sigma0.cols() != dim) {
    throw ModelError("covariance dimensions do not match the drift matrix");
  }
  if (t == 0.0) return sigma0;
  const Matrix e = expm(m.matrix() * t);
  return checked_symmetric(e * (sigma0 - steady) * e.transpose() + steady);
}

Matrix propagate_covariance(const DriftMatrix& m, const DiffusionMatrix& d, const Matrix& sigma0, double t) {
  return propagate_covariance(m, steady_covariance(m, d), sigma0, t);
}

MomentState::MomentState(Vector mean, const Matrix& covariance) : mean_(std::move(mean)) {
  const auto dim = mean_.size();
  if (dim == 0 || dim % 2 != 0) throw ModelError("moment state needs a mean vector of even, nonzero length");
  if (covariance.rows() != dim || covariance.cols() != dim) throw ModelError("covariance does not match the mean");
  if (!mean_.allFinite() || !covariance.allFinite()) throw ModelError("moment state has non-finite entries");
  if (relative_asymmetry(covariance) > 1e-10) throw ModelError("covariance is not symmetric");
  cov_ = symmetrized(covariance);
  for (std::size_t k = 0; k < n_modes(); ++k) {
    const double qq = cov_(q_index(k), q_index(k));
    const double pp = cov_(p_index(k), p_index(k));
    const double qp = cov_(q_index(k), p_index(k));
    if (!(qq > 0.0) || !(qq * pp - qp * qp > 0.0)) {
      std::ostringstream os;
      os << "covariance block of mode " << k + 1 << " is not positive definite";
      throw ModelError(os.str());
    }
  }
}

Matrix gibbs_covariance(const SystemParams& params, double temperature) {
  const std::size_t n = params.n_modes();
  Matrix s = Matrix::Zero(static_cast<Eigen::Index>(2 * n), static_cast<Eigen::Index>(2 * n));
  for (std::size_t k = 0; k < n; ++k) {
    const auto ik = static_cast<Eigen::Index>(k);
    const double mw = params.eq_mass[ik] * params.eq_frequency[ik];
    const double c = thermal_factor(params.eq_frequency[ik], temperature);
    s(q_index(k), q_index(k)) = 0.5 * c / mw;
    s(p_index(k), p_index(k)) = 0.5 * mw * c;
  }
  return s;
}

namespace {

class Fnv1a {
 public:
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= p[i];
      h_ *= 1099511628211ULL;
    }
  }
  void value(double x) {
    if (x == 0.0) x = 0.0;  // fold -0 into +0
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    bytes(&bits, sizeof bits);
  }
  void values(const Eigen::Ref<const Matrix>& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) value(m(i, j));
  }
  std::uint64_t get() const { return h_; }

 private:
  std::uint64_t h_ = 14695981039346656037ULL;
};

// Joint RK4 integration of the first and second moments.
class MomentIntegrator {
 public:
  MomentIntegrator(const Matrix& m, const Matrix& d) : m_(m), two_d_(2.0 * d) {}

  void advance(Vector& mean, Matrix& cov, double duration, double max_step) const {
    if (duration <= 0.0) return;
    const auto steps = static_cast<long long>(std::ceil(duration / max_step));
    const double h = duration / static_cast<double>(steps);
    for (long long s = 0; s < steps; ++s) {
      const Vector k1 = m_ * mean;
      const Vector k2 = m_ * (mean + 0.5 * h * k1);
      const Vector k3 = m_ * (mean + 0.5 * h * k2);
      const Vector k4 = m_ * (mean + h * k3);
      mean += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

      const Matrix c1 = rate(cov);
      const Matrix c2 = rate(cov + 0.5 * h * c1);
      const Matrix c3 = rate(cov + 0.5 * h * c2);
      const Matrix c4 = rate(cov + h * c3);
      cov += h / 6.0 * (c1 + 2.0 * c2 + 2.0 * c3 + c4);
    }
    if (!mean.allFinite() || !cov.allFinite()) throw NumericalError("moment integration overflowed");
    cov = checked_symmetric(cov);
  }

 private:
  Matrix rate(const Matrix& s) const { return m_ * s + s * m_.transpose() + two_d_; }

  Matrix m_;
  Matrix two_d_;
};

}  // namespace

std::uint64_t parameter_hash(const SystemParams& params, const DissipationParams& d) {
  Fnv1a h;
  const std::uint64_t n = params.n_modes();
  h.bytes(&n, sizeof n);
  h.values(params.mass);
  h.values(params.frequency);
  h.values(params.eq_mass);
  h.values(params.eq_frequency);
  h.values(params.mu);
  h.values(params.nu);
  h.values(params.kappa);
  for (ModeKind kind : params.mode_kind) {
    const unsigned char b = kind == ModeKind::inverted_barrier ? 1 : 0;
    h.bytes(&b, 1);
  }
  h.values(d.lambda);
  h.values(d.alpha);
  h.values(d.eta);
  h.value(d.temperature);
  return h.get();
}

Trajectory trajectory(const SystemParams& params, const DissipationParams& d, const MomentState& initial,
                      const std::vector<double>& times, const TrajectoryOptions& options) {
  if (initial.n_modes() != params.n_modes()) throw ModelError("initial state does not match the number of modes");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || times[i] < 0.0) throw ModelError("time grid must be finite and non-negative");
    if (i > 0 && !(times[i] > times[i - 1])) throw ModelError("time grid must be strictly increasing");
  }

  Trajectory out;
  out.parameter_hash = parameter_hash(params, d);
  out.cross_mode_diffusion_zeroed = options.zero_cross_mode_diffusion;
  if (times.empty()) return out;

  const DriftMatrix m = drift_matrix(params, d);
  DiffusionMatrix diff = diffusion_matrix(params, d);
  if (options.zero_cross_mode_diffusion) diff = without_cross_mode_terms(diff);

  out.times = times;
  out.states.reserve(times.size());
  const Spectrum spectrum = stability(m);
  if (spectrum.is_stable) {
    const Matrix steady = steady_covariance(m, diff);
    for (double t : times) {
      out.states.emplace_back(propagate_mean(m, initial.mean(), t),
                              propagate_covariance(m, steady, initial.covariance(), t));
    }
    return out;
  }

  out.integrated = true;
  const MomentIntegrator integrator(m.matrix(), diff.matrix());
  const double norm_step = 1e-3 / std::max(one_norm(m.matrix()), 1e-300);
  Vector mean = initial.mean();
  Matrix cov = initial.covariance();
  double now = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double spacing = i > 0 ? times[i] - times[i - 1] : times[i];
    const double step = spacing > 0.0 ? std::min(norm_step, spacing / 10.0) : norm_step;
    integrator.advance(mean, cov, times[i] - now, step);
    now = times[i];
    out.states.emplace_back(mean, cov);
  }
  return out;
}

}  // namespace qdiss
