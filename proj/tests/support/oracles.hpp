#pragma once

// Independent reference computations used only by the tests.

#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "qdiss/dynamics.hpp"
#include "qdiss/model.hpp"
#include "qdiss/transport.hpp"
#include "qdiss/units.hpp"

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline long double coth_ld(long double x) { return std::cosh(x) / std::sinh(x); }

inline Matrix expm(const Matrix& a) { return a.exp(); }

/// Full n^2 Kronecker vectorization of A X + X A^T + Q = 0.
inline Matrix lyapunov_kron(const Matrix& a, const Matrix& q) {
  const auto n = a.rows();
  const Matrix id = Matrix::Identity(n, n);
  Matrix big(n * n, n * n);
  // vec(A X) = (I kron A) vec X, vec(X A^T) = (A kron I) vec X
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      big.block(i * n, j * n, n, n) = id(i, j) * a + a(i, j) * id;
  const Vector rhs = -Eigen::Map<const Vector>(q.data(), n * n);
  const Vector x = big.fullPivLu().solve(rhs);
  return Eigen::Map<const Matrix>(x.data(), n, n);
}

struct Moments {
  Vector mean;
  Matrix cov;
};

/// Classical fixed-step RK4 on the flattened moment equations.
inline Moments rk4_moments(const Matrix& m, const Matrix& d, Moments s, double t_end, double h) {
  const auto n = m.rows();
  const auto flat = [n](const Moments& x) {
    Vector y(n + n * n);
    y.head(n) = x.mean;
    y.tail(n * n) = Eigen::Map<const Vector>(x.cov.data(), n * n);
    return y;
  };
  const auto rhs = [&](const Vector& y) {
    const Vector v = y.head(n);
    const Matrix c = Eigen::Map<const Matrix>(y.tail(n * n).data(), n, n);
    Vector out(n + n * n);
    out.head(n) = m * v;
    const Matrix dc = m * c + c * m.transpose() + 2.0 * d;
    out.tail(n * n) = Eigen::Map<const Vector>(dc.data(), n * n);
    return out;
  };
  Vector y = flat(s);
  const auto steps = static_cast<long long>(std::llround(t_end / h));
  const double step = t_end / static_cast<double>(steps);
  for (long long i = 0; i < steps; ++i) {
    const Vector k1 = rhs(y);
    const Vector k2 = rhs(y + 0.5 * step * k1);
    const Vector k3 = rhs(y + 0.5 * step * k2);
    const Vector k4 = rhs(y + step * k3);
    y += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  s.mean = y.head(n);
  s.cov = Eigen::Map<const Matrix>(y.tail(n * n).data(), n, n);
  return s;
}

/// Composite Simpson rule with an even number of intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int intervals) {
  if (intervals % 2) ++intervals;
  const double h = (b - a) / intervals;
  double s = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

inline double simpson2d(const std::function<double(double, double)>& f, double ax, double bx, double ay, double by,
                        int intervals) {
  return simpson([&](double x) { return simpson([&](double y) { return f(x, y); }, ay, by, intervals); }, ax, bx,
                 intervals);
}

/// Two asymmetry modes with M = m, Omega = omega: masses 461.6344 hbar^2/MeV,
/// hbar omega = 2.9468 and 2.9288 MeV, nu = -1869 MeV, hbar lambda = 2 MeV.
inline qdiss::SystemParams dns_system() {
  Vector mass(2), freq(2);
  mass << 461.6344, 461.6344;
  freq << 2.9468, 2.9288;
  auto p = qdiss::SystemParams::uncoupled(mass, freq);
  p.nu(0, 1) = p.nu(1, 0) = -1869.0;
  return p;
}

inline qdiss::DissipationParams dns_dissipation(double temperature) {
  Vector l(2);
  l << 2.0, 2.0;
  return qdiss::DissipationParams::diagonal_friction(l, temperature);
}

inline qdiss::MomentState dns_initial(const Vector& mean = Vector::Zero(4)) {
  Matrix s = Matrix::Zero(4, 4);
  s(0, 0) = 1e-4;
  s(1, 1) = 0.25 / 1e-4;
  s(2, 2) = 1e-3;
  s(3, 3) = 0.25 / 1e-3;
  return qdiss::MomentState(mean, s);
}

/// Two inverted-barrier modes: m = 2.5, 60 hbar^2/MeV, hbar omega = 1.7,
/// 0.6 MeV, nu = 7 MeV, T = 0.1 MeV.
inline qdiss::SystemParams barrier_system() {
  Vector mass(2), freq(2);
  mass << 2.5, 60.0;
  freq << 1.7, 0.6;
  auto p = qdiss::SystemParams::uncoupled(mass, freq);
  p.nu(0, 1) = p.nu(1, 0) = 7.0;
  p.mode_kind = {qdiss::ModeKind::inverted_barrier, qdiss::ModeKind::inverted_barrier};
  return p;
}

inline qdiss::DissipationParams barrier_dissipation(double lambda22) {
  Vector l(2);
  l << 2.5, lambda22;
  return qdiss::DissipationParams::diagonal_friction(l, 0.1);
}

inline qdiss::MomentState barrier_initial() {
  Vector mean(4);
  mean << -6.0, 9.0, 0.0, 0.0;
  Matrix s = Matrix::Zero(4, 4);
  s(0, 0) = 0.4;
  s(1, 1) = 0.25 / 0.4;
  s(2, 2) = 0.07;
  s(3, 3) = 0.25 / 0.07;
  return qdiss::MomentState(mean, s);
}

struct RandomCase {
  qdiss::SystemParams system;
  qdiss::DissipationParams dissipation;
};

/// Random coupled parameter set with every coupling type switched on. The
/// caller filters by validity.
inline RandomCase random_case(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto in = [&](double a, double b) { return a + (b - a) * u(rng); };
  const auto idx = static_cast<Eigen::Index>(n);
  RandomCase c;
  Vector mass(idx), freq(idx);
  for (Eigen::Index k = 0; k < idx; ++k) {
    mass[k] = in(0.5, 2.0);
    freq[k] = in(0.5, 2.0);
  }
  c.system = qdiss::SystemParams::uncoupled(mass, freq);
  for (Eigen::Index k = 0; k < idx; ++k) {
    c.system.mass[k] = c.system.eq_mass[k] * in(0.8, 1.25);
    c.system.frequency[k] = c.system.eq_frequency[k] * in(0.8, 1.25);
  }
  c.dissipation = qdiss::DissipationParams::diagonal_friction(Vector::Zero(idx), in(0.5, 3.0));
  for (Eigen::Index k = 0; k < idx; ++k) {
    c.dissipation.lambda(k, k) = in(0.5, 1.5);
    c.system.mu(k, k) = in(-0.1, 0.1);
    for (Eigen::Index j = k + 1; j < idx; ++j) {
      c.dissipation.lambda(k, j) = in(-0.1, 0.1);
      c.dissipation.lambda(j, k) = in(-0.1, 0.1);
      c.system.mu(k, j) = in(-0.05, 0.05);
      c.system.mu(j, k) = in(-0.05, 0.05);
      c.system.nu(k, j) = c.system.nu(j, k) = in(-0.2, 0.2);
      c.system.kappa(k, j) = c.system.kappa(j, k) = in(-0.2, 0.2);
      const double a = in(-0.02, 0.02);
      c.dissipation.alpha(k, j) = a;
      c.dissipation.alpha(j, k) = -a;
      const double e = in(-0.02, 0.02);
      c.dissipation.eta(k, j) = e;
      c.dissipation.eta(j, k) = -e;
    }
  }
  return c;
}

}  // namespace oracle
