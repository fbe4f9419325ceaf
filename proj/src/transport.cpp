#include "qdiss/transport.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <sstream>

#include "qdiss/error.hpp"

namespace qdiss {

double coth(double x) {
  if (!(x > 0.0)) throw ModelError("coth argument must be positive");
  if (x < 1e-6) return 1.0 / x + x / 3.0;
  if (x > 350.0) return 1.0;
  return 1.0 + 2.0 / std::expm1(2.0 * x);
}

double thermal_factor(double omega, double temperature) {
  if (temperature <= DissipationParams::kZeroTemperature) return 1.0;
  return coth(omega / (2.0 * temperature));
}

DiffusionMatrix::DiffusionMatrix(const Matrix& d) {
  if (d.rows() != d.cols() || d.rows() % 2 != 0 || d.rows() == 0) {
    throw ModelError("diffusion matrix must be square with even, nonzero dimension");
  }
  if (!d.allFinite()) throw ModelError("diffusion matrix has non-finite entries");
  d_ = symmetrized(d);
  for (Eigen::Index i = 0; i < d_.rows(); ++i) {
    if (d_(i, i) < 0.0) {
      std::ostringstream os;
      os << "diffusion matrix diagonal entry " << i << " is negative (" << d_(i, i) << ")";
      throw ModelError(os.str());
    }
  }
}

namespace formulas {

ModeCoefficients mode_coefficients(double lambda, double mu, double mass, double frequency, double eq_mass,
                                   double eq_frequency, double c) {
  const double mw = eq_mass * eq_frequency;
  ModeCoefficients out;
  out.qq = 0.5 * (lambda - mu) / mw * c;
  out.pp = 0.5 * mw * (lambda + mu) * c;
  out.qp = 0.25 * (mass * frequency * frequency / mw - mw / mass) * c;
  return out;
}

PairCoefficients pair_coefficients(const PairInputs& in) {
  const double mwk = in.m_k * in.omega_k;
  const double mwj = in.m_j * in.omega_j;
  PairCoefficients out;
  out.qq = 0.25 * ((in.lambda_jk - in.mu_jk) * in.c_k / mwk + (in.lambda_kj - in.mu_kj) * in.c_j / mwj);
  out.pp = 0.25 * ((in.lambda_kj + in.mu_kj) * mwk * in.c_k + (in.lambda_jk + in.mu_jk) * mwj * in.c_j);
  out.qp = 0.25 * ((in.eta_kj + in.nu_kj) * in.c_k / mwk + (in.alpha_kj - in.kappa_kj) * mwj * in.c_j);
  return out;
}

}  // namespace formulas

namespace {

std::vector<double> thermal_factors(const SystemParams& params, double temperature) {
  std::vector<double> c(params.n_modes());
  for (std::size_t k = 0; k < c.size(); ++k) {
    c[k] = thermal_factor(params.eq_frequency[static_cast<Eigen::Index>(k)], temperature);
  }
  return c;
}

formulas::PairInputs pair_inputs(const SystemParams& p, const DissipationParams& d, const std::vector<double>& c,
                                 std::size_t kk, std::size_t jj) {
  const auto k = static_cast<Eigen::Index>(kk);
  const auto j = static_cast<Eigen::Index>(jj);
  formulas::PairInputs in;
  in.lambda_kj = d.lambda(k, j);
  in.lambda_jk = d.lambda(j, k);
  in.mu_kj = p.mu(k, j);
  in.mu_jk = p.mu(j, k);
  in.alpha_kj = d.alpha(k, j);
  in.eta_kj = d.eta(k, j);
  in.nu_kj = p.nu(k, j);
  in.kappa_kj = p.kappa(k, j);
  in.m_k = p.eq_mass[k];
  in.omega_k = p.eq_frequency[k];
  in.c_k = c[kk];
  in.m_j = p.eq_mass[j];
  in.omega_j = p.eq_frequency[j];
  in.c_j = c[jj];
  return in;
}

std::string pair_label(std::size_t k, std::size_t j) {
  return "[" + std::to_string(k + 1) + "," + std::to_string(j + 1) + "]";
}

}  // namespace

DiffusionMatrix diffusion_matrix(const SystemParams& params, const DissipationParams& d) {
  params.check_structure();
  const std::size_t n = params.n_modes();
  d.check_structure(n);
  const std::vector<double> c = thermal_factors(params, d.temperature);

  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(2 * n), static_cast<Eigen::Index>(2 * n));
  for (std::size_t k = 0; k < n; ++k) {
    const auto ik = static_cast<Eigen::Index>(k);
    const auto mode = formulas::mode_coefficients(d.lambda(ik, ik), params.mu(ik, ik), params.mass[ik],
                                                  params.frequency[ik], params.eq_mass[ik], params.eq_frequency[ik],
                                                  c[k]);
    out(q_index(k), q_index(k)) = mode.qq;
    out(p_index(k), p_index(k)) = mode.pp;
    out(q_index(k), p_index(k)) = mode.qp;
    out(p_index(k), q_index(k)) = mode.qp;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == k) continue;
      const auto pair = formulas::pair_coefficients(pair_inputs(params, d, c, k, j));
      out(q_index(k), q_index(j)) = pair.qq;
      out(p_index(k), p_index(j)) = pair.pp;
      out(q_index(k), p_index(j)) = pair.qp;
      out(p_index(j), q_index(k)) = pair.qp;
    }
  }
  return DiffusionMatrix(out);
}

DiffusionMatrix without_cross_mode_terms(const DiffusionMatrix& d) {
  Matrix out = d.matrix();
  const std::size_t n = d.n_modes();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      if (k != j) out.block<2, 2>(q_index(k), q_index(j)).setZero();
    }
  }
  return DiffusionMatrix(out);
}

ValidationReport fundamental_constraints(const DiffusionMatrix& D, const DissipationParams& d) {
  const std::size_t n = D.n_modes();
  d.check_structure(n);
  ValidationReport report;

  const auto inequality = [&report](const std::string& name, double a, double b, double cross, double rhs) {
    const double lhs = a * b - cross * cross;
    const double scale = std::max({std::abs(a * b), cross * cross, rhs});
    const double margin = lhs - rhs;
    std::ostringstream note;
    note << "margin " << margin;
    report.add({name, margin >= -1e-12 * scale, lhs, rhs, ">=", note.str()});
  };

  for (std::size_t k = 0; k < n; ++k) {
    const auto ik = static_cast<Eigen::Index>(k);
    for (std::size_t j = 0; j < n; ++j) {
      const auto ij = static_cast<Eigen::Index>(j);
      const std::string label = pair_label(k, j);
      inequality("constraint_qq_pp" + label, D.qq(k, k), D.pp(j, j), D.qp(k, j),
                 0.25 * d.lambda(ik, ij) * d.lambda(ik, ij));
      inequality("constraint_qq_qq" + label, D.qq(k, k), D.qq(j, j), D.qq(k, j),
                 0.25 * d.alpha(ik, ij) * d.alpha(ik, ij));
      inequality("constraint_pp_pp" + label, D.pp(k, k), D.pp(j, j), D.pp(k, j),
                 0.25 * d.eta(ik, ij) * d.eta(ik, ij));
    }
    const std::string label = "[" + std::to_string(k + 1) + "]";
    report.add({"alpha_diagonal_zero" + label, d.alpha(ik, ik) == 0.0, std::abs(d.alpha(ik, ik)), 0.0, "==", ""});
    report.add({"eta_diagonal_zero" + label, d.eta(ik, ik) == 0.0, std::abs(d.eta(ik, ik)), 0.0, "==", ""});
  }
  return report;
}

std::optional<double> EinsteinDeviations::max() const {
  std::optional<double> out;
  const auto take = [&out](const std::optional<double>& v) {
    if (v && (!out || *v > *out)) out = v;
  };
  for (const auto& v : mode) take(v);
  for (const auto& p : pairs) take(p.deviation);
  return out;
}

EinsteinDeviations einstein_deviation(const SystemParams& params, const DissipationParams& d) {
  const DiffusionMatrix D = diffusion_matrix(params, d);
  const std::size_t n = params.n_modes();
  const double t = d.temperature;
  const Vector& m = params.eq_mass;

  EinsteinDeviations out;
  for (std::size_t k = 0; k < n; ++k) {
    const auto ik = static_cast<Eigen::Index>(k);
    const double friction = d.lambda(ik, ik) + params.mu(ik, ik);
    if (friction == 0.0) {
      out.mode.emplace_back();
    } else {
      out.mode.emplace_back(std::abs(D.pp(k, k) / (friction * m[ik] * t) - 1.0));
    }
    for (std::size_t j = k + 1; j < n; ++j) {
      const auto ij = static_cast<Eigen::Index>(j);
      const double msum = m[ik] + m[ij];
      const double big_lambda =
          ((d.lambda(ik, ij) + params.mu(ik, ij)) * m[ik] + (d.lambda(ij, ik) + params.mu(ij, ik)) * m[ij]) / msum;
      EinsteinDeviations::Pair pair{k, j, std::nullopt};
      if (big_lambda != 0.0) pair.deviation = std::abs(D.pp(k, j) / (big_lambda * 0.5 * msum * t) - 1.0);
      out.pairs.push_back(pair);
    }
  }
  return out;
}

namespace {

using Real = long double;

void add_equation(ResidualReport& report, std::string name, std::initializer_list<Real> terms) {
  Real sum = 0.0L;
  Real scale = 0.0L;
  bool finite = true;
  for (Real t : terms) {
    if (!std::isfinite(t)) finite = false;
    sum += t;
    scale = std::max(scale, std::abs(t));
  }
  Residual r;
  r.name = std::move(name);
  r.max_term = static_cast<double>(scale);
  if (!finite || !std::isfinite(sum)) {
    report.evaluable = false;
    r.scaled = std::numeric_limits<double>::quiet_NaN();
  } else {
    r.scaled = scale > 0.0L ? static_cast<double>(std::abs(sum) / scale) : 0.0;
    report.max_scaled = std::max(report.max_scaled, r.scaled);
  }
  report.equations.push_back(std::move(r));
}

struct Hyperbolic {
  Real ch;       // cosh x
  Real sh;       // sinh x
  Real chm1;     // cosh x - 1
  Real sh_half;  // sinh(x / 2)
};

Hyperbolic hyperbolic(Real x) {
  const Real sh_half = std::sinh(x / 2.0L);
  return {std::cosh(x), std::sinh(x), 2.0L * sh_half * sh_half, sh_half};
}

}  // namespace

ResidualReport algebraic_residuals(const SystemParams& params, const DissipationParams& d, const DiffusionMatrix& D,
                                   double beta) {
  params.check_structure();
  const std::size_t n = params.n_modes();
  d.check_structure(n);
  if (D.n_modes() != n) throw ModelError("diffusion matrix does not match the number of modes");

  ResidualReport report;
  if (!std::isfinite(beta) || beta <= 0.0) {
    report.evaluable = false;
    return report;
  }

  std::vector<Hyperbolic> h(n);
  for (std::size_t k = 0; k < n; ++k) {
    h[k] = hyperbolic(static_cast<Real>(beta) * params.eq_frequency[static_cast<Eigen::Index>(k)]);
  }

  for (std::size_t k = 0; k < n; ++k) {
    const auto ik = static_cast<Eigen::Index>(k);
    const Real m = params.eq_mass[ik];
    const Real w = params.eq_frequency[ik];
    const Real big_m = params.mass[ik];
    const Real big_w = params.frequency[ik];
    const Real mw = m * w;
    const Real l = d.lambda(ik, ik);
    const Real u = params.mu(ik, ik);
    const Real dqq = D.qq(k, k);
    const Real dpp = D.pp(k, k);
    const Real dqp = D.qp(k, k);
    const auto [ch, sh, chm1, sh_half] = h[k];
    (void)sh_half;
    const Real ch2m1 = 2.0L * sh * sh;  // cosh 2x - 1
    const Real sh2 = 2.0L * sh * ch;    // sinh 2x
    const Real delta = 0.5L * (m / big_m - big_m * big_w * big_w / (m * w * w));
    const std::string label = "[" + std::to_string(k + 1) + "]";

    add_equation(report, "set1_a" + label,
                 {-0.5L * u * ch2m1, -dqq * mw * sh * ch, dpp / mw * sh * ch, -2.0L * dpp / mw * sh, l * (ch + 1.0L)});
    add_equation(report, "set1_b" + label,
                 {-u / (2.0L * mw) * sh2, -dqq * chm1 * chm1, -l / mw * sh, dpp / (mw * mw) * sh * sh});
    add_equation(report, "set1_c" + label,
                 {-0.5L * u * mw * sh2, dpp * chm1 * chm1, l * mw * sh, -dqq * mw * mw * sh * sh});
    add_equation(report, "set1_delta" + label, {-delta * ch2m1, -4.0L * dqp / w * chm1 * sh});
  }

  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      if (k == j) continue;
      const auto ik = static_cast<Eigen::Index>(k);
      const auto ij = static_cast<Eigen::Index>(j);
      const Real mkwk = static_cast<Real>(params.eq_mass[ik]) * params.eq_frequency[ik];
      const Real mjwj = static_cast<Real>(params.eq_mass[ij]) * params.eq_frequency[ij];
      const Real l_kj = d.lambda(ik, ij);
      const Real l_jk = d.lambda(ij, ik);
      const Real u_kj = params.mu(ik, ij);
      const Real u_jk = params.mu(ij, ik);
      const Real a_kj = d.alpha(ik, ij);
      const Real e_kj = d.eta(ik, ij);
      const Real v_kj = params.nu(ik, ij);
      const Real kap = params.kappa(ik, ij);
      const Real dqq = D.qq(k, j);
      const Real dpp = D.pp(k, j);
      const Real dqp_kj = D.qp(k, j);
      const Real dqp_jk = D.qp(j, k);
      const auto [chk, shk, chk1, shk_half] = h[k];
      const auto [chj, shj, chj1, shj_half] = h[j];
      const std::string label = "[" + std::to_string(k + 1) + "," + std::to_string(j + 1) + "]";

      add_equation(report, "set2_a" + label,
                   {2.0L * mjwj * mkwk * dqq * chk1 * chj1, mjwj * l_jk * shk, mjwj * u_jk * chj * shk,
                    l_kj * mkwk * shj, u_kj * mkwk * chk * shj, -2.0L * dpp * shk * shj});
      add_equation(report, "set2_b" + label,
                   {8.0L * dpp * shk_half * shk_half * shj_half * shj_half, mjwj * l_jk * shj,
                    -mjwj * u_jk * chk * shj, mkwk * l_kj * shk, -mkwk * u_kj * chj * shk,
                    -2.0L * mkwk * mjwj * dqq * shk * shj});
      add_equation(report, "set2_c" + label,
                   {2.0L * dpp / mkwk * chj1 * shk, -2.0L * mjwj * dqq * chk1 * shj, u_kj, -l_kj * chj, l_kj * chk,
                    -u_kj * chk * chj, -u_jk * mjwj * shj * shk / mkwk});

      add_equation(report, "set3_a" + label,
                   {-2.0L * dqp_kj * chk1 * chj1, -e_kj / mkwk * shk, v_kj * chj / mkwk * shk, -mjwj * a_kj * shj,
                    -mjwj * kap * chk * shj, -2.0L * (mjwj / mkwk) * dqp_jk * shk * shj});
      add_equation(report, "set3_b" + label,
                   {-2.0L * dqp_jk * chk1 * chj1, mkwk * a_kj * shk, -mkwk * kap * chj * shk, e_kj / mjwj * shj,
                    v_kj * chk / mjwj * shj, -2.0L * mkwk / mjwj * dqp_kj * shk * shj});
      add_equation(report, "set3_c" + label,
                   {v_kj, -e_kj * chj, -2.0L * mjwj * dqp_jk * shj, kap * mkwk * mjwj * shk * shj, e_kj * chk,
                    -v_kj * chk * chj, 2.0L * dqp_jk * mjwj * shj * chk, 2.0L * dqp_kj * mkwk * chj1 * shk});
    }
  }
  return report;
}

}  // namespace qdiss
