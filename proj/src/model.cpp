#include "qdiss/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "qdiss/error.hpp"

namespace qdiss {
namespace {

std::string pair_label(std::size_t k, std::size_t j) {
  return "[" + std::to_string(k + 1) + "," + std::to_string(j + 1) + "]";
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

void require_shape(const Matrix& m, std::size_t n, const char* what) {
  if (static_cast<std::size_t>(m.rows()) != n || static_cast<std::size_t>(m.cols()) != n) {
    std::ostringstream os;
    os << what << " must be " << n << "x" << n << ", got " << m.rows() << "x" << m.cols();
    throw ModelError(os.str());
  }
  if (!all_finite(m)) throw ModelError(std::string(what) + " has non-finite entries");
}

void require_length(const Vector& v, std::size_t n, const char* what) {
  if (static_cast<std::size_t>(v.size()) != n) {
    std::ostringstream os;
    os << what << " must have " << n << " entries, got " << v.size();
    throw ModelError(os.str());
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || v[i] <= 0.0) {
      std::ostringstream os;
      os << what << "[" << i + 1 << "] must be finite and strictly positive, got " << v[i];
      throw ModelError(os.str());
    }
  }
}

void require_symmetric_zero_diagonal(const Matrix& m, const char* what) {
  const auto n = m.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    if (m(k, k) != 0.0) throw ModelError(std::string(what) + " must have a zero diagonal");
    for (Eigen::Index j = k + 1; j < n; ++j) {
      if (m(k, j) != m(j, k)) {
        std::ostringstream os;
        os << what << " must be symmetric: entry (" << k + 1 << "," << j + 1 << ")=" << m(k, j) << " vs ("
           << j + 1 << "," << k + 1 << ")=" << m(j, k);
        throw ModelError(os.str());
      }
    }
  }
}

// Smallest eigenvalue against the relative positivity tolerance.
Check positive_definite_check(const std::string& name, const Matrix& form) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(form, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigenvalue computation failed for " + name);
  const double smallest = solver.eigenvalues().minCoeff();
  const double scale = solver.eigenvalues().cwiseAbs().maxCoeff();
  const double tol = 1e-12 * scale;
  return Check{name, smallest > tol, smallest, tol, ">", "smallest eigenvalue"};
}

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({std::abs(a), std::abs(b), 1e-300});
}

void add_three_mode_checks(const SystemParams& p, ValidationReport& report) {
  // One mode a distinct, the other two (b, c) identical with equal couplings to a.
  for (std::size_t a = 0; a < 3; ++a) {
    const std::size_t b = (a + 1) % 3;
    const std::size_t c = (a + 2) % 3;
    const auto ia = static_cast<Eigen::Index>(a);
    const auto ib = static_cast<Eigen::Index>(b);
    const auto ic = static_cast<Eigen::Index>(c);
    if (!nearly_equal(p.mass[ib], p.mass[ic]) || !nearly_equal(p.frequency[ib], p.frequency[ic]) ||
        !nearly_equal(p.kappa(ia, ib), p.kappa(ia, ic)) || !nearly_equal(p.nu(ia, ib), p.nu(ia, ic))) {
      continue;
    }
    const std::string modes = "distinct mode " + std::to_string(a + 1) + ", paired modes " +
                               std::to_string(std::min(b, c) + 1) + "," + std::to_string(std::max(b, c) + 1);
    const double mb = p.mass[ib];
    const double ma = p.mass[ia];
    const double k_pair = p.kappa(ib, ic);
    const double k_cross = p.kappa(ia, ib);
    report.add({"closed_form_3mode_kappa_pair", std::abs(k_pair) < 1.0 / mb, std::abs(k_pair), 1.0 / mb, "<", modes});
    const double kb = (1.0 + mb * k_pair) / (2.0 * ma * mb);
    const double kbound = kb > 0.0 ? std::sqrt(kb) : 0.0;
    report.add({"closed_form_3mode_kappa_cross", std::abs(k_cross) < kbound, std::abs(k_cross), kbound, "<", modes});
    if (!p.is_barrier(0) && !p.is_barrier(1) && !p.is_barrier(2)) {
      const double stiff_b = mb * p.frequency[ib] * p.frequency[ib];
      const double stiff_a = ma * p.frequency[ia] * p.frequency[ia];
      const double n_pair = p.nu(ib, ic);
      const double n_cross = p.nu(ia, ib);
      report.add({"closed_form_3mode_nu_pair", std::abs(n_pair) < stiff_b, std::abs(n_pair), stiff_b, "<", modes});
      const double nb = 0.5 * stiff_a * (n_pair + stiff_b);
      const double nbound = nb > 0.0 ? std::sqrt(nb) : 0.0;
      report.add({"closed_form_3mode_nu_cross", std::abs(n_cross) < nbound, std::abs(n_cross), nbound, "<", modes});
    }
    return;
  }
}

}  // namespace

ModeKind parse_mode_kind(std::string_view name) {
  if (name == "oscillator") return ModeKind::oscillator;
  if (name == "inverted_barrier" || name == "barrier") return ModeKind::inverted_barrier;
  throw ModelError("unknown mode kind '" + std::string(name) + "'");
}

std::string_view mode_kind_name(ModeKind kind) {
  return kind == ModeKind::oscillator ? "oscillator" : "inverted_barrier";
}

SystemParams SystemParams::uncoupled(const Vector& mass, const Vector& frequency) {
  const auto n = mass.size();
  SystemParams p;
  p.mass = mass;
  p.frequency = frequency;
  p.eq_mass = mass;
  p.eq_frequency = frequency;
  p.mu = Matrix::Zero(n, n);
  p.nu = Matrix::Zero(n, n);
  p.kappa = Matrix::Zero(n, n);
  p.mode_kind.assign(static_cast<std::size_t>(n), ModeKind::oscillator);
  return p;
}

bool SystemParams::has_barrier() const {
  return std::any_of(mode_kind.begin(), mode_kind.end(), [](ModeKind k) { return k == ModeKind::inverted_barrier; });
}

void SystemParams::check_structure() const {
  const std::size_t n = n_modes();
  if (n == 0) throw ModelError("at least one mode is required");
  require_length(mass, n, "mass");
  require_length(frequency, n, "frequency");
  require_length(eq_mass, n, "eq_mass");
  require_length(eq_frequency, n, "eq_frequency");
  require_shape(mu, n, "mu");
  require_shape(nu, n, "nu");
  require_shape(kappa, n, "kappa");
  require_symmetric_zero_diagonal(nu, "nu");
  require_symmetric_zero_diagonal(kappa, "kappa");
  if (mode_kind.size() != n) throw ModelError("mode_kind must have one entry per mode");
}

DissipationParams DissipationParams::diagonal_friction(const Vector& lambda_kk, double temperature) {
  const auto n = lambda_kk.size();
  DissipationParams d;
  d.lambda = lambda_kk.asDiagonal();
  d.alpha = Matrix::Zero(n, n);
  d.eta = Matrix::Zero(n, n);
  d.temperature = temperature;
  return d;
}

void DissipationParams::check_structure(std::size_t n_modes) const {
  require_shape(lambda, n_modes, "lambda");
  require_shape(alpha, n_modes, "alpha");
  require_shape(eta, n_modes, "eta");
  if (!std::isfinite(temperature) || temperature <= 0.0) {
    throw ModelError("temperature must be strictly positive, got " + std::to_string(temperature));
  }
}

Matrix kinetic_form(const SystemParams& params) {
  Matrix k = params.kappa;
  for (std::size_t i = 0; i < params.n_modes(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    k(ii, ii) = 1.0 / params.mass[ii];
  }
  return k;
}

Matrix potential_form(const SystemParams& params, const std::vector<std::size_t>& modes) {
  const auto n = static_cast<Eigen::Index>(modes.size());
  Matrix v(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    const auto k = static_cast<Eigen::Index>(modes[static_cast<std::size_t>(a)]);
    for (Eigen::Index b = 0; b < n; ++b) {
      const auto j = static_cast<Eigen::Index>(modes[static_cast<std::size_t>(b)]);
      v(a, b) = (k == j) ? params.mass[k] * params.frequency[k] * params.frequency[k] : params.nu(k, j);
    }
  }
  return v;
}

ValidationReport validate_hamiltonian(const SystemParams& params) {
  params.check_structure();
  ValidationReport report;
  const std::size_t n = params.n_modes();

  report.add(positive_definite_check("kinetic_form_positive_definite", kinetic_form(params)));

  std::vector<std::size_t> oscillators;
  for (std::size_t k = 0; k < n; ++k) {
    if (!params.is_barrier(k)) oscillators.push_back(k);
  }
  if (oscillators.size() < n) {
    report.add_note("potential positivity restricted to oscillator modes; " +
                    std::to_string(n - oscillators.size()) + " inverted-barrier mode(s) excluded");
  }
  if (!oscillators.empty()) {
    report.add(positive_definite_check("potential_form_positive_definite", potential_form(params, oscillators)));
  }

  if (n == 2) {
    const double m1 = params.mass[0];
    const double m2 = params.mass[1];
    const double kb = 1.0 / std::sqrt(m1 * m2);
    const double k12 = std::abs(params.kappa(0, 1));
    report.add({"closed_form_2mode_kappa", k12 < kb, k12, kb, "<", "|kappa_12| < 1/sqrt(M_1 M_2)"});
    if (oscillators.size() == 2) {
      const double nb = std::sqrt(m1 * m2) * params.frequency[0] * params.frequency[1];
      const double n12 = std::abs(params.nu(0, 1));
      report.add({"closed_form_2mode_nu", n12 < nb, n12, nb, "<", "|nu_12| < sqrt(M_1 M_2) Omega_1 Omega_2"});
    }
  } else if (n == 3) {
    add_three_mode_checks(params, report);
  }
  return report;
}

ValidationReport validate_dissipation(const DissipationParams& d, const SystemParams& params) {
  params.check_structure();
  const std::size_t n = params.n_modes();
  d.check_structure(n);
  ValidationReport report;

  const auto antisymmetry = [&](const Matrix& m, const char* name) {
    const double defect = (m + m.transpose()).cwiseAbs().maxCoeff();
    const double bound = 1e-12 * m.cwiseAbs().maxCoeff();
    report.add({name, defect <= bound, defect, bound, "<=", "max |X + X^T|, diagonal included"});
  };
  antisymmetry(d.alpha, "alpha_antisymmetric");
  antisymmetry(d.eta, "eta_antisymmetric");

  const Vector& m = params.eq_mass;
  const Vector& w = params.eq_frequency;
  const bool mu_zero = params.mu.cwiseAbs().maxCoeff() == 0.0;
  if (!mu_zero) report.add_note("friction bound skipped: mu is nonzero");

  for (std::size_t kk = 0; kk < n; ++kk) {
    for (std::size_t jj = 0; jj < n; ++jj) {
      if (kk == jj) continue;
      const auto k = static_cast<Eigen::Index>(kk);
      const auto j = static_cast<Eigen::Index>(jj);
      const double root = std::sqrt(m[k] * m[j] * w[k] * w[j]);
      if (mu_zero) {
        const double arg = d.lambda(k, k) * d.lambda(j, j) -
                           (m[k] * w[k]) / (m[j] * w[j]) * d.lambda(k, j) * d.lambda(k, j);
        const double xi_kj =
            0.5 * std::abs((d.eta(k, j) + params.nu(k, j)) / root + root * (d.alpha(k, j) - params.kappa(k, j)));
        const double xi_jk =
            0.5 * std::abs((d.eta(j, k) + params.nu(j, k)) / root + root * (d.alpha(j, k) - params.kappa(j, k)));
        const double lhs = std::sqrt(std::max(arg, 0.0));
        const double bound = std::max(xi_kj, xi_jk);
        std::string note = "xi evaluated with sqrt(m_k m_j omega_k omega_j)";
        if (arg < 0.0) note += "; radicand negative";
        report.add({"friction_bound" + pair_label(kk, jj), arg >= 0.0 && lhs >= bound, lhs, bound, ">=", note});
      }
      if (kk < jj && d.lambda(k, j) == 0.0 && d.lambda(j, k) == 0.0) {
        const double ll = std::max(d.lambda(k, k) * d.lambda(j, j), 0.0);
        const double a_bound = std::sqrt(ll) / root;
        const double e_bound = std::sqrt(ll) * root;
        report.add({"alpha_bound" + pair_label(kk, jj), std::abs(d.alpha(k, j)) <= a_bound, std::abs(d.alpha(k, j)),
                    a_bound, "<=", ""});
        report.add({"eta_bound" + pair_label(kk, jj), std::abs(d.eta(k, j)) <= e_bound, std::abs(d.eta(k, j)),
                    e_bound, "<=", ""});
      }
    }
  }
  return report;
}

}  // namespace qdiss
