#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qdiss/linalg.hpp"
#include "qdiss/model.hpp"
#include "qdiss/validation.hpp"

namespace qdiss {

/// coth(x) for x > 0: 1 + 2/expm1(2x), the series 1/x + x/3 below 1e-6 and
/// exactly 1 above 350.
double coth(double x);

/// coth(omega / 2T), or 1 in the zero-temperature limit.
double thermal_factor(double omega, double temperature);

/// Symmetric 2N x 2N diffusion matrix in (q_1, p_1, ..., q_N, p_N) order.
class DiffusionMatrix {
 public:
  /// Symmetrizes the input. Throws ModelError on odd or non-square shapes,
  /// non-finite entries or a negative diagonal.
  explicit DiffusionMatrix(const Matrix& d);

  const Matrix& matrix() const { return d_; }
  std::size_t n_modes() const { return static_cast<std::size_t>(d_.rows() / 2); }

  double qq(std::size_t k, std::size_t j) const { return d_(q_index(k), q_index(j)); }
  double pp(std::size_t k, std::size_t j) const { return d_(p_index(k), p_index(j)); }
  /// D_{q_k p_j}
  double qp(std::size_t k, std::size_t j) const { return d_(q_index(k), p_index(j)); }

 private:
  Matrix d_;
};

namespace formulas {

struct ModeCoefficients {
  double qq = 0.0;
  double pp = 0.0;
  double qp = 0.0;
};

/// Diagonal block of one mode; c is the thermal factor at omega.
ModeCoefficients mode_coefficients(double lambda, double mu, double mass, double frequency, double eq_mass,
                                   double eq_frequency, double c);

struct PairInputs {
  double lambda_kj = 0.0, lambda_jk = 0.0;
  double mu_kj = 0.0, mu_jk = 0.0;
  double alpha_kj = 0.0, eta_kj = 0.0;
  double nu_kj = 0.0, kappa_kj = 0.0;
  double m_k = 1.0, omega_k = 1.0, c_k = 1.0;
  double m_j = 1.0, omega_j = 1.0, c_j = 1.0;
};

struct PairCoefficients {
  double qq = 0.0;  // D_{q_k q_j}
  double pp = 0.0;  // D_{p_k p_j}
  double qp = 0.0;  // D_{q_k p_j}
};

PairCoefficients pair_coefficients(const PairInputs& in);

}  // namespace formulas

/// Builds D from the closed-form coefficients. Thermal factors use the
/// equilibrium frequencies, with their real magnitude for barrier modes.
DiffusionMatrix diffusion_matrix(const SystemParams& params, const DissipationParams& d);

/// Copy of D with every cross-mode block set to zero.
DiffusionMatrix without_cross_mode_terms(const DiffusionMatrix& d);

/// Cauchy-Schwarz type inequalities over all ordered mode pairs (k = j
/// included) plus alpha_kk = eta_kk = 0. Measured values are the left-hand
/// sides; a check passes when lhs - rhs >= -1e-12 * scale.
ValidationReport fundamental_constraints(const DiffusionMatrix& D, const DissipationParams& d);

struct EinsteinDeviations {
  /// |D_{p_k p_k} / (lambda~_kk m_k T) - 1|, empty when lambda~_kk = 0.
  std::vector<std::optional<double>> mode;
  struct Pair {
    std::size_t k = 0;
    std::size_t j = 0;
    std::optional<double> deviation;
  };
  /// One entry per unordered pair k < j; empty when Lambda_kj = 0.
  std::vector<Pair> pairs;

  /// Largest defined deviation, or nullopt when none is defined.
  std::optional<double> max() const;
};

EinsteinDeviations einstein_deviation(const SystemParams& params, const DissipationParams& d);

struct Residual {
  std::string name;
  double scaled = 0.0;    // |sum of terms| / max |term|
  double max_term = 0.0;  // scale of the equation
};

struct ResidualReport {
  /// False when the hyperbolic functions overflow (e.g. the zero-temperature
  /// limit); the residuals are then not meaningful.
  bool evaluable = true;
  double max_scaled = 0.0;
  std::vector<Residual> equations;
};

/// Evaluates the three sets of linear equations that D must satisfy: four
/// per mode and six per ordered pair of modes.
ResidualReport algebraic_residuals(const SystemParams& params, const DissipationParams& d, const DiffusionMatrix& D,
                                   double beta);

}  // namespace qdiss
