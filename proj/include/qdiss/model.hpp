#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "qdiss/linalg.hpp"
#include "qdiss/validation.hpp"

namespace qdiss {

enum class ModeKind { oscillator, inverted_barrier };

ModeKind parse_mode_kind(std::string_view name);
std::string_view mode_kind_name(ModeKind kind);

/// Quadratic Hamiltonian of N coupled modes plus the target Gibbs
/// oscillators. All quantities are in internal units.
///
///   H = sum_k [ p_k^2/(2 M_k) +/- M_k Omega_k^2 q_k^2 / 2 + mu_kk (p_k q_k + q_k p_k)/2 ]
///     + 1/2 sum_{k!=j} (nu_kj q_k q_j + kappa_kj p_k p_j) + sum_{k!=j} mu_kj p_k q_j
///
/// with the minus sign for inverted-barrier modes. The Gibbs state that the
/// dissipation drives the system to is built from eq_mass (m_k) and
/// eq_frequency (omega_k).
struct SystemParams {
  Vector mass;          // M_k
  Vector frequency;     // Omega_k
  Vector eq_mass;       // m_k
  Vector eq_frequency;  // omega_k
  Matrix mu;
  Matrix nu;     // symmetric, zero diagonal
  Matrix kappa;  // symmetric, zero diagonal
  std::vector<ModeKind> mode_kind;

  /// Builds N uncoupled oscillators with M = m and Omega = omega.
  static SystemParams uncoupled(const Vector& mass, const Vector& frequency);

  std::size_t n_modes() const { return static_cast<std::size_t>(mass.size()); }
  bool has_barrier() const;
  bool is_barrier(std::size_t k) const { return mode_kind[k] == ModeKind::inverted_barrier; }

  /// Throws ModelError unless every structural invariant holds: matching
  /// dimensions, finite entries, positive masses and frequencies, nu and
  /// kappa symmetric with exactly zero diagonals.
  void check_structure() const;
};

/// Friction and phase parameters of the Lindblad dissipator plus the bath
/// temperature (MeV, k_B = 1).
struct DissipationParams {
  Matrix lambda;
  Matrix alpha;  // antisymmetric
  Matrix eta;    // antisymmetric
  double temperature = 1.0;

  static DissipationParams diagonal_friction(const Vector& lambda_kk, double temperature);

  double beta() const { return 1.0 / temperature; }
  /// Temperatures at or below this are handled as the T -> 0 limit.
  static constexpr double kZeroTemperature = 1e-6;
  bool zero_temperature_limit() const { return temperature <= kZeroTemperature; }

  /// Throws ModelError on dimension mismatch with n_modes, non-finite
  /// entries or a non-positive temperature. Antisymmetry is reported by
  /// validate_dissipation rather than thrown.
  void check_structure(std::size_t n_modes) const;
};

/// Positive-definiteness of the kinetic and potential quadratic forms
/// decided by eigenvalues, with the closed-form two-mode and symmetric
/// three-mode inequalities reported alongside as cross-checks. Barrier
/// modes are left out of the potential form.
ValidationReport validate_hamiltonian(const SystemParams& params);

/// Antisymmetry of alpha and eta, the friction bound (when mu vanishes) and
/// the alpha/eta bounds for pairs without cross friction.
ValidationReport validate_dissipation(const DissipationParams& d, const SystemParams& params);

/// Matrices of the two quadratic forms, exposed for tests and reports.
Matrix kinetic_form(const SystemParams& params);
Matrix potential_form(const SystemParams& params, const std::vector<std::size_t>& modes);

}  // namespace qdiss
