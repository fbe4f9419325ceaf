#pragma once

#include <Eigen/Dense>

namespace qdiss {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Interleaved phase-space ordering (q_1, p_1, ..., q_N, p_N).
constexpr Eigen::Index q_index(std::size_t mode) { return static_cast<Eigen::Index>(2 * mode); }
constexpr Eigen::Index p_index(std::size_t mode) { return static_cast<Eigen::Index>(2 * mode + 1); }

/// Matrix exponential by scaling and squaring with diagonal Pade
/// approximants (degree 3 to 13, picked from the 1-norm).
Matrix expm(const Matrix& a);

/// Solves A X + X A^T + Q = 0 for symmetric X, with Q symmetric, through the
/// n(n+1)/2 unknowns of the upper triangle and a dense LU factorization.
/// Throws NumericalError when the system is numerically singular.
Matrix solve_symmetric_lyapunov(const Matrix& a, const Matrix& q);

/// max |X - X^T| / max(|X|, tiny)
double relative_asymmetry(const Matrix& x);
Matrix symmetrized(const Matrix& x);

double one_norm(const Matrix& a);

}  // namespace qdiss
