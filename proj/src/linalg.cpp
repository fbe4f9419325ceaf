#include "qdiss/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "qdiss/error.hpp"

namespace qdiss {
namespace {

// Pade coefficients b_0..b_m and the 1-norm thresholds below which the
// degree-m approximant is accurate to double precision without scaling
// (Higham, SIAM J. Matrix Anal. Appl. 26 (2005)).
constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0};
constexpr std::array<double, 10> kPade9 = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
                                           2162160.0,     110880.0,     3960.0,       90.0,        1.0};
constexpr std::array<double, 14> kPade13 = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                            1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                            670442572800.0,      33522128640.0,       1323241920.0,
                                            40840800.0,          960960.0,            16380.0,
                                            182.0,               1.0};
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

Matrix solve_pade(const Matrix& u, const Matrix& v) {
  // r = (V - U)^{-1} (V + U)
  Eigen::PartialPivLU<Matrix> lu(v - u);
  return lu.solve(v + u);
}

template <std::size_t N>
Matrix pade_low_degree(const Matrix& a, const std::array<double, N>& b) {
  const auto n = a.rows();
  const Matrix ident = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  Matrix even = b[0] * ident;
  Matrix odd = b[1] * ident;
  Matrix power = ident;
  for (std::size_t k = 2; k < N; k += 2) {
    power = power * a2;
    even += b[k] * power;
    if (k + 1 < N) odd += b[k + 1] * power;
  }
  return solve_pade(a * odd, even);
}

Matrix pade13(const Matrix& a) {
  const auto& b = kPade13;
  const auto n = a.rows();
  const Matrix ident = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const Matrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident;
  const Matrix u = a * u_inner;
  const Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
  return solve_pade(u, v);
}

}  // namespace

double one_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

Matrix expm(const Matrix& a) {
  if (a.rows() != a.cols()) throw NumericalError("expm requires a square matrix");
  if (!a.allFinite()) throw NumericalError("expm argument has non-finite entries");
  const auto n = a.rows();
  if (n == 0) return a;
  const double norm = one_norm(a);
  if (norm == 0.0) return Matrix::Identity(n, n);
  if (norm <= kTheta3) return pade_low_degree(a, kPade3);
  if (norm <= kTheta5) return pade_low_degree(a, kPade5);
  if (norm <= kTheta7) return pade_low_degree(a, kPade7);
  if (norm <= kTheta9) return pade_low_degree(a, kPade9);

  const int squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
  Matrix r = pade13(a / std::ldexp(1.0, squarings));
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

Matrix solve_symmetric_lyapunov(const Matrix& a, const Matrix& q) {
  const auto n = a.rows();
  if (a.cols() != n || q.rows() != n || q.cols() != n) throw NumericalError("Lyapunov operands must be square and match");

  // Unknown index for X(i, j) with i <= j.
  const auto unknown = [n](Eigen::Index i, Eigen::Index j) {
    if (i > j) std::swap(i, j);
    return i * n - i * (i - 1) / 2 + (j - i);
  };
  const Eigen::Index size = n * (n + 1) / 2;
  Matrix system = Matrix::Zero(size, size);
  Vector rhs(size);

  // Row (i, j): sum_k A(i,k) X(k,j) + X(i,k) A(j,k) = -Q(i,j)
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const Eigen::Index row = unknown(i, j);
      for (Eigen::Index k = 0; k < n; ++k) {
        system(row, unknown(k, j)) += a(i, k);
        system(row, unknown(i, k)) += a(j, k);
      }
      rhs[row] = -q(i, j);
    }
  }

  Eigen::PartialPivLU<Matrix> lu(system);
  const double rcond = lu.rcond();
  if (!(rcond > std::numeric_limits<double>::epsilon() * static_cast<double>(size))) {
    std::ostringstream os;
    os << "Lyapunov system is numerically singular (rcond=" << rcond << ")";
    throw NumericalError(os.str());
  }
  const Vector x = lu.solve(rhs);

  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      out(i, j) = x[unknown(i, j)];
      out(j, i) = out(i, j);
    }
  }
  return out;
}

double relative_asymmetry(const Matrix& x) {
  if (x.size() == 0) return 0.0;
  const double scale = std::max(x.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  return (x - x.transpose()).cwiseAbs().maxCoeff() / scale;
}

Matrix symmetrized(const Matrix& x) { return 0.5 * (x + x.transpose()); }

}  // namespace qdiss
