#pragma once

#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hls {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

/// Numerical failure inside a solver (singular system, non-convergence, overflow).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input that violates a documented precondition or schema.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by arg_det_unwrap when two consecutive determinants differ in phase by
/// (nearly) pi, i.e. the parameter path must be refined.
class GridTooCoarse : public SolverError {
 public:
  GridTooCoarse(std::size_t index, double jump);
  std::size_t index;
  double jump;
};

namespace numlin {

/// Largest entry modulus.
double max_abs(const ComplexMatrix& m);

/// Spectral norm (largest singular value).
double norm2(const ComplexMatrix& m);

/// True iff max |M - M^dagger| <= tol. Throws InputError for non-square input.
bool is_hermitian(const ComplexMatrix& m, double tol);

/// (M + M^dagger) / 2
ComplexMatrix hermitize(const ComplexMatrix& m);

/// True iff every entry is finite.
bool all_finite(const ComplexMatrix& m);

/// e^{-M t}. Diagonalizes M when the eigenvector matrix is well conditioned
/// (condition number <= 1e8) and falls back to Pade scaling-and-squaring.
ComplexMatrix mat_exp(const ComplexMatrix& m, double t);

/// Solves A X + X B = C. Kronecker-vectorized dense solve for n <= 16,
/// Bartels-Stewart on complex Schur forms above that.
/// Throws SolverError when some eigenvalue of A equals minus an eigenvalue of B.
ComplexMatrix sylvester_solve(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c);

struct Nullspace {
  ComplexMatrix basis;  // columns are orthonormal
  std::size_t nullity = 0;
  std::vector<double> singular_values;  // descending
};

/// Right null space: right-singular vectors whose singular values are
/// <= tol * (largest singular value). Columns beyond min(rows, cols) are always null.
Nullspace nullspace(const ComplexMatrix& m, double tol = 1e-8);

/// Orthogonal projector onto the column space of m (relative rank threshold tol).
ComplexMatrix range_projector(const ComplexMatrix& m, double tol = 1e-8);

/// M^{-1/2} for hermitian positive definite M.
ComplexMatrix inv_sqrt_psd(const ComplexMatrix& m);

/// Hermitian square root of a hermitian positive semidefinite matrix.
ComplexMatrix sqrt_psd(const ComplexMatrix& m);

/// Number of eigenvalues of a (not necessarily normal) matrix within radius of target.
std::size_t count_eigenvalues_near(const ComplexMatrix& m, Complex target, double radius);

/// Rank with a relative singular-value threshold.
std::size_t rank(const ComplexMatrix& m, double tol = 1e-8);

/// Smallest singular value.
double min_singular_value(const ComplexMatrix& m);

/// Total continuous change of arg det along an ordered path of square matrices,
/// arg det(last) - arg det(first), by nearest-branch continuation.
/// Throws GridTooCoarse when a single step jumps by >= pi - 0.1.
double arg_det_unwrap(std::span<const ComplexMatrix> values);

struct GmresResult {
  ComplexVector x;
  std::size_t iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
  /// Smallest singular value of the last Arnoldi Hessenberg matrix; a small value
  /// flags a (numerically) singular operator on the explored Krylov space.
  double hessenberg_smin = 0.0;
};

/// Restarted GMRES(m) with modified Gram-Schmidt for a matrix-free operator.
GmresResult gmres(const std::function<void(const ComplexVector&, ComplexVector&)>& apply, const ComplexVector& b,
                  double tol = 1e-13, std::size_t restart = 60, std::size_t max_iter = 600);

}  // namespace numlin
}  // namespace hls
