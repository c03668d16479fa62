#pragma once
// Inverse problem: kernels F_s and F from scattering data, the Marchenko equation
//   K(x,y) + F(x+y) + int_x^inf K(x,z) F(z+y) dz = 0,   y > x,
// its x-derivative, the potential V(x) = -2 d/dx K(x,x), the Jost matrix from K(0,.)
// and the boundary pair.

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hls/model.hpp"
#include "hls/separable.hpp"

namespace hls {

/// The Marchenko operator I + W(x) is (numerically) singular at x.
class MarchenkoSingular : public SolverError {
 public:
  MarchenkoSingular(double x, double smin);
  double x;
  double smallest_singular_value;
};

namespace marchenko {

// ---------------------------------------------------------------- data kernels

/// F_s(y); right terms for y > 0, left terms for y < 0, the y -> 0+ limit at y = 0.
ComplexMatrix fs_eval(const ScatteringData& data, double y);
/// F(y) = F_s(y) + sum_j M_j^2 e^{-kappa_j y}, y > 0.
ComplexMatrix f_eval(const ScatteringData& data, double y);
/// Closed-form S(k) for analytic data; sampled data are interpolated (S(-k) = S(k)^dagger).
ComplexMatrix s_from_data(const ScatteringData& data, double k);
/// F_s(0+) - F_s(0-).
ComplexMatrix g1_from_data(const ScatteringData& data);
/// Right terms of F_s plus one term M_j^2 e^{-kappa_j y} per bound state.
std::vector<ExpPolyTerm> f_terms(const ScatteringData& data);
/// Left terms of F_s as functions of |y|.
std::vector<ExpPolyTerm> left_terms(const ScatteringData& data);

struct FsFromSampledOptions {
  double taper_fraction = 0.1;  // raised-cosine taper over the top part of the k range
  double y_max = 30.0;
  double y_step = 0.01;
};

/// Tabulates F_s from sampled S(k) by a direct Fourier sum and stores it in data.
/// The 1/k tail G1/(1+ik) is removed before the transform and added back exactly.
void fs_from_sampled(ScatteringData& data, const FsFromSampledOptions& opt = {});

// ---------------------------------------------------------------- kernel K(x, .)

struct SeparableK {
  std::vector<separable::BasisElem> basis;
  std::vector<ComplexMatrix> coeffs;  // K(y) = sum_b coeffs[b] y^q e^{-a y}

  ComplexMatrix eval(double y) const;
  ComplexMatrix eval_dy(double y) const;
  /// int_0^inf K(y) e^{iky} dy
  ComplexMatrix fourier(Complex k) const;
};

struct SampledK {
  Grid y_grid;
  std::vector<ComplexMatrix> values;

  /// Local cubic interpolation; zero past the grid.
  ComplexMatrix eval(double y) const;
  /// Trapezoid int over the grid of K(y) e^{iky} dy.
  ComplexMatrix fourier(Complex k) const;
};

using KernelRep = std::variant<SeparableK, SampledK>;

struct MarchenkoSolution {
  double x = 0.0;
  KernelRep K;
  ComplexMatrix K_diag;           // K(x, x+)
  std::optional<KernelRep> Kx;    // d/dx K(x, .)
  double smallest_singular_value = 1.0;

  ComplexMatrix K_at(double y) const;
  ComplexMatrix Kx_at(double y) const;
};

/// Exact finite-rank solve. Throws MarchenkoSingular when sigma_min(I+W) <= sing_tol * sigma_max.
MarchenkoSolution solve_marchenko_separable(const ScatteringData& data, double x, bool with_derivative = true,
                                            double sing_tol = 1e-10);
MarchenkoSolution solve_marchenko_separable(const separable::FiniteRankKernel& kernel, double x,
                                            bool with_derivative = true, double sing_tol = 1e-10);

/// Solves the derivative equation
///   L(y) + F'(x+y) - K(x,x) F(x+y) + int_x^inf L(z) F(z+y) dz = 0
/// and stores L = K_x in sol.
void solve_derivative_marchenko(const separable::FiniteRankKernel& kernel, MarchenkoSolution& sol);

struct NystromOptions {
  bool richardson = true;      // combine steps h and h/2
  double singular_tol = 1e-3;  // on the Arnoldi Hessenberg sigma_min
  double gmres_tol = 1e-13;
};

/// Trapezoid Nystrom discretization on y_i = x + i*step, i < y_grid.count (y_grid.start ignored).
MarchenkoSolution solve_marchenko_nystrom(const std::function<ComplexMatrix(double)>& F, std::size_t n, double x,
                                          const Grid& y_grid, const NystromOptions& opt = {});

/// Suggested truncation length for F: at least 10 / rate for every term and long enough for
/// |C| y^q e^{-a y} to drop below 1e-10, capped at 30.
double nystrom_length(const ScatteringData& data);

/// max over probe y of |K(x,y) + F(x+y) + int_x^inf K(x,z) F(z+y) dz| with Gauss-Legendre quadrature.
double marchenko_residual(const MarchenkoSolution& sol, const std::function<ComplexMatrix(double)>& F,
                          std::size_t probes = 20, double length = 30.0);

// ---------------------------------------------------------------- recovery

struct RecoveredPotential {
  Potential potential;          // sampled on the requested grid (failed points set to zero)
  std::size_t first_index = 0;  // first grid index where recovery succeeded
  double max_asymmetry = 0.0;   // max |V - V^dagger| before hermitizing
  std::vector<std::string> failures;
};

/// V(x) = -2 d/dx K(x,x) by 4th-order differences of K_diag (step min(grid step, 1e-3)).
RecoveredPotential recover_potential(const ScatteringData& data, const Grid& x_grid);

struct JostAtZero {
  ComplexMatrix f0;   // f(k, 0)
  ComplexMatrix fp0;  // f'(k, 0)
};

/// f(k,0) = I + int K(0,y) e^{iky} dy,  f'(k,0) = ik I - K(0,0) + int K_x(0,y) e^{iky} dy.
JostAtZero jost_from_kernel(const MarchenkoSolution& k0, Complex k);
/// J(k) = f(-k*,0)^dagger B - f'(-k*,0)^dagger A.
ComplexMatrix jost_matrix_from_kernel(const MarchenkoSolution& k0, const BoundaryPair& pair, Complex k);

struct BoundaryRecovery {
  std::optional<BoundaryPair> pair;  // E-normalized
  std::size_t nullity = 0;
  double symmetry_residual = 0.0;  // max |B^dagger A - A^dagger B| of the orthonormal basis
  std::vector<std::string> issues;
};

/// Nullspace of [[I - S_inf, 0], [S_inf K00 + K00 S_inf - G1, I + S_inf]] (relative singular-value tol).
/// Sampled data need a loose tol since K00 and G1 are only approximate.
BoundaryRecovery recover_boundary(const ComplexMatrix& s_inf, const ComplexMatrix& g1, const ComplexMatrix& k00,
                                  double tol = 1e-8);

struct InverseOptions {
  Grid x_grid{0.0, 0.02, 401};
  bool extend_x_cut = true;  // extend the grid until the potential has decayed (slow rates)
  FsFromSampledOptions sampled;
};

struct InverseResult {
  Potential potential;
  std::optional<BoundaryPair> boundary;
  std::optional<MarchenkoSolution> k0;  // solution at x = 0 with K_x
  ComplexMatrix s_inf;
  ComplexMatrix g1;
  ComplexMatrix k00;
  std::size_t boundary_nullity = 0;
  std::size_t first_index = 0;
  double potential_asymmetry = 0.0;
  double k00_asymmetry = 0.0;
  double marchenko_residual = 0.0;
  std::vector<std::string> errors;  // "stage: message"
  std::vector<std::string> warnings;

  bool complete() const { return errors.empty() && boundary.has_value(); }
};

/// Grid end point that captures the decay of the recovered potential: clamp(9/a_min, 8, 40).
double suggested_x_end(const ScatteringData& data);

InverseResult invert(const ScatteringData& data, const InverseOptions& opt = {});

}  // namespace marchenko
}  // namespace hls
