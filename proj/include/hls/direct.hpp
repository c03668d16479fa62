#pragma once
// Direct problem: Jost solution, Jost matrix, scattering matrix, physical and
// regular solutions, bound states and normalization matrices for a potential V
// and a boundary pair (A, B).
//
// The Jost solution is integrated in the form f = e^{ikx} m with
//   m'' = -2ik m' + V m,  m(x_cut) = I,  m'(x_cut) = 0,
// backward from x_cut. For k = i kappa this keeps the solution bounded.

#include <optional>
#include <vector>

#include "hls/model.hpp"

namespace hls::direct {

struct OdeTolerance {
  double abs = 1e-12;
  double rel = 1e-10;
};

struct SolutionSamples {
  Grid grid;
  std::vector<ComplexMatrix> value;       // f(k,x) or phi(k,x)
  std::vector<ComplexMatrix> derivative;  // d/dx of the same
};

struct JostValues {
  Complex k;
  ComplexMatrix f0;   // f(k,0)
  ComplexMatrix fp0;  // f'(k,0)
  std::optional<SolutionSamples> samples;
};

/// Throws InputError for Im k < 0, SolverError on non-finite results.
JostValues jost_solve(const Potential& v, Complex k, const std::optional<Grid>& samples = std::nullopt,
                      const OdeTolerance& tol = {});

/// J(k) = f(-k*,0)^dagger B - f'(-k*,0)^dagger A, from Jost values computed at -k*.
ComplexMatrix jost_matrix(const JostValues& at_minus_conj_k, const BoundaryPair& pair);
/// Same, solving for the Jost values at -k* first (Im k >= 0).
ComplexMatrix jost_matrix(const Potential& v, const BoundaryPair& pair, Complex k, const OdeTolerance& tol = {});

/// S(k) = -J(-k) J(k)^{-1} for real k (negative k via S(-k) = S(k)^dagger).
/// k = 0 is replaced by k_eps = 1e-6 and a warning is appended when `warnings` is given.
ComplexMatrix scattering_matrix(const Potential& v, const BoundaryPair& pair, double k, Issues* warnings = nullptr,
                                const OdeTolerance& tol = {});
/// S(k) from precomputed f(k,0), f'(k,0) and f(-k,0), f'(-k,0).
ComplexMatrix scattering_matrix(const JostValues& plus_k, const JostValues& minus_k, const BoundaryPair& pair);

/// phi(k,x) with phi(k,0) = A, phi'(k,0) = B, integrated forward.
SolutionSamples regular_solution(const Potential& v, const BoundaryPair& pair, Complex k, const Grid& x_grid,
                                 const OdeTolerance& tol = {});

/// Psi(k,x) = f(-k,x) + f(k,x) S(k), real k.
SolutionSamples physical_solution(const Potential& v, const BoundaryPair& pair, double k, const Grid& x_grid,
                                  const OdeTolerance& tol = {});

struct BoundSearchOptions {
  double kappa_min = 1e-3;
  double kappa_max = 10.0;
  std::size_t points = 400;     // log-spaced scan
  double refine_tol = 1e-10;    // golden-section bracket width
  double accept = 1e-6;         // sigma_min(J) <= accept * ||[f; f']|| ||[A; B]||
};

struct BoundStateRoot {
  double kappa = 0.0;
  std::size_t multiplicity = 0;
  double relative_smin = 0.0;
};

std::vector<BoundStateRoot> find_bound_states(const Potential& v, const BoundaryPair& pair,
                                              const BoundSearchOptions& opt = {}, const OdeTolerance& tol = {});

struct Normalization {
  ComplexMatrix P;  // projector onto Ker J(i kappa)^dagger
  ComplexMatrix A;  // int_0^inf f(i kappa,x)^dagger f(i kappa,x) dx
  ComplexMatrix B;  // (I - P) + P A P
  ComplexMatrix M;  // B^{-1/2} P
};

/// Throws SolverError if B_j is not positive definite.
Normalization bound_normalization(const Potential& v, const BoundaryPair& pair, double kappa,
                                  std::size_t multiplicity = 0, const OdeTolerance& tol = {});

/// Bound-state wave function f(i kappa, x) M on a grid.
std::vector<ComplexMatrix> bound_state_function(const Potential& v, double kappa, const ComplexMatrix& m,
                                                const Grid& x_grid, const OdeTolerance& tol = {});

/// Limit of -(B + ikA)(B - ikA)^{-1}: +1 on Ran A, -1 on its orthogonal complement.
ComplexMatrix s_inf_from_boundary(const BoundaryPair& pair);

struct AsymptoticData {
  ComplexMatrix s_inf;
  ComplexMatrix g1;
  double extrapolation_residual = 0.0;
};

/// G1 = lim ik (S(k) - S_inf), Richardson-extrapolated in 1/k from k = K, 2K, 4K.
AsymptoticData s_inf_and_g1(const Potential& v, const BoundaryPair& pair, double big_k = 50.0,
                            const OdeTolerance& tol = {});

struct DirectOptions {
  double k_max = 30.0;
  std::size_t k_points = 600;
  double kappa_max = 10.0;
  double g1_k = 50.0;
  bool keep_jost = false;
  OdeTolerance tol;
};

struct DirectResult {
  std::size_t n = 0;
  Grid k_grid;  // (0, k_max]
  std::vector<ComplexMatrix> s_values;
  ComplexMatrix s_inf;
  ComplexMatrix g1;
  std::vector<BoundState> bound_states;
  std::vector<Normalization> normalizations;
  std::vector<JostValues> jost_cache;  // f at +k for each grid k when keep_jost
  double max_unitarity_defect = 0.0;
  Issues warnings;

  /// Sampled scattering data (k grid, S, S_inf, bound states).
  ScatteringData scattering_data() const;
};

/// Parallel over the k grid (see HLS_THREADS).
DirectResult solve_direct(const Potential& v, const BoundaryPair& pair, const DirectOptions& opt = {});

}  // namespace hls::direct
