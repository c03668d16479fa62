#pragma once
// Domain types: grids, boundary pairs, potentials and scattering data.
//
// Validators return a list of human-readable issues instead of throwing so that
// deliberately invalid fixtures can still be constructed and inspected. The
// validate_* entry points wrap them and throw InputError.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hls/numlin.hpp"

namespace hls {

struct Grid {
  double start = 0.0;
  double step = 1.0;
  std::size_t count = 0;

  double at(std::size_t i) const { return start + static_cast<double>(i) * step; }
  double last() const { return count == 0 ? start : at(count - 1); }
  std::vector<double> points() const;
  /// Uniform grid covering [a, b] whose step is at most `step`.
  static Grid covering(double a, double b, double step);
  bool valid() const { return step > 0.0 && count > 0; }
};

using Issues = std::vector<std::string>;

// ---------------------------------------------------------------- boundary

struct BoundaryPair {
  ComplexMatrix A;
  ComplexMatrix B;

  std::size_t n() const { return static_cast<std::size_t>(A.rows()); }
  /// E = (A^dagger A + B^dagger B)^{1/2}
  ComplexMatrix E() const;
  /// (A E^{-1}, B E^{-1}); satisfies A^dagger A + B^dagger B = I.
  BoundaryPair normalized() const;
  /// Right multiplication by an invertible T (same boundary condition).
  BoundaryPair times(const ComplexMatrix& t) const { return {A * t, B * t}; }

  static BoundaryPair dirichlet(std::size_t n);
  static BoundaryPair neumann(std::size_t n);
};

struct BoundaryReport {
  double symmetry_residual = 0.0;  // max |B^dagger A - A^dagger B|
  double definiteness = 0.0;       // lambda_min / lambda_max of A^dagger A + B^dagger B
  std::size_t stacked_rank = 0;
  Issues issues;
  bool ok() const { return issues.empty(); }
};

BoundaryReport check_boundary_pair(const ComplexMatrix& a, const ComplexMatrix& b);
/// Throws InputError listing every violated invariant.
BoundaryPair validate_boundary_pair(const ComplexMatrix& a, const ComplexMatrix& b);

struct BoundarySubspace {
  ComplexMatrix projector;  // 2n x 2n orthogonal projector of rank n
};

/// Projector onto {(z1, z2) : -B^dagger z1 + A^dagger z2 = 0}.
BoundarySubspace boundary_subspace(const BoundaryPair& pair);
/// Spectral-norm distance between the boundary subspaces.
double boundary_distance(const BoundaryPair& p1, const BoundaryPair& p2);
bool boundary_equivalent(const BoundaryPair& p1, const BoundaryPair& p2, double tol = 1e-8);

// ---------------------------------------------------------------- potential

struct ZeroPotential {};

struct SampledPotential {
  Grid grid;
  std::vector<ComplexMatrix> values;
};

struct CatalogPotential {
  std::string name;
  std::function<ComplexMatrix(double)> eval;
};

class Potential {
 public:
  using Variant = std::variant<ZeroPotential, SampledPotential, CatalogPotential>;

  Potential() = default;
  Potential(std::size_t n, Variant v, double x_cut);

  static Potential zero(std::size_t n, double x_cut = 12.0);
  static Potential sampled(Grid grid, std::vector<ComplexMatrix> values, double x_cut);
  static Potential catalog(std::size_t n, std::string name, std::function<ComplexMatrix(double)> eval,
                           double x_cut = 12.0);

  std::size_t n() const { return n_; }
  double x_cut() const { return x_cut_; }
  const Variant& variant() const { return variant_; }
  bool is_zero() const { return std::holds_alternative<ZeroPotential>(variant_); }

  /// V(x); zero for x > x_cut. Sampled potentials use a cubic B-spline per real entry.
  ComplexMatrix operator()(double x) const;
  /// Same potential truncated at a different point.
  Potential with_x_cut(double x_cut) const;

 private:
  struct Spline;
  std::size_t n_ = 0;
  Variant variant_ = ZeroPotential{};
  double x_cut_ = 12.0;
  std::shared_ptr<const Spline> spline_;
};

Issues check_potential(const Potential& v);
void validate_potential(const Potential& v);

struct Moments {
  double sigma0 = 0.0;  // integral of |V|
  double sigma1 = 0.0;  // integral of x |V|
};

/// Trapezoid estimates of the first two absolute moments on [0, x_cut]; |V| is the spectral norm.
/// Closed-form potentials are sampled with step 0.01.
Moments potential_moments(const Potential& v);

// ---------------------------------------------------------------- scattering data

/// C y^power e^{-rate y} (right terms) or C |y|^power e^{-rate |y|} (left terms).
struct ExpPolyTerm {
  ComplexMatrix C;
  double rate = 1.0;
  int power = 0;
};

struct FsRepresentation {
  ComplexMatrix s_inf;
  std::vector<ExpPolyTerm> right_terms;
  std::vector<ExpPolyTerm> left_terms;
};

/// F_s tabulated on a symmetric y grid, produced from sampled S(k).
struct SampledFs {
  Grid y_grid;                        // covers [-Y, Y]; y = 0 is a grid point
  std::vector<ComplexMatrix> values;  // regular part (jump removed)
  ComplexMatrix g1;                   // jump F_s(0+) - F_s(0-)
};

struct SampledScattering {
  Grid k_grid;
  std::vector<ComplexMatrix> s_values;
  ComplexMatrix s_inf;
  std::optional<SampledFs> fs;  // filled by fs_from_sampled
};

struct BoundState {
  double kappa = 1.0;
  ComplexMatrix M;
};

struct ScatteringData {
  std::size_t n = 1;
  std::variant<FsRepresentation, SampledScattering> repr;
  std::vector<BoundState> bound_states;

  bool analytic() const { return std::holds_alternative<FsRepresentation>(repr); }
  const FsRepresentation& fs() const { return std::get<FsRepresentation>(repr); }
  const SampledScattering& sampled() const { return std::get<SampledScattering>(repr); }
  const ComplexMatrix& s_inf() const;
  /// Sum of the ranks of the normalization matrices.
  std::size_t total_bound_states() const;
};

/// Rank of a normalization matrix (relative threshold 1e-8).
std::size_t multiplicity(const BoundState& bs);

/// Shape, finiteness and sign problems that make the data unusable.
Issues structural_issues(const ScatteringData& d);
/// Structural issues plus violated invariants (hermiticity, involution, PSD, ...).
Issues check_scattering_data(const ScatteringData& d);
/// Throws InputError on any issue reported by check_scattering_data.
void validate_scattering_data(const ScatteringData& d);

}  // namespace hls
