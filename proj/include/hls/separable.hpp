#pragma once
// Finite-rank algebra for kernels that are sums of C y^p e^{-a y}.
//
// For F(s) = sum_t C_t s^{p_t} e^{-a_t s} the shifted kernel splits as
//   F(z + y) = sum_b G_b(z) h_b(y),  h_b(y) = y^{q_b} e^{-a_b y},
//   G_b(z)   = sum_{t: a_t = a_b, p_t >= q_b} C_t binom(p_t, q_b) z^{p_t - q_b} e^{-a_t z}.
// The map X -> int_x^inf X(z) F(z + y) dz therefore sends span{h_b} to itself and
// acts on row-block coefficients through the matrix W(x) below.

#include <cstddef>
#include <vector>

#include "hls/model.hpp"

namespace hls::separable {

struct BasisElem {
  double rate = 1.0;
  int power = 0;
};

/// int_x^inf z^m e^{-c z} dz for integer m >= 0, c > 0 (finite sum, no special functions).
double upper_integral(int m, double c, double x);

/// int_0^inf y^q e^{-a y} e^{i k y} dy = q! / (a - i k)^{q+1}, valid for Im k > -a.
Complex exp_poly_transform(int q, double a, Complex k);

class FiniteRankKernel {
 public:
  /// Rates closer than 1e-10 (relative) are merged into one basis rate.
  FiniteRankKernel(std::vector<ExpPolyTerm> terms, std::size_t n);

  std::size_t n() const { return n_; }
  std::size_t rank() const { return basis_.size(); }
  const std::vector<BasisElem>& basis() const { return basis_; }
  const std::vector<ExpPolyTerm>& terms() const { return terms_; }
  bool empty() const { return basis_.empty(); }

  /// F(s)
  ComplexMatrix kernel(double s) const;
  /// F'(s)
  ComplexMatrix kernel_ds(double s) const;
  /// h_b(y)
  double basis_value(std::size_t b, double y) const;
  double basis_derivative(std::size_t b, double y) const;

  /// W(x): block (b', b) = sum_t C_t binom(p_t, q_b) int_x^inf z^{q_b' + p_t - q_b} e^{-(a_b' + a_t) z} dz.
  ComplexMatrix gram(double x) const;
  /// [G_1(x) ... G_B(x)], n x nB
  ComplexMatrix source(double x) const;
  /// d/dx of source(x)
  ComplexMatrix source_dx(double x) const;

 private:
  std::vector<ExpPolyTerm> terms_;
  std::vector<std::size_t> term_basis_rate_;  // index into rates_ for each term
  std::vector<double> rates_;
  std::vector<BasisElem> basis_;
  std::vector<std::size_t> basis_rate_;
  std::size_t n_;
};

struct NullityResult {
  std::size_t nullity = 0;
  double smallest_singular_value = 0.0;  // relative to the largest
  std::size_t rank = 0;                  // dimension of the invariant subspace (blocks)
};

/// Nullity of (sign I + W(0)) with relative threshold tol: the number of independent
/// solutions X of sign X(y) + int_0^inf X(z) F(z + y) dz = 0 (X a row vector).
NullityResult operator_nullity(const FiniteRankKernel& kernel, double sign, double tol = 1e-6);

}  // namespace hls::separable
