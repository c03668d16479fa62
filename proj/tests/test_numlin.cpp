#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "hls/numlin.hpp"

using namespace hls;
using namespace hls::numlin;

namespace {

// Truncated Taylor series with scaling and squaring; independent of Eigen's expm.
ComplexMatrix taylor_exp_neg(const ComplexMatrix& m, double t) {
  ComplexMatrix a = -t * m;
  int s = 0;
  while (max_abs(a) > 0.25) {
    a /= 2.0;
    ++s;
  }
  ComplexMatrix term = ComplexMatrix::Identity(m.rows(), m.cols());
  ComplexMatrix sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

ComplexMatrix sample(int n, int seed) {
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m(i, j) = Complex(std::sin(1.3 * i + 0.7 * j + seed), std::cos(0.4 * i - 1.1 * j + 2.0 * seed));
  return m;
}

}  // namespace

TEST_CASE("mat_exp agrees with Taylor series") {
  ComplexMatrix h(3, 3);
  h << 2, Complex(0, 1), 0, Complex(0, -1), 3, 0.5, 0, 0.5, 1;
  CHECK(max_abs(mat_exp(h, 0.7) - taylor_exp_neg(h, 0.7)) < 1e-12);

  ComplexMatrix g = sample(4, 1);
  g.diagonal().array() += 3.0;
  CHECK(max_abs(mat_exp(g, 0.3) - taylor_exp_neg(g, 0.3)) < 1e-11);

  // Defective Jordan block triggers the fallback path.
  ComplexMatrix j(2, 2);
  j << 1, 1, 0, 1;
  ComplexMatrix expect(2, 2);
  expect << std::exp(-2.0), -2.0 * std::exp(-2.0), 0, std::exp(-2.0);
  CHECK(max_abs(mat_exp(j, 2.0) - expect) < 1e-13);
}

TEST_CASE("sylvester_solve against integral representation") {
  // For A, B with spectra in Re > 0, X = int_0^inf e^{-Ay} C e^{-By} dy.
  ComplexMatrix a(2, 2), b(3, 3);
  a << 2, 0.5, 0.5, 3;
  b << 1, 0, Complex(0, 0.3), 0, 4, 0, Complex(0, -0.3), 0, 2;
  ComplexMatrix c = sample(3, 2).topRows(2);
  // composite Simpson on [0, 40]
  const int n = 32000;
  const double h = 40.0 / n;
  ComplexMatrix quad = ComplexMatrix::Zero(2, 3);
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    quad += w * taylor_exp_neg(a, i * h) * c * taylor_exp_neg(b, i * h);
  }
  quad *= h / 3.0;
  const ComplexMatrix x = sylvester_solve(a, b, c);
  CHECK(max_abs(x - quad) < 1e-9);
  CHECK(max_abs(a * x + x * b - c) < 1e-12);
}

TEST_CASE("sylvester_solve Schur path and singular detection") {
  ComplexMatrix a = sample(18, 3);
  a.diagonal().array() += 10.0;
  ComplexMatrix b = sample(17, 4);
  b.diagonal().array() += 10.0;
  ComplexMatrix c = sample(18, 5).leftCols(17);
  const ComplexMatrix x = sylvester_solve(a, b, c);
  CHECK(max_abs(a * x + x * b - c) < 1e-10);

  ComplexMatrix s(1, 1), t(1, 1);
  s << 2.0;
  t << -2.0;
  CHECK_THROWS_AS(sylvester_solve(s, t, s), SolverError);
}

TEST_CASE("nullspace and projectors") {
  ComplexMatrix m(2, 3);
  m << 1, 2, 3, 2, 4, 6;
  const Nullspace ns = nullspace(m);
  CHECK(ns.nullity == 2);
  CHECK(max_abs(m * ns.basis) < 1e-12);
  CHECK(max_abs(ns.basis.adjoint() * ns.basis - ComplexMatrix::Identity(2, 2)) < 1e-12);
  CHECK(rank(m) == 1);

  ComplexMatrix p = range_projector(m);
  CHECK(max_abs(p * p - p) < 1e-12);
  CHECK(std::abs(p.trace() - 1.0) < 1e-12);
  CHECK(min_singular_value(m) < 1e-12);
}

TEST_CASE("psd roots") {
  ComplexMatrix h(2, 2);
  h << 4, Complex(1, 1), Complex(1, -1), 3;
  const ComplexMatrix r = inv_sqrt_psd(h);
  CHECK(max_abs(r * h * r - ComplexMatrix::Identity(2, 2)) < 1e-13);
  const ComplexMatrix q = sqrt_psd(h);
  CHECK(max_abs(q * q - h) < 1e-13);

  ComplexMatrix neg(1, 1);
  neg << -1.0;
  CHECK_THROWS_AS(inv_sqrt_psd(neg), InputError);
  ComplexMatrix nh(2, 2);
  nh << 1, 2, 0, 1;
  CHECK_THROWS_AS(inv_sqrt_psd(nh), InputError);
  CHECK_THROWS_AS(is_hermitian(ComplexMatrix(2, 3), 1e-12), InputError);
}

TEST_CASE("count_eigenvalues_near") {
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d.diagonal() << 1.0, 1.0 + 1e-9, 5.0;
  CHECK(count_eigenvalues_near(d, 1.0, 1e-6) == 2);
  CHECK(count_eigenvalues_near(d, 5.0, 1e-6) == 1);
}

TEST_CASE("arg_det_unwrap follows a winding path") {
  std::vector<ComplexMatrix> path;
  const int n = 200;
  for (int i = 0; i <= n; ++i) {
    const double th = 4.0 * std::numbers::pi * i / n;
    ComplexMatrix m = ComplexMatrix::Identity(2, 2);
    m(0, 0) = std::polar(1.0, th);
    m(1, 1) = std::polar(2.0, -0.5 * th);
    path.push_back(m);
  }
  CHECK(arg_det_unwrap(path) == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-12));

  std::vector<ComplexMatrix> coarse{ComplexMatrix::Identity(1, 1), -ComplexMatrix::Identity(1, 1)};
  CHECK_THROWS_AS(arg_det_unwrap(coarse), GridTooCoarse);
  std::vector<ComplexMatrix> zero{ComplexMatrix::Zero(1, 1)};
  CHECK_THROWS_AS(arg_det_unwrap(zero), SolverError);
}

TEST_CASE("gmres solves identity plus low rank and flags singular operators") {
  const int n = 300;
  ComplexMatrix u(n, 3), w(n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < 3; ++j) {
      u(i, j) = Complex(std::exp(-0.01 * i * (j + 1)), 0.1 * j);
      w(i, j) = Complex(0.02 * std::cos(0.05 * i * (j + 1)), 0.0);
    }
  const ComplexMatrix op = ComplexMatrix::Identity(n, n) + u * w.transpose();
  ComplexVector b(n);
  for (int i = 0; i < n; ++i) b(i) = Complex(std::sin(0.1 * i), 1.0);
  const auto res = gmres([&](const ComplexVector& x, ComplexVector& y) { y = op * x; }, b);
  CHECK(res.converged);
  CHECK(res.iterations <= 6);
  CHECK((op * res.x - b).norm() / b.norm() < 1e-12);
  CHECK(res.hessenberg_smin > 1e-3);

  // I - P with P a rank-one orthogonal projector is singular
  ComplexVector e = ComplexVector::Ones(n) / std::sqrt(double(n));
  const ComplexMatrix sing = ComplexMatrix::Identity(n, n) - e * e.adjoint();
  const auto bad = gmres([&](const ComplexVector& x, ComplexVector& y) { y = sing * x; }, b, 1e-13, 20, 40);
  CHECK(bad.hessenberg_smin < 1e-8);
}
