#include <cmath>
#include <numbers>

#include <doctest.h>

#include "hls/direct.hpp"
#include "jost_oracle.hpp"

using namespace hls;
using namespace hls::direct;

namespace {

ComplexMatrix m1(Complex v) { return ComplexMatrix::Constant(1, 1, v); }

Potential sech2() {
  return Potential::catalog(1, "sech2", [](double x) {
    const double c = std::cosh(x);
    return m1(-2.0 / (c * c));
  });
}

// 2x2 potential with two bound states and a non-diagonal boundary
Potential offdiag_v() {
  return Potential::catalog(2, "offdiag", [](double x) {
    // divided through by e^{8x} to avoid overflow at large x
    const double d = 16.0 - std::exp(-4 * x);
    ComplexMatrix v(2, 2);
    const double off = (-32.0 * std::exp(-6 * x) - 512.0 * std::exp(-2 * x)) / (d * d);
    v << 256.0 * std::exp(-4 * x) / (d * d), off, off, 256.0 * std::exp(-4 * x) / (d * d);
    return v;
  }, 20.0);
}

// The pair that reproduces the printed Jost matrix and its zeros.
BoundaryPair offdiag_pair() {
  ComplexMatrix b(2, 2);
  b << -17, 8, 8, -17;
  return {ComplexMatrix::Identity(2, 2), b / 5.0};
}

}  // namespace

TEST_CASE("free potential: Jost values, Jost matrix and S") {
  const Potential zero = Potential::zero(2);
  for (Complex k : {Complex(0.7, 0.0), Complex(-3.0, 0.0), Complex(0.0, 2.0)}) {
    const JostValues jv = jost_solve(zero, k);
    CHECK(numlin::max_abs(jv.f0 - ComplexMatrix::Identity(2, 2)) < 1e-15);
    CHECK(numlin::max_abs(jv.fp0 - kI * k * ComplexMatrix::Identity(2, 2)) < 1e-15);
  }
  CHECK(numlin::max_abs(jost_matrix(zero, BoundaryPair::dirichlet(2), 1.3) - ComplexMatrix::Identity(2, 2)) < 1e-15);
  CHECK(numlin::max_abs(jost_matrix(zero, BoundaryPair::neumann(2), 1.3) + 1.3 * kI * ComplexMatrix::Identity(2, 2)) <
        1e-15);
  CHECK(numlin::max_abs(scattering_matrix(zero, BoundaryPair::dirichlet(2), 2.0) + ComplexMatrix::Identity(2, 2)) < 1e-15);
  CHECK(numlin::max_abs(scattering_matrix(zero, BoundaryPair::neumann(2), 2.0) - ComplexMatrix::Identity(2, 2)) < 1e-15);
  CHECK(find_bound_states(zero, BoundaryPair::dirichlet(2)).empty());
  CHECK_THROWS_AS(jost_solve(zero, Complex(1.0, -0.1)), InputError);
}

TEST_CASE("sech^2 with Dirichlet condition") {
  const Potential v = sech2();
  const BoundaryPair dir = BoundaryPair::dirichlet(1);
  for (double k : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    CHECK(std::abs(jost_solve(v, k).f0(0, 0) - k / (k + kI)) < 1e-9);
    CHECK(std::abs(jost_matrix(v, dir, k)(0, 0) - k / (k + kI)) < 1e-9);
    CHECK(std::abs(scattering_matrix(v, dir, k)(0, 0) + (k + kI) / (k - kI)) < 1e-9);
  }
  CHECK(std::abs(scattering_matrix(v, dir, 2.0)(0, 0) - Complex(-3.0, -4.0) / 5.0) < 1e-9);
  CHECK(std::abs(scattering_matrix(v, dir, -2.0)(0, 0) - std::conj(Complex(-3.0, -4.0) / 5.0)) < 1e-9);
  Issues w;
  scattering_matrix(v, dir, 0.0, &w);
  CHECK(w.size() == 1);
  CHECK(find_bound_states(v, dir).empty());
  const AsymptoticData as = s_inf_and_g1(v, dir);
  CHECK(std::abs(as.s_inf(0, 0) + 1.0) < 1e-15);
  CHECK(std::abs(as.g1(0, 0) - 2.0) < 1e-4);
}

TEST_CASE("ODE Jost solution agrees with the Volterra iteration") {
  const Potential v = sech2();
  for (double k : {0.5, 1.7, 4.0}) {
    // Richardson on the trapezoid error (h^2)
    const Complex coarse = testing::volterra_jost0(k, 2e-3), fine = testing::volterra_jost0(k, 1e-3);
    const Complex oracle = (4.0 * fine - coarse) / 3.0;
    CHECK(std::abs(jost_solve(v, k).f0(0, 0) - oracle) < 1e-7);
  }
}

TEST_CASE("Jost solution samples satisfy the differential equation") {
  const Potential v = sech2();
  const double k = 1.3, h = 1e-3;
  const JostValues jv = jost_solve(v, k, Grid{1.0, h, 3});
  const auto& f = jv.samples->value;
  const Complex second = (f[2](0, 0) - 2.0 * f[1](0, 0) + f[0](0, 0)) / (h * h);
  const Complex resid = -second + v(1.0 + h)(0, 0) * f[1](0, 0) - k * k * f[1](0, 0);
  CHECK(std::abs(resid) < 1e-5);
  // closed form f(k,x) = e^{ikx}(1 - i/(k+i) e^{-x}/cosh x)
  for (std::size_t i = 0; i < 3; ++i) {
    const double x = 1.0 + i * h;
    CHECK(std::abs(f[i](0, 0) - std::exp(kI * k * x) * (1.0 - kI / (k + kI) * std::exp(-x) / std::cosh(x))) < 1e-9);
  }
}

TEST_CASE("regular and physical solutions") {
  const Grid g{0.0, 0.25, 21};
  const Potential zero = Potential::zero(1);
  const double k = 1.7;
  const SolutionSamples sd = regular_solution(zero, BoundaryPair::dirichlet(1), k, g);
  const SolutionSamples sn = regular_solution(zero, BoundaryPair::neumann(1), k, g);
  const SolutionSamples pd = physical_solution(zero, BoundaryPair::dirichlet(1), k, g);
  for (std::size_t i = 0; i < g.count; ++i) {
    const double x = g.at(i);
    CHECK(std::abs(sd.value[i](0, 0) - std::sin(k * x) / k) < 1e-9);
    CHECK(std::abs(sn.value[i](0, 0) - std::cos(k * x)) < 1e-9);
    CHECK(std::abs(pd.value[i](0, 0) + 2.0 * kI * std::sin(k * x)) < 1e-12);
  }

  const Potential v = sech2();
  const BoundaryPair dir = BoundaryPair::dirichlet(1);
  const double k1 = 1.0;
  const SolutionSamples phi = regular_solution(v, dir, k1, g);
  const SolutionSamples psi = physical_solution(v, dir, k1, g);
  const Complex j = jost_matrix(v, dir, k1)(0, 0);
  for (std::size_t i = 0; i < g.count; ++i) {
    const double x = g.at(i);
    CHECK(std::abs(-2.0 * kI * k1 * phi.value[i](0, 0) / j - psi.value[i](0, 0)) < 1e-6);
    const Complex want =
        -2.0 * kI * k1 / (k1 - kI) * std::sin(k1 * x) - 2.0 * kI / (k1 - kI) * std::cos(k1 * x) * std::tanh(x);
    CHECK(std::abs(psi.value[i](0, 0) - want) < 1e-6);
  }
  // boundary residual -B^dagger Psi(0) + A^dagger Psi'(0), and Psi'(k,0) = -2i(k+i)
  CHECK(std::abs(-psi.value[0](0, 0)) < 1e-6);
  CHECK(std::abs(psi.derivative[0](0, 0) + 2.0 * kI * (k1 + kI)) < 1e-6);
  const BoundaryPair robin{m1(1.0), m1(0.4)};
  const SolutionSamples pr = physical_solution(v, robin, 2.5, g);
  CHECK(std::abs(-0.4 * pr.value[0](0, 0) + pr.derivative[0](0, 0)) < 1e-6);
}

TEST_CASE("bound state of the free potential with a Robin condition") {
  const Potential zero = Potential::zero(1);
  const BoundaryPair pair{m1(1.0), m1(-1.0)};
  const auto roots = find_bound_states(zero, pair);
  REQUIRE(roots.size() == 1);
  CHECK(roots[0].kappa == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(roots[0].multiplicity == 1);
  const Normalization nm = bound_normalization(zero, pair, roots[0].kappa);
  CHECK(std::abs(nm.A(0, 0) - 0.5) < 1e-8);
  CHECK(std::abs(nm.M(0, 0) - std::sqrt(2.0)) < 1e-8);
}

TEST_CASE("2x2 example with two bound states") {
  const Potential v = offdiag_v();
  const BoundaryPair pair = offdiag_pair();
  // Jost solution closed form f(k,0) = I + i/(15(k+i)) [[2,-8],[-8,2]]
  ComplexMatrix c(2, 2);
  c << 2, -8, -8, 2;
  for (Complex k : {Complex(1.0, 0.0), Complex(-2.0, 0.0), Complex(0.0, 1.5)}) {
    const ComplexMatrix want = ComplexMatrix::Identity(2, 2) + kI / (15.0 * (k + kI)) * c;
    CHECK(numlin::max_abs(jost_solve(v, k).f0 - want) < 1e-9);
  }
  // S(k) = -J(-k) J(k)^{-1} with J(k) = [[-i(225k^2 - 510ik + 931), 16(15k + 34i)], [same, same]] / (225(k+i))
  auto s_exact = [](Complex k) {
    const Complex den = (9.0 * k * k - 30.0 * kI * k + 59.0) * (25.0 * k * k - 30.0 * kI * k + 43.0);
    const Complex d = (k + kI) * (k + kI) * (225.0 * k * k + 2537.0) / den;
    const Complex o = -480.0 * kI * k * (k * k - 1.0) * (k + kI) / ((k - kI) * den);
    ComplexMatrix s(2, 2);
    s << d, o, o, d;
    return s;
  };
  for (double k : {0.3, 1.0, 4.0}) CHECK(numlin::max_abs(scattering_matrix(v, pair, k) - s_exact(k)) < 1e-6);

  const auto roots = find_bound_states(v, pair);
  REQUIRE(roots.size() == 2);
  // the pair recovered from the non-unitary data has no bound states with this potential
  ComplexMatrix b2(2, 2);
  b2 << 13, 8, 8, 28;
  CHECK(find_bound_states(v, {ComplexMatrix::Identity(2, 2), b2 / 15.0}).empty());
  const double k1 = (3.0 + 2.0 * std::sqrt(13.0)) / 5.0, k2 = (5.0 + 2.0 * std::sqrt(21.0)) / 3.0;
  CHECK(std::abs(roots[0].kappa - k1) < 1e-6);
  CHECK(std::abs(roots[1].kappa - k2) < 1e-6);
  CHECK(roots[0].multiplicity == 1);
  CHECK(roots[1].multiplicity == 1);

  const ComplexMatrix ones = ComplexMatrix::Ones(2, 2);
  ComplexMatrix alt(2, 2);
  alt << 1, -1, -1, 1;
  const ComplexMatrix m1_exact = std::sqrt(49.0 + 181.0 / std::sqrt(13.0)) / (4.0 * std::sqrt(5.0)) * ones;
  const ComplexMatrix m2_exact = std::sqrt(147.0 + 211.0 * std::sqrt(3.0 / 7.0)) / 12.0 * alt;
  const Normalization n1 = bound_normalization(v, pair, roots[0].kappa, 1);
  const Normalization n2 = bound_normalization(v, pair, roots[1].kappa, 1);
  CHECK(numlin::max_abs(n1.M - m1_exact) < 1e-6);
  CHECK(numlin::max_abs(n2.M - m2_exact) < 1e-6);

  // normalization: int Psi_j^dagger Psi_j = P_j, and orthogonality of the two bound states
  const Grid g{0.0, 0.002, 10001};
  const auto p1 = bound_state_function(v, roots[0].kappa, n1.M, g);
  const auto p2 = bound_state_function(v, roots[1].kappa, n2.M, g);
  ComplexMatrix i11 = ComplexMatrix::Zero(2, 2), i12 = ComplexMatrix::Zero(2, 2);
  for (std::size_t i = 0; i < g.count; ++i) {
    // Simpson weights (count is odd)
    const double w = g.step / 3.0 * ((i == 0 || i + 1 == g.count) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0));
    i11 += w * p1[i].adjoint() * p1[i];
    i12 += w * p1[i].adjoint() * p2[i];
  }
  CHECK(numlin::max_abs(i11 - n1.P) < 1e-6);
  CHECK(numlin::max_abs(i12) < 1e-5);
}

TEST_CASE("S is unchanged by right multiplication of the boundary pair") {
  const Potential v = offdiag_v();
  const BoundaryPair pair = offdiag_pair();
  ComplexMatrix t(2, 2);
  t << Complex(1.0, 0.5), 2.0, -0.3, Complex(0.7, -1.0);
  for (double k : {0.2, 0.9, 1.6, 2.4, 3.3, 5.0, 7.5, 11.0, 16.0, 25.0}) {
    CHECK(numlin::max_abs(scattering_matrix(v, pair, k) - scattering_matrix(v, pair.times(t), k)) < 1e-8);
  }
}

TEST_CASE("s_inf from the boundary pair") {
  CHECK(numlin::max_abs(s_inf_from_boundary(BoundaryPair::dirichlet(2)) + ComplexMatrix::Identity(2, 2)) < 1e-15);
  CHECK(numlin::max_abs(s_inf_from_boundary(BoundaryPair::neumann(2)) - ComplexMatrix::Identity(2, 2)) < 1e-15);
  ComplexMatrix a(2, 2), b(2, 2);
  a << 1, 0, 0, 0;
  b << 0.5, 0, 0, 1;
  ComplexMatrix want(2, 2);
  want << 1, 0, 0, -1;
  CHECK(numlin::max_abs(s_inf_from_boundary({a, b}) - want) < 1e-14);
  const AsymptoticData as = s_inf_and_g1(Potential::zero(2), BoundaryPair::neumann(2));
  CHECK(numlin::max_abs(as.g1) < 1e-10);
}

TEST_CASE("direct pipeline on sech^2") {
  DirectOptions opt;
  opt.k_points = 100;
  opt.k_max = 10.0;
  const DirectResult r = solve_direct(sech2(), BoundaryPair::dirichlet(1), opt);
  CHECK(r.bound_states.empty());
  CHECK(r.max_unitarity_defect < 1e-8);
  CHECK(r.warnings.empty());
  for (std::size_t i = 0; i < r.k_grid.count; ++i) {
    const double k = r.k_grid.at(i);
    CHECK(std::abs(r.s_values[i](0, 0) + (k + kI) / (k - kI)) < 1e-8);
  }
  CHECK(std::abs(r.g1(0, 0) - 2.0) < 1e-4);
  const ScatteringData d = r.scattering_data();
  CHECK(d.sampled().s_values.size() == 100);
}
