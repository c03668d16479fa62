#include <cmath>
#include <set>

#include <boost/math/differentiation/finite_difference.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <doctest.h>

#include "hls/marchenko.hpp"
#include "hls/oracle.hpp"

using namespace hls;
using namespace hls::oracle;

namespace {

ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

// Entry-wise exp-sinh quadrature of a matrix function over [a, inf).
ComplexMatrix integrate_tail(const std::function<ComplexMatrix(double)>& f, double a, std::size_t n) {
  boost::math::quadrature::exp_sinh<double> q;
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double re = q.integrate([&](double z) { return f(z)(i, j).real(); }, a, INFINITY);
      const double im = q.integrate([&](double z) { return f(z)(i, j).imag(); }, a, INFINITY);
      out(i, j) = Complex(re, im);
    }
  return out;
}

bool singular_at_origin(const OracleExample& e) {
  return e.name == "marchenko_singular" || e.name == "one_bs_needed";
}

}  // namespace

TEST_CASE("catalog listing and lookup") {
  const auto list = list_examples();
  CHECK(list.size() >= 15);
  std::set<std::string> names;
  for (const auto& s : list) names.insert(s.name);
  CHECK(names.size() == list.size());
  CHECK(list.front().name == "sech2_dirichlet");
  CHECK(get_example("sech2_dirichlet").overall == Overall::pass);
  CHECK(get_example("levinson_violation").overall == Overall::fail);
  CHECK(to_string(get_example("levinson_violation").overall) == "fail");
  CHECK_THROWS_AS(get_example("no_such_example"), InputError);
  // stable ordering across calls
  const auto again = list_examples();
  for (std::size_t i = 0; i < list.size(); ++i) CHECK(again[i].name == list[i].name);
}

TEST_CASE("stored F_s terms reproduce the rational scattering matrices") {
  for (const auto& e : catalog()) {
    if (!e.s_closed) continue;
    CAPTURE(e.name);
    CHECK(structural_issues(e.data).empty());
    for (double k : {0.1, 0.5, 1.3, 4.0, 25.0}) {
      CHECK(numlin::max_abs(marchenko::s_from_data(e.data, k) - e.s_closed(k)) < 1e-12);
      CHECK(numlin::max_abs(marchenko::s_from_data(e.data, -k) - e.s_closed(-k)) < 1e-12);
    }
  }
}

TEST_CASE("G1 and S_inf values from the worked examples") {
  const std::vector<std::pair<std::string, ComplexMatrix>> g1 = {
      {"sech2_dirichlet", ComplexMatrix::Constant(1, 1, 2.0)},
      {"nonunitary_s", ComplexMatrix::Constant(1, 1, 1.0)},
      {"asym_s", ComplexMatrix::Constant(1, 1, 2.0 * kI)},
      {"marchenko_singular", ComplexMatrix::Constant(1, 1, -2.0)},
      {"levinson_violation", ComplexMatrix::Constant(1, 1, 4.0)},
      {"one_bs_needed", ComplexMatrix::Constant(1, 1, -4.0)},
      {"null2_2x2", mat2(-7, -1, -1, -7) / 3.0},
      {"nonunitary_2x2", mat2(7, -1, -1, -7) / 3.0},
      {"nonsym_2x2", mat2(7, -1, 1, -7) / 3.0},
      {"nonunitary_offdiag", mat2(2, 0, 0, 4)},
  };
  for (const auto& [name, want] : g1) {
    CAPTURE(name);
    CHECK(numlin::max_abs(marchenko::g1_from_data(get_example(name).data) - want) < 1e-14);
  }
  // S(0) of the 2x2 example swaps the channels
  CHECK(numlin::max_abs(get_example("null2_2x2").s_closed(0.0) - mat2(0, 1, 1, 0)) < 1e-15);
  CHECK(numlin::max_abs(get_example("asym_s").data.s_inf() - ComplexMatrix::Constant(1, 1, kI)) == 0.0);
}

TEST_CASE("closed-form kernels satisfy the Marchenko equation") {
  for (const auto& e : catalog()) {
    if (!e.k_closed) continue;
    CAPTURE(e.name);
    const auto F = [&](double y) { return marchenko::f_eval(e.data, y); };
    const double x0 = singular_at_origin(e) ? 0.1 : 0.0;
    for (double x : {x0, 0.5, 1.5, 3.0})
      for (double y : {x, x + 0.7, x + 2.5}) {
        const ComplexMatrix integral =
            integrate_tail([&](double z) { return ComplexMatrix(e.k_closed(x, z) * F(z + y)); }, x, e.n);
        const ComplexMatrix res = e.k_closed(x, y) + F(x + y) + integral;
        CHECK(numlin::max_abs(res) < 1e-9);
      }
  }
}

TEST_CASE("closed-form potentials equal -2 d/dx K(x,x)") {
  using boost::math::differentiation::finite_difference_derivative;
  for (const auto& e : catalog()) {
    if (!e.k_closed || !e.potential) continue;
    CAPTURE(e.name);
    for (double x = 0.1; x <= 6.0; x += 0.3) {
      const ComplexMatrix v = (*e.potential)(x);
      for (std::size_t i = 0; i < e.n; ++i)
        for (std::size_t j = 0; j < e.n; ++j) {
          // differentiate in u = log x; the singular entries behave like 1/x near the origin
          auto kd = [&](double u) { return e.k_closed(std::exp(u), std::exp(u))(i, j).real(); };
          const double want = -2.0 * finite_difference_derivative<decltype(kd), double, 6>(kd, std::log(x)) / x;
          CHECK(std::abs(v(i, j) - want) < 1e-8 * std::max(1.0, std::abs(want)));
        }
    }
  }
}

TEST_CASE("K(0,0) values from the worked examples") {
  const std::vector<std::pair<std::string, ComplexMatrix>> k00 = {
      {"sech2_dirichlet", ComplexMatrix::Constant(1, 1, -1.0)},
      {"free_one_bs", ComplexMatrix::Zero(1, 1)},
      {"one_bs_family", ComplexMatrix::Constant(1, 1, 2.0)},
      {"rank2_bs_2x2", -2.0 / 9.0 * ComplexMatrix::Ones(2, 2)},
      {"two_bs_2x2", 4.0 / 3.0 * ComplexMatrix::Identity(2, 2)},
      {"nonunitary_offdiag", mat2(2, -8, -8, 2) / 15.0},
      {"scalar_two_pole", ComplexMatrix::Constant(1, 1, -3.0)},
  };
  for (const auto& [name, want] : k00) {
    CAPTURE(name);
    CHECK(numlin::max_abs(get_example(name).k_closed(0.0, 0.0) - want) < 1e-14);
    // and the separable solver agrees
    const auto sol = marchenko::solve_marchenko_separable(get_example(name).data, 0.0, false);
    CHECK(numlin::max_abs(sol.K_diag - want) < 1e-12);
  }
}

TEST_CASE("matrix-exponential example: m, e^{-ay} and (a - ik)^{-1}") {
  ComplexMatrix a(3, 3), c(3, 3);
  a << 3, -1, 0, -1, 3, 0, 0, 0, 2;
  c << 1, 0, 0, 0, 2, 1, 0, 1, 1;
  const ComplexMatrix m = numlin::sylvester_solve(a, a, c * c);
  CHECK(std::abs(m(0, 0) - 11.0 / 48.0) < 1e-12);
  CHECK(std::abs(m(0, 1) - 3.0 / 16.0) < 1e-12);
  CHECK(std::abs(m(0, 2) - 1.0 / 8.0) < 1e-12);
  CHECK(std::abs(m(1, 1) - 43.0 / 48.0) < 1e-12);
  CHECK(std::abs(m(1, 2) - 5.0 / 8.0) < 1e-12);
  CHECK(std::abs(m(2, 2) - 1.0 / 2.0) < 1e-12);
  CHECK(numlin::max_abs(m - m.transpose()) < 1e-12);
  for (double y : {0.0, 0.25, 1.0, 3.0}) {
    const double p = std::exp(-2.0 * y), q = std::exp(-4.0 * y);
    ComplexMatrix want(3, 3);
    want << p + q, p - q, 0, p - q, p + q, 0, 0, 0, 2 * p;
    CHECK(numlin::max_abs(numlin::mat_exp(a, y) - want / 2.0) < 1e-12);
  }
  for (double k : {-2.0, 0.0, 0.7, 5.0}) {
    const Complex d = std::pow(k + 2.0 * kI, 2) * (k + 4.0 * kI);
    ComplexMatrix want(3, 3);
    want << kI * (k + 2.0 * kI) * (k + 3.0 * kI), -(k + 2.0 * kI), 0, -(k + 2.0 * kI),
        kI * (k + 2.0 * kI) * (k + 3.0 * kI), 0, 0, 0, kI * (k + 2.0 * kI) * (k + 4.0 * kI);
    const ComplexMatrix inv = (a - kI * k * ComplexMatrix::Identity(3, 3)).inverse();
    CHECK(numlin::max_abs(inv - want / d) < 1e-12);
  }
  // e^{-a y} e^{-a z} = e^{-a (y + z)} and commutation with a
  CHECK(numlin::max_abs(numlin::mat_exp(a, 0.3) * numlin::mat_exp(a, 0.9) - numlin::mat_exp(a, 1.2)) < 1e-13);
  CHECK(numlin::max_abs(a * numlin::mat_exp(a, 0.5) - numlin::mat_exp(a, 0.5) * a) < 1e-13);
}

TEST_CASE("stored potentials and boundary pairs are valid where the data are in the class") {
  for (const auto& e : catalog()) {
    CAPTURE(e.name);
    if (e.boundary) CHECK(check_boundary_pair(e.boundary->A, e.boundary->B).ok());
    if (e.direct_boundary) CHECK(check_boundary_pair(e.direct_boundary->A, e.direct_boundary->B).ok());
    if (e.marchenko_class()) {
      REQUIRE(e.potential.has_value());
      REQUIRE(e.boundary.has_value());
      CHECK(check_potential(*e.potential).empty());
      CHECK(check_scattering_data(e.data).empty());
      CHECK(e.levinson_n.has_value());
      CHECK(static_cast<double>(e.data.total_bound_states()) == *e.levinson_n);
    }
  }
  const Issues coulomb = check_potential(truncated_coulomb());
  REQUIRE_FALSE(coulomb.empty());
  CHECK(coulomb[0].find("not integrable") != std::string::npos);
}

TEST_CASE("stored nullities agree with the finite-rank operator") {
  for (const auto& e : catalog()) {
    CAPTURE(e.name);
    const std::size_t n = e.n;
    if (e.f_nullity) {
      const separable::FiniteRankKernel k(marchenko::f_terms(e.data), n);
      CHECK(separable::operator_nullity(k, 1.0).nullity == *e.f_nullity);
    }
    if (e.fs_nullity) {
      const separable::FiniteRankKernel k(e.data.fs().right_terms, n);
      CHECK(separable::operator_nullity(k, 1.0).nullity == *e.fs_nullity);
    }
    if (e.left_nullity) {
      const separable::FiniteRankKernel k(marchenko::left_terms(e.data), n);
      CHECK(separable::operator_nullity(k, -1.0).nullity == *e.left_nullity);
    }
  }
}
