#include <cmath>
#include <random>

#include "doctest.h"
#include "hls/model.hpp"

using namespace hls;

namespace {

ComplexMatrix mat(std::initializer_list<std::initializer_list<Complex>> rows) {
  ComplexMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (const auto& v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

ComplexMatrix random_invertible(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix t(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t(i, j) = Complex(g(rng), g(rng));
  t.diagonal().array() += 3.0;
  return t;
}

}  // namespace

TEST_CASE("boundary pair validation") {
  CHECK(check_boundary_pair(ComplexMatrix::Zero(2, 2), ComplexMatrix::Identity(2, 2)).ok());
  CHECK(check_boundary_pair(ComplexMatrix::Identity(2, 2), ComplexMatrix::Zero(2, 2)).ok());

  const auto bad = check_boundary_pair(ComplexMatrix::Identity(1, 1), Complex(0, 1) * ComplexMatrix::Identity(1, 1));
  CHECK_FALSE(bad.ok());
  CHECK(bad.symmetry_residual == doctest::Approx(2.0));
  CHECK_THROWS_AS(validate_boundary_pair(ComplexMatrix::Zero(1, 1), ComplexMatrix::Zero(1, 1)), InputError);
  CHECK_FALSE(check_boundary_pair(ComplexMatrix::Zero(2, 2), ComplexMatrix::Identity(3, 3)).ok());
}

TEST_CASE("boundary subspace and equivalence") {
  const auto dir = boundary_subspace(BoundaryPair::dirichlet(1)).projector;
  CHECK(numlin::max_abs(dir - mat({{0, 0}, {0, 1}})) < 1e-14);
  const auto neu = boundary_subspace(BoundaryPair::neumann(1)).projector;
  CHECK(numlin::max_abs(neu - mat({{1, 0}, {0, 0}})) < 1e-14);
  CHECK_FALSE(boundary_equivalent(BoundaryPair::dirichlet(1), BoundaryPair::neumann(1)));

  const BoundaryPair p{mat({{1}}), mat({{-1}})};
  const BoundaryPair q{mat({{2}}), mat({{-2}})};
  CHECK(boundary_distance(p, q) < 1e-12);

  // hermitian A^dagger B gives a valid pair; invariance under right multiplication
  std::mt19937_64 rng(7);
  const BoundaryPair r = BoundaryPair{ComplexMatrix::Identity(2, 2), mat({{-2, Complex(0, 1)}, {Complex(0, -1), 5}})}.times(mat({{1, 2}, {0, 3}}));
  REQUIRE(check_boundary_pair(r.A, r.B).ok());
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix t = random_invertible(2, rng);
    CHECK(boundary_distance(r, r.times(t)) < 1e-10);
  }
}

TEST_CASE("E-normalization identities") {
  const BoundaryPair r = BoundaryPair{ComplexMatrix::Identity(2, 2), mat({{-2, Complex(0, 1)}, {Complex(0, -1), 5}})}.times(mat({{1, 2}, {0, 3}}));
  const ComplexMatrix e = r.E();
  const ComplexMatrix einv2 = (e * e).inverse();
  CHECK(numlin::max_abs(r.A * einv2 * r.A.adjoint() + r.B * einv2 * r.B.adjoint() - ComplexMatrix::Identity(2, 2)) <
        1e-9);
  CHECK(numlin::max_abs(r.B * einv2 * r.A.adjoint() - r.A * einv2 * r.B.adjoint()) < 1e-9);
  const BoundaryPair nn = r.normalized();
  CHECK(numlin::max_abs(nn.A.adjoint() * nn.A + nn.B.adjoint() * nn.B - ComplexMatrix::Identity(2, 2)) < 1e-12);
  CHECK(boundary_distance(r, nn) < 1e-10);
}

TEST_CASE("boundary equivalence is an equivalence relation") {
  std::mt19937_64 rng(11);
  const BoundaryPair p{mat({{1, 0}, {0, 1}}), mat({{3, 1}, {1, 2}})};
  const BoundaryPair q = p.times(random_invertible(2, rng));
  const BoundaryPair s = q.times(random_invertible(2, rng));
  CHECK(boundary_equivalent(p, p));
  CHECK(boundary_equivalent(p, q) == boundary_equivalent(q, p));
  CHECK((boundary_equivalent(p, q) && boundary_equivalent(q, s) && boundary_equivalent(p, s)));
}

TEST_CASE("potential moments") {
  const auto z = potential_moments(Potential::zero(2));
  CHECK(z.sigma0 == 0.0);
  CHECK(z.sigma1 == 0.0);

  const Grid g = Grid::covering(0.0, 12.0, 0.01);
  std::vector<ComplexMatrix> vals;
  for (double x : g.points()) vals.push_back(ComplexMatrix::Constant(1, 1, -2.0 / std::pow(std::cosh(x), 2)));
  const Potential v = Potential::sampled(g, vals, 12.0);
  CHECK(check_potential(v).empty());
  const auto m = potential_moments(v);
  // |V| = 2 sech^2 x integrates to 2 tanh x; x |V| integrates to 2 (x tanh x - log cosh x)
  CHECK(m.sigma0 == doctest::Approx(2.0 * std::tanh(12.0)).epsilon(1e-4));
  CHECK(m.sigma1 == doctest::Approx(2.0 * (12.0 * std::tanh(12.0) - std::log(std::cosh(12.0)))).epsilon(1e-4));

  // spline interpolation between samples
  CHECK(std::abs(v(0.505)(0, 0) - (-2.0 / std::pow(std::cosh(0.505), 2))) < 1e-7);
  CHECK(std::abs(v(13.0)(0, 0)) == 0.0);
}

TEST_CASE("potential validation failures") {
  const Grid g = Grid::covering(0.0, 1.0, 0.1);
  std::vector<ComplexMatrix> vals;
  for (double x : g.points()) vals.push_back(ComplexMatrix::Constant(1, 1, 1.0 / x));
  const auto coulomb = check_potential(Potential::sampled(g, vals, 1.0));
  REQUIRE(coulomb.size() == 1);
  CHECK(coulomb[0].find("not integrable") != std::string::npos);

  std::vector<ComplexMatrix> nh(g.count, mat({{0, 1}, {0, 0}}));
  CHECK_FALSE(check_potential(Potential::sampled(g, nh, 1.0)).empty());
  std::vector<ComplexMatrix> ok(g.count, ComplexMatrix::Zero(1, 1));
  CHECK_FALSE(check_potential(Potential::sampled(g, ok, 0.5)).empty());
  CHECK_THROWS_AS(validate_potential(Potential::sampled(g, ok, 0.5)), InputError);
}

TEST_CASE("scattering data validation") {
  ScatteringData d;
  d.n = 1;
  d.repr = FsRepresentation{-ComplexMatrix::Identity(1, 1), {{ComplexMatrix::Constant(1, 1, 2.0), 1.0, 0}}, {}};
  CHECK(check_scattering_data(d).empty());
  CHECK(d.total_bound_states() == 0);

  d.bound_states = {{1.0, ComplexMatrix::Constant(1, 1, std::sqrt(2.0))}, {1.0, ComplexMatrix::Constant(1, 1, 1.0)}};
  CHECK(check_scattering_data(d).size() == 1);  // duplicate kappa
  d.bound_states.pop_back();
  CHECK(d.total_bound_states() == 1);

  ScatteringData bad;
  bad.n = 1;
  bad.repr = FsRepresentation{Complex(0, 1) * ComplexMatrix::Identity(1, 1),
                              {},
                              {{Complex(0, -2) * ComplexMatrix::Identity(1, 1), 1.0, 0}}};
  const auto issues = check_scattering_data(bad);
  CHECK(issues.size() == 3);  // s_inf not hermitian nor involutory, left C not hermitian
  CHECK_THROWS_AS(validate_scattering_data(bad), InputError);

  ScatteringData rank2;
  rank2.n = 2;
  rank2.repr = FsRepresentation{ComplexMatrix::Identity(2, 2), {}, {}};
  rank2.bound_states = {{1.0, std::sqrt(8.0) * ComplexMatrix::Identity(2, 2)}};
  CHECK(rank2.total_bound_states() == 2);
}
