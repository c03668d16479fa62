#include "hls/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <Eigen/Eigenvalues>

namespace hls {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

std::string join(const Issues& issues) {
  std::string out;
  for (const auto& s : issues) {
    if (!out.empty()) out += "; ";
    out += s;
  }
  return out;
}

}  // namespace

std::vector<double> Grid::points() const {
  std::vector<double> p(count);
  for (std::size_t i = 0; i < count; ++i) p[i] = at(i);
  return p;
}

Grid Grid::covering(double a, double b, double step) {
  if (!(step > 0.0) || !(b >= a)) throw InputError("Grid::covering: need step > 0 and b >= a");
  const auto intervals = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / step - 1e-9)));
  return {a, (b - a) / static_cast<double>(intervals), intervals + 1};
}

// ---------------------------------------------------------------- boundary

ComplexMatrix BoundaryPair::E() const { return numlin::sqrt_psd(A.adjoint() * A + B.adjoint() * B); }

BoundaryPair BoundaryPair::normalized() const {
  const ComplexMatrix einv = numlin::inv_sqrt_psd(numlin::hermitize(A.adjoint() * A + B.adjoint() * B));
  return {A * einv, B * einv};
}

BoundaryPair BoundaryPair::dirichlet(std::size_t n) {
  const auto m = static_cast<Eigen::Index>(n);
  return {ComplexMatrix::Zero(m, m), ComplexMatrix::Identity(m, m)};
}

BoundaryPair BoundaryPair::neumann(std::size_t n) {
  const auto m = static_cast<Eigen::Index>(n);
  return {ComplexMatrix::Identity(m, m), ComplexMatrix::Zero(m, m)};
}

BoundaryReport check_boundary_pair(const ComplexMatrix& a, const ComplexMatrix& b) {
  BoundaryReport rep;
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    rep.issues.push_back("A and B must be square of equal size (got " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " and " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()) + ")");
    return rep;
  }
  if (!numlin::all_finite(a) || !numlin::all_finite(b)) {
    rep.issues.push_back("A or B has non-finite entries");
    return rep;
  }
  const Eigen::Index n = a.rows();
  const ComplexMatrix gram = numlin::hermitize(a.adjoint() * a + b.adjoint() * b);
  const double scale = std::max(1.0, numlin::max_abs(gram));
  rep.symmetry_residual = numlin::max_abs(b.adjoint() * a - a.adjoint() * b);
  if (rep.symmetry_residual > 1e-10 * scale) {
    rep.issues.push_back("B^dagger A - A^dagger B is not zero (max entry " + fmt(rep.symmetry_residual) + ")");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gram, Eigen::EigenvaluesOnly);
  const double lmax = es.eigenvalues()(n - 1);
  const double lmin = es.eigenvalues()(0);
  rep.definiteness = lmax > 0.0 ? lmin / lmax : 0.0;
  if (!(rep.definiteness > 1e-10)) {
    rep.issues.push_back("A^dagger A + B^dagger B is not positive definite (eigenvalue ratio " +
                         fmt(rep.definiteness) + ")");
  }
  ComplexMatrix stacked(2 * n, n);
  stacked << a, b;
  rep.stacked_rank = numlin::rank(stacked, 1e-10);
  if (rep.stacked_rank != static_cast<std::size_t>(n)) {
    rep.issues.push_back("stacked [A; B] has rank " + std::to_string(rep.stacked_rank) + ", expected " +
                         std::to_string(n));
  }
  return rep;
}

BoundaryPair validate_boundary_pair(const ComplexMatrix& a, const ComplexMatrix& b) {
  const BoundaryReport rep = check_boundary_pair(a, b);
  if (!rep.ok()) throw InputError("invalid boundary pair: " + join(rep.issues));
  return {a, b};
}

BoundarySubspace boundary_subspace(const BoundaryPair& pair) {
  const Eigen::Index n = pair.A.rows();
  ComplexMatrix map(n, 2 * n);
  map << -pair.B.adjoint(), pair.A.adjoint();
  const numlin::Nullspace ns = numlin::nullspace(map, 1e-10);
  if (ns.nullity != static_cast<std::size_t>(n)) {
    throw SolverError("boundary_subspace: kernel has dimension " + std::to_string(ns.nullity) + ", expected " +
                      std::to_string(n));
  }
  return {ns.basis * ns.basis.adjoint()};
}

double boundary_distance(const BoundaryPair& p1, const BoundaryPair& p2) {
  if (p1.n() != p2.n()) throw InputError("boundary_distance: dimension mismatch");
  return numlin::norm2(boundary_subspace(p1).projector - boundary_subspace(p2).projector);
}

bool boundary_equivalent(const BoundaryPair& p1, const BoundaryPair& p2, double tol) {
  return boundary_distance(p1, p2) <= tol;
}

// ---------------------------------------------------------------- potential

struct Potential::Spline {
  // one spline per (entry, real/imag); index 2*(i*n+j) + part
  std::vector<boost::math::interpolators::cardinal_cubic_b_spline<double>> parts;
  double lo = 0.0;
  double hi = 0.0;
};

Potential::Potential(std::size_t n, Variant v, double x_cut) : n_(n), variant_(std::move(v)), x_cut_(x_cut) {
  if (auto* s = std::get_if<SampledPotential>(&variant_)) {
    if (s->grid.count >= 4 && s->values.size() == s->grid.count && s->grid.step > 0.0) {
      auto sp = std::make_shared<Spline>();
      sp->lo = s->grid.start;
      sp->hi = s->grid.last();
      const auto m = static_cast<Eigen::Index>(n);
      for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
          for (int part = 0; part < 2; ++part) {
            std::vector<double> ys(s->values.size());
            for (std::size_t t = 0; t < ys.size(); ++t) {
              const Complex z = s->values[t](i, j);
              ys[t] = part == 0 ? z.real() : z.imag();
            }
            sp->parts.emplace_back(ys.begin(), ys.end(), s->grid.start, s->grid.step);
          }
        }
      }
      spline_ = std::move(sp);
    }
  }
}

Potential Potential::zero(std::size_t n, double x_cut) { return {n, ZeroPotential{}, x_cut}; }

Potential Potential::sampled(Grid grid, std::vector<ComplexMatrix> values, double x_cut) {
  const std::size_t n = values.empty() ? 0 : static_cast<std::size_t>(values.front().rows());
  return {n, SampledPotential{grid, std::move(values)}, x_cut};
}

Potential Potential::catalog(std::size_t n, std::string name, std::function<ComplexMatrix(double)> eval,
                             double x_cut) {
  return {n, CatalogPotential{std::move(name), std::move(eval)}, x_cut};
}

Potential Potential::with_x_cut(double x_cut) const {
  Potential p = *this;
  p.x_cut_ = x_cut;
  return p;
}

ComplexMatrix Potential::operator()(double x) const {
  const auto m = static_cast<Eigen::Index>(n_);
  if (x > x_cut_) return ComplexMatrix::Zero(m, m);
  return std::visit(
      [&](const auto& v) -> ComplexMatrix {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ZeroPotential>) {
          return ComplexMatrix::Zero(m, m);
        } else if constexpr (std::is_same_v<T, CatalogPotential>) {
          return v.eval(x);
        } else {
          if (!spline_ || x < spline_->lo || x > spline_->hi) return ComplexMatrix::Zero(m, m);
          ComplexMatrix out(m, m);
          for (Eigen::Index i = 0; i < m; ++i) {
            for (Eigen::Index j = 0; j < m; ++j) {
              const auto idx = static_cast<std::size_t>(2 * (i * m + j));
              out(i, j) = Complex(spline_->parts[idx](x), spline_->parts[idx + 1](x));
            }
          }
          return out;
        }
      },
      variant_);
}

namespace {

// (x, V(x)) pairs used by validation and moments.
std::vector<std::pair<double, ComplexMatrix>> samples(const Potential& v) {
  std::vector<std::pair<double, ComplexMatrix>> out;
  if (const auto* s = std::get_if<SampledPotential>(&v.variant())) {
    for (std::size_t i = 0; i < s->values.size() && i < s->grid.count; ++i) {
      out.emplace_back(s->grid.at(i), s->values[i]);
    }
  } else if (std::holds_alternative<CatalogPotential>(v.variant())) {
    const Grid g = Grid::covering(0.0, v.x_cut(), 0.01);
    for (std::size_t i = 0; i < g.count; ++i) out.emplace_back(g.at(i), v(g.at(i)));
  }
  return out;
}

}  // namespace

Issues check_potential(const Potential& v) {
  Issues issues;
  if (v.n() == 0) issues.push_back("potential dimension must be positive");
  if (!(v.x_cut() > 0.0)) issues.push_back("x_cut must be positive");
  if (const auto* s = std::get_if<SampledPotential>(&v.variant())) {
    if (!s->grid.valid()) issues.push_back("sampling grid needs step > 0 and count > 0");
    if (s->values.size() != s->grid.count) {
      issues.push_back("grid has " + std::to_string(s->grid.count) + " points but " +
                       std::to_string(s->values.size()) + " values were given");
    }
    if (s->grid.count > 0 && v.x_cut() < s->grid.last() - 1e-12) {
      issues.push_back("x_cut " + fmt(v.x_cut()) + " lies before the last grid point " + fmt(s->grid.last()));
    }
    if (s->grid.count > 0 && s->grid.count < 4) issues.push_back("sampled potential needs at least 4 points");
  }
  if (!issues.empty()) return issues;
  for (const auto& [x, m] : samples(v)) {
    if (m.rows() != static_cast<Eigen::Index>(v.n()) || m.cols() != static_cast<Eigen::Index>(v.n())) {
      issues.push_back("value at x=" + fmt(x) + " has wrong shape");
      break;
    }
    if (!numlin::all_finite(m)) {
      issues.push_back("potential is not integrable: non-finite value at x=" + fmt(x));
      break;
    }
    if (!numlin::is_hermitian(m, 1e-10 * std::max(1.0, numlin::max_abs(m)))) {
      issues.push_back("potential is not hermitian at x=" + fmt(x));
      break;
    }
  }
  return issues;
}

void validate_potential(const Potential& v) {
  const Issues issues = check_potential(v);
  if (!issues.empty()) throw InputError("invalid potential: " + join(issues));
}

Moments potential_moments(const Potential& v) {
  Moments mom;
  if (v.is_zero()) return mom;
  const auto s = samples(v);
  if (s.empty()) throw InputError("potential_moments: empty grid");
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double x0 = s[i - 1].first;
    const double x1 = std::min(s[i].first, v.x_cut());
    if (x1 <= x0) break;
    const double a0 = numlin::norm2(s[i - 1].second);
    const double a1 = numlin::norm2(s[i].second);
    mom.sigma0 += 0.5 * (x1 - x0) * (a0 + a1);
    mom.sigma1 += 0.5 * (x1 - x0) * (x0 * a0 + x1 * a1);
  }
  return mom;
}

// ---------------------------------------------------------------- scattering data

const ComplexMatrix& ScatteringData::s_inf() const {
  return analytic() ? fs().s_inf : sampled().s_inf;
}

std::size_t multiplicity(const BoundState& bs) { return numlin::rank(bs.M, 1e-8); }

std::size_t ScatteringData::total_bound_states() const {
  std::size_t total = 0;
  for (const auto& bs : bound_states) total += multiplicity(bs);
  return total;
}

namespace {

Issues scattering_issues(const ScatteringData& d, bool invariants) {
  Issues issues;
  const auto n = static_cast<Eigen::Index>(d.n);
  auto shape_ok = [&](const ComplexMatrix& m, const std::string& what) {
    if (m.rows() != n || m.cols() != n) {
      issues.push_back(what + " must be " + std::to_string(n) + "x" + std::to_string(n));
      return false;
    }
    if (!numlin::all_finite(m)) {
      issues.push_back(what + " has non-finite entries");
      return false;
    }
    return true;
  };
  if (n <= 0) {
    issues.push_back("dimension n must be positive");
    return issues;
  }
  if (shape_ok(d.s_inf(), "s_inf") && invariants) {
    const ComplexMatrix& s = d.s_inf();
    if (!numlin::is_hermitian(s, 1e-8)) issues.push_back("s_inf is not hermitian");
    if (numlin::max_abs(s * s - ComplexMatrix::Identity(n, n)) > 1e-8) issues.push_back("s_inf is not involutory");
  }
  if (d.analytic()) {
    auto terms_ok = [&](const std::vector<ExpPolyTerm>& terms, const std::string& side) {
      for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto& t = terms[i];
        const std::string what = side + "_terms[" + std::to_string(i) + "]";
        if (!(t.rate > 0.0) || !std::isfinite(t.rate)) issues.push_back(what + ".rate must be positive");
        if (t.power < 0) issues.push_back(what + ".power must be nonnegative");
        if (shape_ok(t.C, what + ".C") && invariants && !numlin::is_hermitian(t.C, 1e-10 * std::max(1.0, numlin::max_abs(t.C)))) {
          issues.push_back(what + ".C is not hermitian");
        }
      }
    };
    terms_ok(d.fs().right_terms, "right");
    terms_ok(d.fs().left_terms, "left");
  } else {
    const auto& s = d.sampled();
    if (!s.k_grid.valid()) issues.push_back("k_grid needs step > 0 and count > 0");
    if (!(s.k_grid.start > 0.0)) issues.push_back("k_grid must start at k > 0");
    if (s.s_values.size() != s.k_grid.count) issues.push_back("s_values length does not match k_grid");
    for (std::size_t i = 0; i < s.s_values.size(); ++i) {
      if (!shape_ok(s.s_values[i], "s_values[" + std::to_string(i) + "]")) break;
    }
  }
  for (std::size_t j = 0; j < d.bound_states.size(); ++j) {
    const auto& bs = d.bound_states[j];
    const std::string what = "bound_states[" + std::to_string(j) + "]";
    if (!(bs.kappa > 0.0) || !std::isfinite(bs.kappa)) issues.push_back(what + ".kappa must be positive");
    for (std::size_t l = 0; l < j; ++l) {
      const double other = d.bound_states[l].kappa;
      if (std::abs(other - bs.kappa) <= 1e-8 * std::max(std::abs(other), std::abs(bs.kappa))) {
        issues.push_back(what + ".kappa duplicates bound_states[" + std::to_string(l) + "]");
      }
    }
    if (!shape_ok(bs.M, what + ".M") || !invariants) continue;
    const double scale = std::max(1e-300, numlin::max_abs(bs.M));
    if (!numlin::is_hermitian(bs.M, 1e-10 * std::max(1.0, scale))) {
      issues.push_back(what + ".M is not hermitian");
      continue;
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(numlin::hermitize(bs.M), Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < -1e-8 * scale) issues.push_back(what + ".M is not positive semidefinite");
    if (multiplicity(bs) == 0) issues.push_back(what + ".M has rank zero");
  }
  return issues;
}

}  // namespace

Issues structural_issues(const ScatteringData& d) { return scattering_issues(d, false); }
Issues check_scattering_data(const ScatteringData& d) { return scattering_issues(d, true); }

void validate_scattering_data(const ScatteringData& d) {
  const Issues issues = check_scattering_data(d);
  if (!issues.empty()) throw InputError("invalid scattering data: " + join(issues));
}

}  // namespace hls
