#include "hls/charcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

namespace hls::charcheck {
namespace {

constexpr double kTolUnitarity = 1e-6;
constexpr double kTol3a = 1e-5;
constexpr double kTolVb = 1e-6;
constexpr double kTolParseval = 1e-2;
constexpr double kMaxJump = 0.1;

const std::vector<std::string> kCoveredByEquivalence = {"3b", "4a", "4b", "4d", "4e", "IIIb", "IIIc",
                                                         "Va", "Vd", "Ve", "Vf", "Vg", "Vh"};

std::vector<double> logspace(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = hi;
    return out;
  }
  const double l0 = std::log(lo), l1 = std::log(hi);
  for (std::size_t i = 0; i < count; ++i) out[i] = std::exp(l0 + (l1 - l0) * static_cast<double>(i) / (count - 1.0));
  return out;
}

ComplexMatrix identity(std::size_t n) { return ComplexMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

ConditionResult make(std::string id, bool ok, std::vector<std::pair<std::string, double>> diag, std::string note = {}) {
  return {std::move(id), ok ? Verdict::pass : Verdict::fail, std::move(diag), std::move(note)};
}

ConditionResult skipped(std::string id, std::string note) { return {std::move(id), Verdict::skipped, {}, std::move(note)}; }

// Sampled data need the F_s table; analytic data are returned unchanged.
ScatteringData with_fs(const ScatteringData& data) {
  ScatteringData d = data;
  if (!d.analytic() && !d.sampled().fs) marchenko::fs_from_sampled(d);
  return d;
}

// int_x^inf y^q e^{-c y} dy for Re c > 0
Complex upper_integral_c(int q, Complex c, double x) {
  Complex sum = 0.0;
  double fact_ratio = 1.0;  // q! / j!
  Complex cpow = std::pow(c, q + 1);
  for (int j = q; j >= 0; --j) {
    sum += fact_ratio * std::pow(x, j) / cpow;
    fact_ratio *= j;
    cpow /= c;
  }
  return std::exp(-c * x) * sum;
}

// f(k, x) = e^{ikx} I + int_x^inf K(x,y) e^{iky} dy
ComplexMatrix jost_at(const marchenko::SeparableK& K, std::size_t n, Complex k, double x) {
  ComplexMatrix out = std::exp(kI * k * x) * identity(n);
  for (std::size_t b = 0; b < K.basis.size(); ++b) {
    out += K.coeffs[b] * upper_integral_c(K.basis[b].power, K.basis[b].rate - kI * k, x);
  }
  return out;
}

double bump(double t) { return std::abs(t) < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0; }

Verdict all_pass(const CheckReport& r, std::initializer_list<const char*> ids) {
  bool skip = false;
  for (const char* id : ids) {
    const ConditionResult* c = r.find(id);
    if (!c || c->verdict == Verdict::skipped) {
      skip = true;
    } else if (c->verdict == Verdict::fail) {
      return Verdict::fail;
    }
  }
  return skip ? Verdict::skipped : Verdict::pass;
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::skipped: return "skipped";
  }
  return "skipped";
}

std::optional<double> ConditionResult::value(std::string_view name) const {
  for (const auto& [k, v] : diagnostic)
    if (k == name) return v;
  return std::nullopt;
}

const ConditionResult* CheckReport::find(std::string_view id) const {
  for (const auto& c : conditions)
    if (c.id == id) return &c;
  return nullptr;
}

ComplexVector TestVector::operator()(double x) const {
  const double t = (2.0 * x - a - b) / (b - a);
  return direction * bump(t);
}

// ---------------------------------------------------------------- (1), (2), (VI)

ConditionResult check_unitarity_symmetry(const ScatteringData& data, const CheckOptions& opt) {
  const std::size_t n = data.n;
  std::vector<double> ks{0.0};
  if (data.analytic()) {
    for (double k : logspace(1e-2, opt.k_max, opt.unitarity_samples)) ks.push_back(k);
  } else {
    ks = data.sampled().k_grid.points();
  }
  double sym = 0.0, uni = 0.0;
  for (double k : ks) {
    const ComplexMatrix s = marchenko::s_from_data(data, k);
    const ComplexMatrix sm = marchenko::s_from_data(data, -k);
    sym = std::max(sym, numlin::norm2(sm - s.adjoint()));
    uni = std::max(uni, numlin::norm2(s.adjoint() * s - identity(n)));
    uni = std::max(uni, numlin::norm2(sm.adjoint() * sm - identity(n)));
  }
  const ComplexMatrix& si = data.s_inf();
  uni = std::max(uni, numlin::norm2(si.adjoint() * si - identity(n)));
  std::string note;
  if (sym > kTolUnitarity) note = "S(-k) differs from S(k)^dagger";
  if (uni > kTolUnitarity) note += std::string(note.empty() ? "" : "; ") + "S(k) is not unitary";
  return make("1", sym <= kTolUnitarity && uni <= kTolUnitarity, {{"symmetry_defect", sym}, {"unitarity_defect", uni}},
              note);
}

ConditionResult check_condition2(const ScatteringData& data) {
  const ScatteringData d = with_fs(data);
  const double g1 = numlin::norm2(marchenko::g1_from_data(d));
  double value = 0.0;
  if (d.analytic()) {
    // g(y) = y^p e^{-ay}: (1+y)|g'| = |p y^{p-1} + (p-a) y^p - a y^{p+1}| e^{-ay}, sign change at y = p/a
    for (const auto& t : d.fs().right_terms) {
      const int p = t.power;
      const double a = t.rate;
      auto piece = [&](double lo, double hi) {
        auto u = [&](int m) {
          const double top = std::isfinite(hi) ? separable::upper_integral(m, a, hi) : 0.0;
          return separable::upper_integral(m, a, lo) - top;
        };
        double s = (p - a) * u(p) - a * u(p + 1);
        if (p > 0) s += p * u(p - 1);
        return s;
      };
      const double y0 = p / a;
      const double integral = piece(0.0, y0) - piece(y0, std::numeric_limits<double>::infinity());
      value += numlin::norm2(t.C) * integral;
    }
  } else {
    // regular part only: finite differences on the positive half of the table
    const Grid& g = d.sampled().fs->y_grid;
    const double h = g.step;
    double prev = -1.0;
    for (std::size_t i = 0; i + 1 < g.count; ++i) {
      const double y = g.at(i);
      if (y < 0.0) continue;
      const double yc = y + 0.5 * h;
      const double dv = numlin::norm2(marchenko::fs_eval(d, y + h) - marchenko::fs_eval(d, y)) / h;
      const double cur = (1.0 + yc) * dv;
      if (prev >= 0.0) value += 0.5 * h * (prev + cur);
      prev = cur;
    }
  }
  return make("2", std::isfinite(value), {{"value", value}, {"jump_norm", g1}},
              d.analytic() ? "" : "regular part only; the jump at y = 0 is reported separately");
}

ConditionResult check_continuity(const ScatteringData& data) {
  if (data.analytic()) return make("VI", true, {{"max_jump", 0.0}}, "continuous by construction");
  const auto& s = data.sampled().s_values;
  double jump = 0.0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) jump = std::max(jump, numlin::norm2(s[i + 1] - s[i]));
  return make("VI", jump < kMaxJump, {{"max_jump", jump}});
}

// ---------------------------------------------------------------- integral-equation nullities

separable::NullityResult nystrom_nullity(const std::function<ComplexMatrix(double)>& kernel, std::size_t n, double sign,
                                         double slowest, double tol) {
  using Rule = boost::math::quadrature::gauss<double, 16>;
  std::vector<double> nodes, weights;
  const double length = std::clamp(40.0 / slowest, 4.0, 400.0);
  std::vector<double> edges{0.0, 0.25};
  while (edges.back() < length) edges.push_back(2.0 * edges.back());
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double mid = 0.5 * (edges[p] + edges[p + 1]), half = 0.5 * (edges[p + 1] - edges[p]);
    for (std::size_t i = 0; i < Rule::abscissa().size(); ++i) {
      const double x = Rule::abscissa()[i], w = Rule::weights()[i];
      nodes.push_back(mid - half * x);
      weights.push_back(half * w);
      if (x != 0.0) {
        nodes.push_back(mid + half * x);
        weights.push_back(half * w);
      }
    }
  }
  const std::size_t m = nodes.size();
  const auto size = static_cast<Eigen::Index>(m * n);
  ComplexMatrix op = sign * ComplexMatrix::Identity(size, size);
  const auto nn = static_cast<Eigen::Index>(n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      const ComplexMatrix blk = std::sqrt(weights[i] * weights[j]) * kernel(nodes[i] + nodes[j]).transpose();
      op.block(static_cast<Eigen::Index>(i) * nn, static_cast<Eigen::Index>(j) * nn, nn, nn) += blk;
      if (i != j) op.block(static_cast<Eigen::Index>(j) * nn, static_cast<Eigen::Index>(i) * nn, nn, nn) += blk;
    }
  Eigen::BDCSVD<ComplexMatrix> svd(op);
  const auto& s = svd.singularValues();
  separable::NullityResult res;
  res.rank = m;
  const double smax = std::max(s(0), 1e-300);
  res.smallest_singular_value = s(size - 1) / smax;
  for (Eigen::Index i = 0; i < size; ++i)
    if (s(i) <= tol * smax) ++res.nullity;
  return res;
}

separable::NullityResult operator_nullity(const ScatteringData& data, Operator which, const CheckOptions& opt) {
  const double sign = which == Operator::Left ? -1.0 : 1.0;
  if (data.analytic()) {
    std::vector<ExpPolyTerm> terms;
    switch (which) {
      case Operator::F: terms = marchenko::f_terms(data); break;
      case Operator::Fs: terms = data.fs().right_terms; break;
      case Operator::Left: terms = marchenko::left_terms(data); break;
    }
    return separable::operator_nullity(separable::FiniteRankKernel(terms, data.n), sign, opt.nullity_tol);
  }
  const ScatteringData d = with_fs(data);
  const double reach = d.sampled().fs->y_grid.last();
  std::function<ComplexMatrix(double)> kernel;
  switch (which) {
    case Operator::F: kernel = [&](double s) { return marchenko::f_eval(d, s); }; break;
    case Operator::Fs: kernel = [&](double s) { return marchenko::fs_eval(d, s); }; break;
    case Operator::Left: kernel = [&](double s) { return marchenko::fs_eval(d, -s); }; break;
  }
  return nystrom_nullity(kernel, d.n, sign, 40.0 / reach, opt.sampled_nullity_tol);
}

namespace {

ConditionResult nullity_check(std::string id, const separable::NullityResult& r, std::size_t expected) {
  return make(std::move(id), r.nullity == expected,
              {{"nullity", static_cast<double>(r.nullity)},
               {"expected", static_cast<double>(expected)},
               {"smallest_singular_value", r.smallest_singular_value}});
}

}  // namespace

ConditionResult check_4c(const ScatteringData& data, const CheckOptions& opt) {
  return nullity_check("4c", operator_nullity(data, Operator::F, opt), 0);
}

ConditionResult check_Vc(const ScatteringData& data, const CheckOptions& opt) {
  return nullity_check("Vc", operator_nullity(data, Operator::Fs, opt), data.total_bound_states());
}

ConditionResult check_IIIa(const ScatteringData& data, const CheckOptions& opt) {
  return nullity_check("IIIa", operator_nullity(data, Operator::Left, opt), 0);
}

// ---------------------------------------------------------------- Levinson

LevinsonResult levinson(const ScatteringData& data, const CheckOptions& opt) {
  const std::size_t n = data.n;
  LevinsonResult res;
  std::vector<ComplexMatrix> path{data.s_inf()};
  double k_eps = opt.k_eps;
  if (data.analytic()) {
    double scale = 1.0;
    for (const auto& t : data.fs().right_terms) scale = std::max(scale, t.rate);
    for (const auto& t : data.fs().left_terms) scale = std::max(scale, t.rate);
    const double k_hi = std::max(opt.k_max, 1e3 * scale);
    std::size_t points = opt.levinson_points;
    for (int attempt = 0;; ++attempt) {
      std::vector<ComplexMatrix> p = path;
      auto ks = logspace(k_eps, k_hi, points);
      std::reverse(ks.begin(), ks.end());
      for (double k : ks) p.push_back(marchenko::s_from_data(data, k));
      try {
        res.lhs = numlin::arg_det_unwrap(p);
        break;
      } catch (const GridTooCoarse&) {
        if (attempt == 3) throw;
        points *= 4;
      }
    }
  } else {
    const auto& sd = data.sampled();
    for (std::size_t i = sd.s_values.size(); i-- > 0;) {
      if (sd.k_grid.at(i) <= 0.0) break;
      path.push_back(sd.s_values[i]);
      k_eps = sd.k_grid.at(i);
    }
    res.warnings.push_back("sampled data: k_eps is the smallest positive grid point (" + fmt(k_eps) + ")");
    res.lhs = numlin::arg_det_unwrap(path);
  }
  const ComplexMatrix s0 = marchenko::s_from_data(data, k_eps);
  res.mu = numlin::count_eigenvalues_near(s0, 1.0, 0.1);
  const std::size_t minus = numlin::count_eigenvalues_near(s0, -1.0, 0.1);
  if (res.mu + minus < n) {
    res.warnings.push_back(std::to_string(n - res.mu - minus) +
                           " eigenvalue(s) of S near k = 0 are not close to +1 or -1; the data look invalid");
  }
  res.n_d = numlin::count_eigenvalues_near(data.s_inf(), -1.0, 0.1);
  res.predicted =
      0.5 * (res.lhs / std::numbers::pi - static_cast<double>(res.mu) + static_cast<double>(n) - static_cast<double>(res.n_d));
  return res;
}

ConditionResult check_levinson(const ScatteringData& data, const CheckOptions& opt) {
  LevinsonResult lr;
  try {
    lr = levinson(data, opt);
  } catch (const GridTooCoarse& e) {
    return make("L", false, {}, e.what());
  }
  const double r = std::round(lr.predicted);
  const auto count = data.total_bound_states();
  const bool ok = std::abs(lr.predicted - r) <= 0.05 && r >= 0.0 && r == static_cast<double>(count);
  std::string note;
  for (const auto& w : lr.warnings) note += (note.empty() ? "" : "; ") + w;
  return make("L", ok,
              {{"lhs_over_pi", lr.lhs / std::numbers::pi},
               {"mu", static_cast<double>(lr.mu)},
               {"n_d", static_cast<double>(lr.n_d)},
               {"predicted", lr.predicted},
               {"expected", static_cast<double>(count)}},
              note);
}

// ---------------------------------------------------------------- (3a), (Vb)

ConditionResult check_3a(const ScatteringData& data, const marchenko::InverseResult& inv, const CheckOptions& opt) {
  if (!inv.k0) return skipped("3a", "no kernel at x = 0");
  if (!inv.boundary) return skipped("3a", "no boundary pair");
  const BoundaryPair& bp = *inv.boundary;
  const std::size_t half = std::max<std::size_t>(1, opt.boundary_samples / 2);
  std::vector<double> ks;
  for (double k : logspace(0.1, 20.0, half)) {
    ks.push_back(-k);
    ks.push_back(k);
  }
  double worst = 0.0;
  for (double k : ks) {
    const auto plus = marchenko::jost_from_kernel(*inv.k0, k);
    const auto minus = marchenko::jost_from_kernel(*inv.k0, -k);
    const ComplexMatrix s = marchenko::s_from_data(data, k);
    const ComplexMatrix psi = minus.f0 + plus.f0 * s;
    const ComplexMatrix dpsi = minus.fp0 + plus.fp0 * s;
    const ComplexMatrix delta = -bp.B.adjoint() * psi + bp.A.adjoint() * dpsi;
    worst = std::max(worst, numlin::norm2(delta) / (1.0 + std::abs(k)));
  }
  return make("3a", worst <= kTol3a, {{"max_residual", worst}},
              worst <= kTol3a ? "" : "the physical solution does not satisfy the recovered boundary condition");
}

ConditionResult check_Vb(const ScatteringData& data, const marchenko::InverseResult& inv) {
  if (data.bound_states.empty()) return make("Vb", true, {{"max_residual", 0.0}}, "no bound states");
  if (!inv.k0 || !inv.boundary) return skipped("Vb", "boundary recovery failed");
  const BoundaryPair& bp = *inv.boundary;
  ComplexMatrix ab(2 * data.n, data.n);
  ab << bp.A, bp.B;
  const double ab_norm = numlin::norm2(ab);
  double worst = 0.0;
  for (const auto& bs : data.bound_states) {
    const Complex k = kI * bs.kappa;
    const auto jz = marchenko::jost_from_kernel(*inv.k0, k);
    ComplexMatrix fz(2 * data.n, data.n);
    fz << jz.f0, jz.fp0;
    const ComplexMatrix j = marchenko::jost_matrix_from_kernel(*inv.k0, bp, k);
    const double scale = numlin::norm2(fz) * ab_norm * std::max(numlin::norm2(bs.M), 1e-300);
    worst = std::max(worst, numlin::norm2(j.adjoint() * bs.M) / scale);
  }
  return make("Vb", worst <= kTolVb, {{"max_residual", worst}});
}

// ---------------------------------------------------------------- Parseval

std::vector<TestVector> default_test_vectors(std::size_t n) {
  const auto nn = static_cast<Eigen::Index>(n);
  ComplexVector e1 = ComplexVector::Zero(nn);
  e1(0) = 1.0;
  ComplexVector flat = ComplexVector::Ones(nn) / std::sqrt(static_cast<double>(n));
  ComplexVector alt(nn);
  for (Eigen::Index i = 0; i < nn; ++i) alt(i) = (i % 2 == 0) ? Complex(1.0) : kI;
  alt.normalize();
  return {{1.0, 2.0, e1}, {0.5, 2.5, flat}, {0.2, 1.7, alt}};
}

ParsevalResult parseval(const ScatteringData& data, const TestVector& y, double k_max) {
  if (!data.analytic()) throw InputError("parseval: analytic data only");
  const std::size_t n = data.n;
  ParsevalResult res;

  // x quadrature: trapezoid on the support (the bump is flat at both ends)
  const std::size_t nx = 161;
  const double hx = (y.b - y.a) / static_cast<double>(nx - 1);
  std::vector<double> xs(nx);
  std::vector<ComplexVector> ys(nx);
  std::vector<marchenko::SeparableK> kernels(nx);
  for (std::size_t i = 0; i < nx; ++i) {
    xs[i] = y.a + hx * static_cast<double>(i);
    ys[i] = y(xs[i]) * hx;
    res.norm2 += ys[i].squaredNorm() / hx;
    const auto sol = marchenko::solve_marchenko_separable(data, xs[i], false);
    kernels[i] = std::get<marchenko::SeparableK>(sol.K);
  }
  if (res.norm2 == 0.0) return res;

  // int Psi^dagger Y with Psi = f(-k,x) + f(k,x) S(k)
  using Rule = boost::math::quadrature::gauss<double, 16>;
  const auto panels = static_cast<std::size_t>(std::ceil(k_max));
  const double pw = k_max / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * pw, half = 0.5 * pw;
    for (std::size_t r = 0; r < Rule::abscissa().size(); ++r) {
      for (double side : {-1.0, 1.0}) {
        const double xr = Rule::abscissa()[r];
        if (xr == 0.0 && side > 0.0) continue;
        const double k = mid + side * half * xr;
        const double w = half * Rule::weights()[r];
        ComplexVector a = ComplexVector::Zero(static_cast<Eigen::Index>(n));
        ComplexVector b = a;
        for (std::size_t i = 0; i < nx; ++i) {
          if (ys[i].squaredNorm() == 0.0) continue;
          a += jost_at(kernels[i], n, -k, xs[i]).adjoint() * ys[i];
          b += jost_at(kernels[i], n, k, xs[i]).adjoint() * ys[i];
        }
        const ComplexVector z = a + marchenko::s_from_data(data, k).adjoint() * b;
        res.continuous += w * z.squaredNorm() / (2.0 * std::numbers::pi);
      }
    }
  }
  for (const auto& bs : data.bound_states) {
    ComplexVector z = ComplexVector::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < nx; ++i) z += jost_at(kernels[i], n, kI * bs.kappa, xs[i]).adjoint() * ys[i];
    res.bound += (bs.M.adjoint() * z).squaredNorm();
  }
  res.defect = std::abs(res.continuous + res.bound - res.norm2) / res.norm2;
  return res;
}

ConditionResult check_parseval(const ScatteringData& data, const marchenko::InverseResult& inv,
                               const std::vector<TestVector>& vectors, double k_max) {
  if (!data.analytic()) return skipped("parseval", "analytic data only");
  if (!inv.complete()) return skipped("parseval", "inverse problem incomplete");
  const auto vs = vectors.empty() ? default_test_vectors(data.n) : vectors;
  double worst = 0.0, bound = 0.0;
  try {
    for (const auto& v : vs) {
      if (static_cast<std::size_t>(v.direction.size()) != data.n || !(v.b > v.a) || v.a < 0.0) {
        throw InputError("parseval: test vector must be an n-column supported in [a, b] with 0 <= a < b");
      }
      const ParsevalResult r = parseval(data, v, k_max);
      worst = std::max(worst, r.defect);
      bound = std::max(bound, r.bound);
    }
  } catch (const MarchenkoSingular& e) {
    return skipped("parseval", e.what());
  }
  return make("parseval", worst <= kTolParseval, {{"max_defect", worst}, {"max_bound_term", bound}});
}

// ---------------------------------------------------------------- report

CheckReport full_report(const ScatteringData& data, const CheckOptions& opt) {
  const Issues structural = structural_issues(data);
  if (!structural.empty()) {
    std::string msg = "invalid scattering data:";
    for (const auto& s : structural) msg += " " + s + ";";
    throw InputError(msg);
  }
  static const std::vector<std::string> known = {"1", "2", "3a", "4c", "Vb", "Vc", "IIIa", "VI", "L", "parseval"};
  for (const auto& c : opt.conditions) {
    if (std::find(known.begin(), known.end(), c) == known.end()) throw InputError("unknown condition id: " + c);
  }
  auto want = [&](const std::string& id) {
    return opt.conditions.empty() || std::find(opt.conditions.begin(), opt.conditions.end(), id) != opt.conditions.end();
  };

  CheckReport rep;
  rep.covered_by_equivalence = kCoveredByEquivalence;
  for (const auto& w : check_scattering_data(data)) rep.warnings.push_back(w);
  const ScatteringData d = with_fs(data);

  // near-duplicate rates are merged by the finite-rank basis
  if (d.analytic()) {
    std::vector<double> rates;
    for (const auto& t : marchenko::f_terms(d)) rates.push_back(t.rate);
    std::sort(rates.begin(), rates.end());
    for (std::size_t i = 0; i + 1 < rates.size(); ++i) {
      const double diff = rates[i + 1] - rates[i];
      if (diff > 0.0 && diff <= 1e-10 * rates[i + 1]) {
        rep.warnings.push_back("decay rates " + fmt(rates[i]) + " and " + fmt(rates[i + 1]) + " merged");
      }
    }
  }

  if (want("1")) rep.conditions.push_back(check_unitarity_symmetry(d, opt));
  if (want("2")) rep.conditions.push_back(check_condition2(d));
  if (want("VI")) rep.conditions.push_back(check_continuity(d));
  if (want("4c")) rep.conditions.push_back(check_4c(d, opt));
  if (want("Vc")) rep.conditions.push_back(check_Vc(d, opt));
  if (want("IIIa")) rep.conditions.push_back(check_IIIa(d, opt));
  if (want("L")) {
    rep.conditions.push_back(check_levinson(d, opt));
    if (!rep.conditions.back().note.empty()) rep.warnings.push_back("L: " + rep.conditions.back().note);
  }

  if (want("3a") || want("Vb") || want("parseval")) {
    std::optional<marchenko::InverseResult> inv;
    std::string failure;
    try {
      inv = marchenko::invert(d, opt.inverse);
    } catch (const SolverError& e) {
      failure = e.what();
    }
    if (inv && !inv->k0) {
      for (const auto& e : inv->errors) failure += (failure.empty() ? "" : "; ") + e;
    }
    if (want("3a")) {
      if (!inv || !inv->k0) {
        rep.conditions.push_back(make("3a", false, {}, "Marchenko equation not solvable at x = 0: " + failure));
      } else if (!inv->boundary) {
        std::string why;
        for (const auto& e : inv->errors)
          if (e.rfind("boundary:", 0) == 0) why += (why.empty() ? "" : "; ") + e;
        rep.conditions.push_back(make("3a", false, {{"boundary_nullity", static_cast<double>(inv->boundary_nullity)}},
                                      "no boundary pair exists (" + why + ")"));
      } else {
        rep.conditions.push_back(check_3a(d, *inv, opt));
      }
    }
    if (want("Vb")) {
      rep.conditions.push_back(inv ? check_Vb(d, *inv) : skipped("Vb", "inverse problem failed: " + failure));
    }
    if (want("parseval")) {
      const ConditionResult* one = rep.find("1");
      if (one && one->verdict == Verdict::fail) {
        rep.conditions.push_back(skipped("parseval", "condition 1 fails"));
      } else if (!inv) {
        rep.conditions.push_back(skipped("parseval", "inverse problem failed: " + failure));
      } else {
        rep.conditions.push_back(check_parseval(d, *inv, opt.test_vectors, opt.k_max));
      }
    }
  }

  rep.overall = all_pass(rep, {"1", "2", "3a", "4c"});
  rep.integral_set = all_pass(rep, {"1", "2", "IIIa", "4c", "Vc"});
  rep.levinson_set = all_pass(rep, {"1", "2", "4c", "L"});
  return rep;
}

std::string format_text(const CheckReport& report) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-10s %-8s %s\n", "condition", "verdict", "diagnostic");
  out << line;
  for (const auto& c : report.conditions) {
    std::string diag;
    for (const auto& [k, v] : c.diagnostic) diag += (diag.empty() ? "" : " ") + k + "=" + fmt(v);
    if (!c.note.empty()) diag += (diag.empty() ? "" : "  ") + ("(" + c.note + ")");
    std::snprintf(line, sizeof line, "%-10s %-8s ", c.id.c_str(), std::string(to_string(c.verdict)).c_str());
    out << line << diag << "\n";
  }
  auto word = [](Verdict v) { return std::string(to_string(v)); };
  out << "overall: "
      << (report.overall == Verdict::pass ? "marchenko-class"
                                          : report.overall == Verdict::fail ? "not-marchenko-class" : "undetermined")
      << "\n";
  out << "integral-equation set: " << word(report.integral_set) << "\n";
  out << "levinson set: " << word(report.levinson_set) << "\n";
  if (!report.covered_by_equivalence.empty()) {
    out << "covered by equivalence:";
    for (const auto& c : report.covered_by_equivalence) out << " " << c;
    out << "\n";
  }
  for (const auto& w : report.warnings) out << "warning: " << w << "\n";
  return out.str();
}

}  // namespace hls::charcheck
