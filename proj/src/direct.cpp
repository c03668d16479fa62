#include "hls/direct.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "hls/parallel.hpp"

namespace hls::direct {

namespace {

namespace ode = boost::numeric::odeint;
using State = std::vector<Complex>;
using CMap = Eigen::Map<const ComplexMatrix>;
using MMap = Eigen::Map<ComplexMatrix>;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string fmt(Complex v) { return "(" + fmt(v.real()) + ", " + fmt(v.imag()) + ")"; }

// m'' = -2ik m' + V m, optionally a' = -e^{-2 Im(k) x} m^dagger m
struct JostRhs {
  const Potential& v;
  Complex k;
  Eigen::Index n;
  bool accumulate;

  void operator()(const State& s, State& ds, double x) const {
    const Eigen::Index nn = n * n;
    const CMap m(s.data(), n, n), mp(s.data() + nn, n, n);
    MMap(ds.data(), n, n) = mp;
    if (v.is_zero()) {
      MMap(ds.data() + nn, n, n) = -2.0 * kI * k * mp;
    } else {
      MMap(ds.data() + nn, n, n) = -2.0 * kI * k * mp + v(x) * m;
    }
    if (accumulate) MMap(ds.data() + 2 * nn, n, n) = -std::exp(-2.0 * k.imag() * x) * (m.adjoint() * m);
  }
};

// phi'' = (V - k^2) phi
struct RegularRhs {
  const Potential& v;
  Complex k;
  Eigen::Index n;

  void operator()(const State& s, State& ds, double x) const {
    const Eigen::Index nn = n * n;
    const CMap p(s.data(), n, n), pp(s.data() + nn, n, n);
    MMap(ds.data(), n, n) = pp;
    if (v.is_zero()) {
      MMap(ds.data() + nn, n, n) = -k * k * p;
    } else {
      MMap(ds.data() + nn, n, n) = v(x) * p - k * k * p;
    }
  }
};

bool finite_state(const State& s) {
  return std::all_of(s.begin(), s.end(), [](Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

struct JostRaw {
  ComplexMatrix m0, mp0, a0;
  std::vector<double> xs;  // sample points (ascending) below x_cut
  std::vector<ComplexMatrix> m, mp;
};

JostRaw integrate_jost(const Potential& v, Complex k, bool accumulate, const std::vector<double>& sample_x,
                       const OdeTolerance& tol) {
  const auto n = static_cast<Eigen::Index>(v.n());
  const Eigen::Index nn = n * n;
  const double x_cut = std::max(v.x_cut(), 0.0);
  State s(static_cast<std::size_t>((accumulate ? 3 : 2) * nn), Complex(0.0));
  MMap(s.data(), n, n).setIdentity();
  if (accumulate) {
    const double kap = k.imag();
    MMap(s.data() + 2 * nn, n, n) = ComplexMatrix::Identity(n, n) * (std::exp(-2.0 * kap * x_cut) / (2.0 * kap));
  }
  const JostRhs rhs{v, k, n, accumulate};
  JostRaw out;
  if (x_cut > 0.0 && !v.is_zero()) {
    if (sample_x.empty()) {
      ode::integrate_adaptive(ode::make_controlled(tol.abs, tol.rel, ode::runge_kutta_dopri5<State>()), rhs, s, x_cut,
                              0.0, -0.01);
    } else {
      std::vector<double> times{x_cut};
      for (auto it = sample_x.rbegin(); it != sample_x.rend(); ++it)
        if (*it < x_cut) times.push_back(*it);
      if (times.back() > 0.0) times.push_back(0.0);
      std::vector<std::pair<double, State>> seen;
      ode::integrate_times(ode::make_dense_output(tol.abs, tol.rel, ode::runge_kutta_dopri5<State>()), rhs, s,
                           times.begin(), times.end(), -0.01,
                           [&](const State& st, double x) { seen.emplace_back(x, st); });
      for (auto it = seen.rbegin(); it != seen.rend(); ++it) {
        if (it->first >= x_cut) continue;
        out.xs.push_back(it->first);
        out.m.push_back(CMap(it->second.data(), n, n));
        out.mp.push_back(CMap(it->second.data() + nn, n, n));
      }
    }
  } else if (accumulate && x_cut > 0.0) {
    // free potential: m = I on [0, x_cut]
    const double kap = k.imag();
    MMap(s.data() + 2 * nn, n, n) = ComplexMatrix::Identity(n, n) * (1.0 / (2.0 * kap));
  }
  if (!finite_state(s)) {
    throw SolverError("Jost solution overflowed at k = " + fmt(k) + "; try a smaller x_cut");
  }
  out.m0 = CMap(s.data(), n, n);
  out.mp0 = CMap(s.data() + nn, n, n);
  if (accumulate) out.a0 = CMap(s.data() + 2 * nn, n, n);
  return out;
}

void require_upper(Complex k) {
  if (k.imag() < 0.0) throw InputError("Jost solution requested for Im k < 0 (k = " + fmt(k) + ")");
}

}  // namespace

JostValues jost_solve(const Potential& v, Complex k, const std::optional<Grid>& samples, const OdeTolerance& tol) {
  require_upper(k);
  std::vector<double> xs;
  if (samples) xs = samples->points();
  const JostRaw raw = integrate_jost(v, k, false, xs, tol);
  JostValues jv;
  jv.k = k;
  jv.f0 = raw.m0;
  jv.fp0 = kI * k * raw.m0 + raw.mp0;
  if (samples) {
    const auto n = static_cast<Eigen::Index>(v.n());
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    SolutionSamples ss;
    ss.grid = *samples;
    std::size_t j = 0;
    for (double x : xs) {
      const Complex e = std::exp(kI * k * x);
      ComplexMatrix m = id, mp = ComplexMatrix::Zero(n, n);
      while (j < raw.xs.size() && raw.xs[j] < x - 1e-13) ++j;
      if (j < raw.xs.size() && std::abs(raw.xs[j] - x) <= 1e-13) {
        m = raw.m[j];
        mp = raw.mp[j];
      }
      ss.value.push_back(e * m);
      ss.derivative.push_back(e * (kI * k * m + mp));
    }
    jv.samples = std::move(ss);
  }
  return jv;
}

ComplexMatrix jost_matrix(const JostValues& at_minus_conj_k, const BoundaryPair& pair) {
  if (static_cast<std::size_t>(at_minus_conj_k.f0.rows()) != pair.n()) {
    throw InputError("jost_matrix: dimension mismatch between Jost values and boundary pair");
  }
  return at_minus_conj_k.f0.adjoint() * pair.B - at_minus_conj_k.fp0.adjoint() * pair.A;
}

ComplexMatrix jost_matrix(const Potential& v, const BoundaryPair& pair, Complex k, const OdeTolerance& tol) {
  return jost_matrix(jost_solve(v, -std::conj(k), std::nullopt, tol), pair);
}

ComplexMatrix scattering_matrix(const JostValues& plus_k, const JostValues& minus_k, const BoundaryPair& pair) {
  const ComplexMatrix j_plus = jost_matrix(minus_k, pair);  // J(k) uses f(-k)
  const ComplexMatrix j_minus = jost_matrix(plus_k, pair);  // J(-k) uses f(k)
  Eigen::JacobiSVD<ComplexMatrix> svd(j_plus);
  const auto& sv = svd.singularValues();
  if (!(sv(sv.size() - 1) > 1e-14 * sv(0))) {
    throw SolverError("Jost matrix numerically singular at real k = " + fmt(plus_k.k.real()));
  }
  return -j_minus * j_plus.partialPivLu().inverse();
}

ComplexMatrix scattering_matrix(const Potential& v, const BoundaryPair& pair, double k, Issues* warnings,
                                const OdeTolerance& tol) {
  if (k < 0.0) return scattering_matrix(v, pair, -k, warnings, tol).adjoint();
  if (k == 0.0) {
    k = 1e-6;
    if (warnings) warnings->push_back("S(0) evaluated at k = 1e-6");
  }
  return scattering_matrix(jost_solve(v, k, std::nullopt, tol), jost_solve(v, -k, std::nullopt, tol), pair);
}

SolutionSamples regular_solution(const Potential& v, const BoundaryPair& pair, Complex k, const Grid& x_grid,
                                 const OdeTolerance& tol) {
  if (x_grid.start < 0.0) throw InputError("regular_solution: grid must lie in x >= 0");
  const auto n = static_cast<Eigen::Index>(v.n());
  const Eigen::Index nn = n * n;
  State s(static_cast<std::size_t>(2 * nn));
  MMap(s.data(), n, n) = pair.A;
  MMap(s.data() + nn, n, n) = pair.B;
  std::vector<double> times{0.0};
  for (double x : x_grid.points())
    if (x > 0.0) times.push_back(x);
  SolutionSamples out;
  out.grid = x_grid;
  auto store = [&](const State& st, double) {
    out.value.push_back(CMap(st.data(), n, n));
    out.derivative.push_back(CMap(st.data() + nn, n, n));
  };
  if (times.size() == 1) {
    store(s, 0.0);
  } else {
    std::vector<std::pair<double, State>> seen;
    ode::integrate_times(ode::make_dense_output(tol.abs, tol.rel, ode::runge_kutta_dopri5<State>()),
                         RegularRhs{v, k, n}, s, times.begin(), times.end(), 0.01,
                         [&](const State& st, double x) { seen.emplace_back(x, st); });
    // drop the artificial x = 0 start when the grid does not contain it
    for (const auto& [x, st] : seen) {
      if (x == 0.0 && x_grid.start > 0.0) continue;
      if (!finite_state(st)) throw SolverError("regular solution overflowed at x = " + fmt(x));
      store(st, x);
    }
  }
  return out;
}

SolutionSamples physical_solution(const Potential& v, const BoundaryPair& pair, double k, const Grid& x_grid,
                                  const OdeTolerance& tol) {
  const JostValues fp = jost_solve(v, k, x_grid, tol);
  const JostValues fm = jost_solve(v, -k, x_grid, tol);
  const ComplexMatrix s = scattering_matrix(fp, fm, pair);
  SolutionSamples out;
  out.grid = x_grid;
  for (std::size_t i = 0; i < x_grid.count; ++i) {
    out.value.push_back(fm.samples->value[i] + fp.samples->value[i] * s);
    out.derivative.push_back(fm.samples->derivative[i] + fp.samples->derivative[i] * s);
  }
  return out;
}

// ---------------------------------------------------------------- bound states

namespace {

// sigma(J) is measured against ||[f; f']|| ||[A; B]||, an upper bound for ||J|| that does not
// collapse at a zero of J (for n = 1 sigma_min = ||J||).
struct JostAtKappa {
  ComplexMatrix j;
  Eigen::VectorXd sv;
  double scale = 1.0;
  double rel() const { return sv(sv.size() - 1) / scale; }
  std::size_t nullity(double tol) const {
    std::size_t m = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) <= tol * scale) ++m;
    return m;
  }
};

JostAtKappa jost_at_kappa(const JostValues& jv, const BoundaryPair& pair) {
  JostAtKappa out;
  out.j = jost_matrix(jv, pair);
  out.sv = Eigen::JacobiSVD<ComplexMatrix>(out.j).singularValues();
  ComplexMatrix fs(2 * jv.f0.rows(), jv.f0.cols()), ab(2 * pair.A.rows(), pair.A.cols());
  fs << jv.f0, jv.fp0;
  ab << pair.A, pair.B;
  out.scale = std::max(numlin::norm2(fs) * numlin::norm2(ab), 1e-300);
  return out;
}

JostAtKappa jost_at_kappa(const Potential& v, const BoundaryPair& pair, double kappa, const OdeTolerance& tol) {
  return jost_at_kappa(jost_solve(v, Complex(0.0, kappa), std::nullopt, tol), pair);
}

}  // namespace

std::vector<BoundStateRoot> find_bound_states(const Potential& v, const BoundaryPair& pair,
                                              const BoundSearchOptions& opt, const OdeTolerance& tol) {
  if (!(opt.kappa_max > opt.kappa_min) || !(opt.kappa_min > 0.0) || opt.points < 3) {
    throw InputError("find_bound_states: need 0 < kappa_min < kappa_max and at least 3 scan points");
  }
  const std::size_t np = opt.points;
  std::vector<double> kap(np), r(np);
  const double lratio = std::log(opt.kappa_max / opt.kappa_min);
  for (std::size_t i = 0; i < np; ++i)
    kap[i] = opt.kappa_min * std::exp(lratio * static_cast<double>(i) / static_cast<double>(np - 1));
  parallel_for(np, [&](std::size_t i) { r[i] = jost_at_kappa(v, pair, kap[i], tol).rel(); });

  std::vector<std::pair<double, double>> brackets;
  for (std::size_t i = 0; i < np; ++i) {
    const bool left_ok = i == 0 ? false : r[i] <= r[i - 1];
    const bool right_ok = i + 1 == np ? true : r[i] < r[i + 1];
    if (i == 0 || !left_ok || !right_ok) continue;
    brackets.emplace_back(kap[i - 1], kap[std::min(i + 1, np - 1)]);
  }

  std::vector<BoundStateRoot> roots(brackets.size());
  std::vector<bool> accepted(brackets.size(), false);
  parallel_for(brackets.size(), [&](std::size_t b) {
    auto [lo, hi] = brackets[b];
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
    double fc = jost_at_kappa(v, pair, c, tol).rel(), fd = jost_at_kappa(v, pair, d, tol).rel();
    while (hi - lo > opt.refine_tol * std::max(1.0, hi)) {
      if (fc < fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - g * (hi - lo);
        fc = jost_at_kappa(v, pair, c, tol).rel();
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + g * (hi - lo);
        fd = jost_at_kappa(v, pair, d, tol).rel();
      }
    }
    const double kappa = 0.5 * (lo + hi);
    const JostAtKappa at = jost_at_kappa(v, pair, kappa, tol);
    if (at.rel() <= opt.accept) {
      roots[b] = {kappa, at.nullity(std::max(opt.accept, 1e3 * at.rel())), at.rel()};
      accepted[b] = true;
    }
  });
  std::vector<BoundStateRoot> out;
  for (std::size_t b = 0; b < roots.size(); ++b)
    if (accepted[b]) out.push_back(roots[b]);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.kappa < b.kappa; });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].kappa - out[i - 1].kappa < 1e-6) {
      throw SolverError("bound states at kappa = " + fmt(out[i - 1].kappa) + " and " + fmt(out[i].kappa) +
                        " are closer than 1e-6; refine the scan grid");
    }
  }
  return out;
}

Normalization bound_normalization(const Potential& v, const BoundaryPair& pair, double kappa,
                                  std::size_t multiplicity, const OdeTolerance& tol) {
  const Complex k(0.0, kappa);
  const JostRaw raw = integrate_jost(v, k, true, {}, tol);
  JostValues jv{k, raw.m0, kI * k * raw.m0 + raw.mp0, std::nullopt};
  const JostAtKappa at = jost_at_kappa(jv, pair);
  const auto n = static_cast<Eigen::Index>(v.n());

  Eigen::JacobiSVD<ComplexMatrix> svd(at.j.adjoint(), Eigen::ComputeFullV);
  auto m = static_cast<Eigen::Index>(multiplicity == 0 ? at.nullity(1e-6) : multiplicity);
  if (m == 0) throw SolverError("kappa = " + fmt(kappa) + " is not a zero of the Jost matrix");
  const ComplexMatrix q = svd.matrixV().rightCols(m);

  Normalization out;
  out.P = q * q.adjoint();
  out.A = numlin::hermitize(raw.a0);
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  out.B = numlin::hermitize((id - out.P) + out.P * out.A * out.P);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(out.B);
  if (!(es.eigenvalues().minCoeff() > 1e-12 * es.eigenvalues().maxCoeff())) {
    throw SolverError("normalization matrix B_j is not positive definite at kappa = " + fmt(kappa));
  }
  out.M = numlin::hermitize(numlin::inv_sqrt_psd(out.B) * out.P);
  return out;
}

std::vector<ComplexMatrix> bound_state_function(const Potential& v, double kappa, const ComplexMatrix& m,
                                                const Grid& x_grid, const OdeTolerance& tol) {
  const JostValues jv = jost_solve(v, Complex(0.0, kappa), x_grid, tol);
  std::vector<ComplexMatrix> out;
  for (const auto& f : jv.samples->value) out.push_back(f * m);
  return out;
}

// ---------------------------------------------------------------- asymptotics

ComplexMatrix s_inf_from_boundary(const BoundaryPair& pair) {
  const auto n = static_cast<Eigen::Index>(pair.n());
  return 2.0 * numlin::range_projector(pair.A, 1e-10) - ComplexMatrix::Identity(n, n);
}

AsymptoticData s_inf_and_g1(const Potential& v, const BoundaryPair& pair, double big_k, const OdeTolerance& tol) {
  AsymptoticData out;
  out.s_inf = s_inf_from_boundary(pair);
  const double ks[3] = {big_k, 2.0 * big_k, 4.0 * big_k};
  ComplexMatrix g[3];
  parallel_for(3, [&](std::size_t i) { g[i] = kI * ks[i] * (scattering_matrix(v, pair, ks[i], nullptr, tol) - out.s_inf); });
  // polynomial in u = 1/k through the three points, evaluated at u = 0
  auto extrapolate = [&](int first) {
    ComplexMatrix acc = ComplexMatrix::Zero(g[0].rows(), g[0].cols());
    for (int a = first; a < 3; ++a) {
      double w = 1.0;
      for (int b = first; b < 3; ++b)
        if (b != a) w *= (1.0 / ks[b]) / (1.0 / ks[b] - 1.0 / ks[a]);
      acc += w * g[a];
    }
    return acc;
  };
  out.g1 = extrapolate(0);
  out.extrapolation_residual = numlin::max_abs(out.g1 - extrapolate(1));
  return out;
}

// ---------------------------------------------------------------- pipeline

ScatteringData DirectResult::scattering_data() const {
  ScatteringData d;
  d.n = n;
  SampledScattering s;
  s.k_grid = k_grid;
  s.s_values = s_values;
  s.s_inf = s_inf;
  d.repr = std::move(s);
  d.bound_states = bound_states;
  return d;
}

DirectResult solve_direct(const Potential& v, const BoundaryPair& pair, const DirectOptions& opt) {
  if (!(opt.k_max > 0.0) || opt.k_points < 16) throw InputError("solve_direct: need k_max > 0 and k_points >= 16");
  if (v.n() != pair.n()) throw InputError("solve_direct: potential and boundary pair have different sizes");
  DirectResult res;
  res.n = v.n();
  const double dk = opt.k_max / static_cast<double>(opt.k_points);
  res.k_grid = Grid{dk, dk, opt.k_points};
  res.s_values.resize(opt.k_points);
  if (opt.keep_jost) res.jost_cache.resize(opt.k_points);
  std::vector<double> defect(opt.k_points, 0.0);
  const auto n = static_cast<Eigen::Index>(res.n);
  parallel_for(opt.k_points, [&](std::size_t i) {
    const double k = res.k_grid.at(i);
    JostValues plus = jost_solve(v, k, std::nullopt, opt.tol);
    const JostValues minus = jost_solve(v, -k, std::nullopt, opt.tol);
    res.s_values[i] = scattering_matrix(plus, minus, pair);
    defect[i] = numlin::max_abs(res.s_values[i].adjoint() * res.s_values[i] - ComplexMatrix::Identity(n, n));
    if (opt.keep_jost) res.jost_cache[i] = std::move(plus);
  });
  res.max_unitarity_defect = *std::max_element(defect.begin(), defect.end());
  if (res.max_unitarity_defect > 1e-6) {
    res.warnings.push_back("S(k) unitarity defect " + fmt(res.max_unitarity_defect) + " exceeds 1e-6");
  }

  BoundSearchOptions bopt;
  bopt.kappa_max = opt.kappa_max;
  for (const auto& root : find_bound_states(v, pair, bopt, opt.tol)) {
    Normalization nm = bound_normalization(v, pair, root.kappa, root.multiplicity, opt.tol);
    res.bound_states.push_back({root.kappa, nm.M});
    res.normalizations.push_back(std::move(nm));
  }

  const AsymptoticData asym = s_inf_and_g1(v, pair, opt.g1_k, opt.tol);
  res.s_inf = asym.s_inf;
  res.g1 = asym.g1;
  if (asym.extrapolation_residual > 1e-4) {
    res.warnings.push_back("G1 extrapolation residual " + fmt(asym.extrapolation_residual) + " exceeds 1e-4");
  }
  return res;
}

}  // namespace hls::direct
