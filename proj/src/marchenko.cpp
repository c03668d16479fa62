#include "hls/marchenko.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "hls/detail/quadrature.hpp"
#include "hls/parallel.hpp"
#include "hls/simd/kernels.hpp"

namespace hls {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

ComplexMatrix zeros(std::size_t n) {
  const auto m = static_cast<Eigen::Index>(n);
  return ComplexMatrix::Zero(m, m);
}

ComplexMatrix eye(std::size_t n) {
  const auto m = static_cast<Eigen::Index>(n);
  return ComplexMatrix::Identity(m, m);
}

double ipow(double x, int m) { return m == 0 ? 1.0 : std::pow(x, m); }

// Four-point Lagrange interpolation of a uniformly tabulated matrix function.
ComplexMatrix interp_table(const Grid& g, const std::vector<ComplexMatrix>& v, double y, std::size_t n) {
  if (v.empty() || y < g.start - 1e-12 || y > g.last() + 1e-12) return zeros(n);
  if (v.size() < 4) {
    const auto i = static_cast<std::size_t>(std::clamp(std::round((y - g.start) / g.step), 0.0,
                                                       static_cast<double>(v.size() - 1)));
    return v[i];
  }
  const double t = (y - g.start) / g.step;
  auto i0 = static_cast<long>(std::floor(t)) - 1;
  i0 = std::clamp(i0, 0L, static_cast<long>(v.size()) - 4);
  ComplexMatrix out = zeros(n);
  for (long a = 0; a < 4; ++a) {
    double w = 1.0;
    for (long b = 0; b < 4; ++b) {
      if (b != a) w *= (t - static_cast<double>(i0 + b)) / static_cast<double>(a - b);
    }
    out += w * v[static_cast<std::size_t>(i0 + a)];
  }
  return out;
}

}  // namespace

MarchenkoSingular::MarchenkoSingular(double x_, double smin)
    : SolverError("Marchenko operator singular at x = " + fmt(x_) + " (relative smallest singular value " +
                  fmt(smin) + ")"),
      x(x_),
      smallest_singular_value(smin) {}

namespace marchenko {

// ---------------------------------------------------------------- data kernels

std::vector<ExpPolyTerm> f_terms(const ScatteringData& data) {
  std::vector<ExpPolyTerm> terms;
  if (data.analytic()) terms = data.fs().right_terms;
  for (const auto& bs : data.bound_states) terms.push_back({bs.M * bs.M, bs.kappa, 0});
  return terms;
}

std::vector<ExpPolyTerm> left_terms(const ScatteringData& data) {
  return data.analytic() ? data.fs().left_terms : std::vector<ExpPolyTerm>{};
}

namespace {

ComplexMatrix sum_terms(const std::vector<ExpPolyTerm>& terms, double s, std::size_t n) {
  ComplexMatrix out = zeros(n);
  for (const auto& t : terms) out += t.C * (ipow(s, t.power) * std::exp(-t.rate * s));
  return out;
}

const SampledFs& require_fs(const ScatteringData& data) {
  const auto& s = data.sampled();
  if (!s.fs) throw InputError("sampled scattering data: F_s has not been tabulated (run fs_from_sampled)");
  return *s.fs;
}

}  // namespace

ComplexMatrix fs_eval(const ScatteringData& data, double y) {
  if (data.analytic()) {
    return y >= 0.0 ? sum_terms(data.fs().right_terms, y, data.n) : sum_terms(data.fs().left_terms, -y, data.n);
  }
  const SampledFs& fs = require_fs(data);
  ComplexMatrix out = interp_table(fs.y_grid, fs.values, y, data.n);
  if (y >= 0.0) out += fs.g1 * std::exp(-y);
  return out;
}

ComplexMatrix f_eval(const ScatteringData& data, double y) {
  ComplexMatrix out = fs_eval(data, y);
  for (const auto& bs : data.bound_states) out += bs.M * bs.M * std::exp(-bs.kappa * y);
  return out;
}

ComplexMatrix s_from_data(const ScatteringData& data, double k) {
  if (data.analytic()) {
    const auto& fs = data.fs();
    ComplexMatrix s = fs.s_inf;
    for (const auto& t : fs.right_terms) s += t.C * separable::exp_poly_transform(t.power, t.rate, -k);
    for (const auto& t : fs.left_terms) s += t.C * separable::exp_poly_transform(t.power, t.rate, k);
    return s;
  }
  const auto& sd = data.sampled();
  if (k < 0.0) return s_from_data(data, -k).adjoint();
  const Grid& g = sd.k_grid;
  if (k <= g.start) return sd.s_values.front();
  if (k >= g.last()) {
    // S - S_inf ~ c / k beyond the sampled range
    return sd.s_inf + (sd.s_values.back() - sd.s_inf) * (g.last() / k);
  }
  const double t = (k - g.start) / g.step;
  const auto i = std::min(static_cast<std::size_t>(t), g.count - 2);
  const double f = t - static_cast<double>(i);
  return (1.0 - f) * sd.s_values[i] + f * sd.s_values[i + 1];
}

namespace {

// ik (S(k) - S_inf) -> G1 as k -> inf; eliminate the 1/k and 1/k^2 corrections from three top samples.
ComplexMatrix g1_from_tail(const SampledScattering& s) {
  const std::size_t last = s.k_grid.count - 1;
  const std::size_t idx[3] = {last / 4, last / 2, last};
  double k[3];
  ComplexMatrix g[3];
  for (int j = 0; j < 3; ++j) {
    k[j] = s.k_grid.at(idx[j]);
    g[j] = kI * k[j] * (s.s_values[idx[j]] - s.s_inf);
  }
  // g(k) = G1 + c1/k + c2/k^2: Lagrange extrapolation in u = 1/k to u = 0
  ComplexMatrix out = ComplexMatrix::Zero(g[0].rows(), g[0].cols());
  for (int a = 0; a < 3; ++a) {
    double w = 1.0;
    for (int b = 0; b < 3; ++b) {
      if (b != a) w *= (0.0 - 1.0 / k[b]) / (1.0 / k[a] - 1.0 / k[b]);
    }
    out += w * g[a];
  }
  return out;
}

}  // namespace

ComplexMatrix g1_from_data(const ScatteringData& data) {
  if (data.analytic()) {
    ComplexMatrix g = zeros(data.n);
    for (const auto& t : data.fs().right_terms)
      if (t.power == 0) g += t.C;
    for (const auto& t : data.fs().left_terms)
      if (t.power == 0) g -= t.C;
    return g;
  }
  const auto& s = data.sampled();
  return s.fs ? s.fs->g1 : g1_from_tail(s);
}

void fs_from_sampled(ScatteringData& data, const FsFromSampledOptions& opt) {
  auto& s = std::get<SampledScattering>(data.repr);
  if (s.k_grid.count < 16) throw InputError("fs_from_sampled: need at least 16 k samples");
  const std::size_t n = data.n;
  const auto m = static_cast<Eigen::Index>(n);
  const ComplexMatrix g1 = g1_from_tail(s);
  const std::size_t nk = s.k_grid.count;
  const double kmax = s.k_grid.last();
  const double ktaper = kmax - opt.taper_fraction * (kmax - s.k_grid.start);

  // weighted R(k) and R(-k), one contiguous vector per matrix entry
  std::vector<std::vector<Complex>> rp(n * n, std::vector<Complex>(nk)), rm(n * n, std::vector<Complex>(nk));
  for (std::size_t i = 0; i < nk; ++i) {
    const double k = s.k_grid.at(i);
    double w = s.k_grid.step * ((i == 0 || i == nk - 1) ? 0.5 : 1.0);
    if (i == 0) w += s.k_grid.start;  // [0, k_min] with R held at R(k_min)
    if (k > ktaper) w *= 0.5 * (1.0 + std::cos(std::numbers::pi * (k - ktaper) / (kmax - ktaper)));
    const ComplexMatrix plus = s.s_values[i] - s.s_inf - g1 / (1.0 + kI * k);
    const ComplexMatrix minus = s.s_values[i].adjoint() - s.s_inf - g1 / (1.0 - kI * k);
    for (Eigen::Index a = 0; a < m; ++a)
      for (Eigen::Index c = 0; c < m; ++c) {
        rp[static_cast<std::size_t>(a * m + c)][i] = w * plus(a, c);
        rm[static_cast<std::size_t>(a * m + c)][i] = w * minus(a, c);
      }
  }
  const auto half = static_cast<std::size_t>(std::round(opt.y_max / opt.y_step));
  SampledFs fs;
  fs.g1 = g1;
  fs.y_grid = {-static_cast<double>(half) * opt.y_step, opt.y_step, 2 * half + 1};
  fs.values.assign(fs.y_grid.count, zeros(n));
  const auto& kern = simd::kernels();
  parallel_for(fs.y_grid.count, [&](std::size_t j) {
    const double y = fs.y_grid.at(j);
    std::vector<Complex> ph(nk), phc(nk);
    for (std::size_t i = 0; i < nk; ++i) {
      ph[i] = std::polar(1.0, s.k_grid.at(i) * y);
      phc[i] = std::conj(ph[i]);
    }
    ComplexMatrix v(m, m);
    for (Eigen::Index a = 0; a < m; ++a)
      for (Eigen::Index c = 0; c < m; ++c) {
        const auto e = static_cast<std::size_t>(a * m + c);
        v(a, c) = (kern.cdot(rp[e].data(), ph.data(), nk) + kern.cdot(rm[e].data(), phc.data(), nk)) /
                  (2.0 * std::numbers::pi);
      }
    fs.values[j] = v;
  });
  s.fs = std::move(fs);
}

// ---------------------------------------------------------------- kernel K(x, .)

ComplexMatrix SeparableK::eval(double y) const {
  if (coeffs.empty()) return ComplexMatrix();
  ComplexMatrix out = ComplexMatrix::Zero(coeffs[0].rows(), coeffs[0].cols());
  for (std::size_t b = 0; b < basis.size(); ++b) out += coeffs[b] * (ipow(y, basis[b].power) * std::exp(-basis[b].rate * y));
  return out;
}

ComplexMatrix SeparableK::eval_dy(double y) const {
  if (coeffs.empty()) return ComplexMatrix();
  ComplexMatrix out = ComplexMatrix::Zero(coeffs[0].rows(), coeffs[0].cols());
  for (std::size_t b = 0; b < basis.size(); ++b) {
    const auto [a, q] = basis[b];
    const double e = std::exp(-a * y);
    double d = -a * ipow(y, q) * e;
    if (q > 0) d += q * ipow(y, q - 1) * e;
    out += coeffs[b] * d;
  }
  return out;
}

ComplexMatrix SeparableK::fourier(Complex k) const {
  if (coeffs.empty()) return ComplexMatrix();
  ComplexMatrix out = ComplexMatrix::Zero(coeffs[0].rows(), coeffs[0].cols());
  for (std::size_t b = 0; b < basis.size(); ++b) {
    out += coeffs[b] * separable::exp_poly_transform(basis[b].power, basis[b].rate, k);
  }
  return out;
}

ComplexMatrix SampledK::eval(double y) const {
  const std::size_t n = values.empty() ? 0 : static_cast<std::size_t>(values[0].rows());
  return interp_table(y_grid, values, y, n);
}

ComplexMatrix SampledK::fourier(Complex k) const {
  ComplexMatrix out = ComplexMatrix::Zero(values[0].rows(), values[0].cols());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double w = y_grid.step * ((i == 0 || i + 1 == values.size()) ? 0.5 : 1.0);
    out += values[i] * (w * std::exp(kI * k * y_grid.at(i)));
  }
  return out;
}

namespace {

std::size_t rep_n(const KernelRep& r) {
  return std::visit(
      [](const auto& v) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, SeparableK>) {
          return v.coeffs.empty() ? 0 : static_cast<std::size_t>(v.coeffs[0].rows());
        } else {
          return v.values.empty() ? 0 : static_cast<std::size_t>(v.values[0].rows());
        }
      },
      r);
}

ComplexMatrix rep_eval(const KernelRep& r, double y, std::size_t n) {
  ComplexMatrix out = std::visit([&](const auto& v) { return v.eval(y); }, r);
  return out.size() == 0 ? zeros(n) : out;
}

ComplexMatrix rep_fourier(const KernelRep& r, Complex k, std::size_t n) {
  if (rep_n(r) == 0) return zeros(n);
  ComplexMatrix out = std::visit([&](const auto& v) { return v.fourier(k); }, r);
  return out.size() == 0 ? zeros(n) : out;
}

}  // namespace

ComplexMatrix MarchenkoSolution::K_at(double y) const {
  return rep_eval(K, y, static_cast<std::size_t>(K_diag.rows()));
}

ComplexMatrix MarchenkoSolution::Kx_at(double y) const {
  if (!Kx) throw SolverError("K_x was not computed for this Marchenko solution");
  return rep_eval(*Kx, y, static_cast<std::size_t>(K_diag.rows()));
}

namespace {

std::vector<ComplexMatrix> split_blocks(const ComplexMatrix& row, std::size_t n, std::size_t nb) {
  std::vector<ComplexMatrix> out;
  const auto m = static_cast<Eigen::Index>(n);
  for (std::size_t b = 0; b < nb; ++b) out.push_back(row.block(0, static_cast<Eigen::Index>(b) * m, m, m));
  return out;
}

ComplexMatrix diag_value(const separable::FiniteRankKernel& kernel, const std::vector<ComplexMatrix>& coeffs,
                         double x) {
  ComplexMatrix out = zeros(kernel.n());
  for (std::size_t b = 0; b < coeffs.size(); ++b) out += coeffs[b] * kernel.basis_value(b, x);
  return out;
}

}  // namespace

MarchenkoSolution solve_marchenko_separable(const separable::FiniteRankKernel& kernel, double x, bool with_derivative,
                                            double sing_tol) {
  MarchenkoSolution sol;
  sol.x = x;
  const std::size_t n = kernel.n();
  SeparableK k;
  k.basis = kernel.basis();
  if (kernel.empty()) {
    sol.K = k;
    sol.K_diag = zeros(n);
    if (with_derivative) sol.Kx = k;
    return sol;
  }
  const auto size = static_cast<Eigen::Index>(n * kernel.rank());
  const ComplexMatrix op = ComplexMatrix::Identity(size, size) + kernel.gram(x);
  Eigen::JacobiSVD<ComplexMatrix> svd(op);
  const auto& sv = svd.singularValues();
  sol.smallest_singular_value = sv(size - 1) / std::max(sv(0), 1e-300);
  if (!(sol.smallest_singular_value > sing_tol)) throw MarchenkoSingular(x, sol.smallest_singular_value);

  // D (I + W) = -G  <=>  (I + W)^T D^T = -G^T
  const Eigen::PartialPivLU<ComplexMatrix> lu(op.transpose());
  const ComplexMatrix d = lu.solve(-kernel.source(x).transpose()).transpose();
  k.coeffs = split_blocks(d, n, kernel.rank());
  sol.K_diag = diag_value(kernel, k.coeffs, x);
  sol.K = k;
  if (with_derivative) {
    // L (I + W) = -G' + K(x,x) G
    const ComplexMatrix rhs = -kernel.source_dx(x) + sol.K_diag * kernel.source(x);
    SeparableK kx;
    kx.basis = kernel.basis();
    kx.coeffs = split_blocks(lu.solve(rhs.transpose()).transpose(), n, kernel.rank());
    sol.Kx = kx;
  }
  return sol;
}

MarchenkoSolution solve_marchenko_separable(const ScatteringData& data, double x, bool with_derivative,
                                            double sing_tol) {
  if (!data.analytic()) throw InputError("solve_marchenko_separable needs analytic scattering data");
  return solve_marchenko_separable(separable::FiniteRankKernel(f_terms(data), data.n), x, with_derivative, sing_tol);
}

void solve_derivative_marchenko(const separable::FiniteRankKernel& kernel, MarchenkoSolution& sol) {
  const auto* k = std::get_if<SeparableK>(&sol.K);
  if (k == nullptr) throw InputError("solve_derivative_marchenko: separable solution required");
  const std::size_t n = kernel.n();
  SeparableK kx;
  kx.basis = kernel.basis();
  if (!kernel.empty()) {
    const auto size = static_cast<Eigen::Index>(n * kernel.rank());
    const ComplexMatrix op = ComplexMatrix::Identity(size, size) + kernel.gram(sol.x);
    const ComplexMatrix rhs = -kernel.source_dx(sol.x) + sol.K_diag * kernel.source(sol.x);
    kx.coeffs = split_blocks(op.transpose().partialPivLu().solve(rhs.transpose()).transpose(), n, kernel.rank());
  }
  sol.Kx = kx;
}

// ---------------------------------------------------------------- Nystrom

namespace {

// One trapezoid Nystrom solve with `count` nodes x + i h; returns K at the nodes.
std::vector<ComplexMatrix> nystrom_once(const std::function<ComplexMatrix(double)>& F, std::size_t n, double x,
                                        double h, std::size_t count, const NystromOptions& opt) {
  const auto m = static_cast<Eigen::Index>(n);
  const std::size_t table = 2 * count - 1;
  // Hankel table F(2x + j h), one contiguous vector per entry (a, c)
  std::vector<std::vector<Complex>> t(n * n, std::vector<Complex>(table));
  for (std::size_t j = 0; j < table; ++j) {
    const ComplexMatrix f = F(2.0 * x + static_cast<double>(j) * h);
    for (Eigen::Index a = 0; a < m; ++a)
      for (Eigen::Index c = 0; c < m; ++c) t[static_cast<std::size_t>(a * m + c)][j] = f(a, c);
  }
  std::vector<double> w(count, h);
  w.front() = w.back() = 0.5 * h;
  const auto& kern = simd::kernels();
  const auto len = static_cast<Eigen::Index>(n * count);

  // Row form: u_c[i] + sum_a sum_j w_j u_a[j] F(y_i + y_j)[a, c] = rhs_c[i]; layout a * count + j.
  std::vector<Complex> wu(n * count);
  auto apply = [&](const ComplexVector& u, ComplexVector& out) {
    out = u;
    for (std::size_t a = 0; a < n; ++a)
      kern.cscale_real(w.data(), u.data() + a * count, wu.data() + a * count, count);
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t i = 0; i < count; ++i) {
        Complex acc = 0.0;
        for (std::size_t a = 0; a < n; ++a) acc += kern.cdot(wu.data() + a * count, t[a * n + c].data() + i, count);
        out(static_cast<Eigen::Index>(c * count + i)) += acc;
      }
    }
  };

  std::vector<ComplexMatrix> k(count, zeros(n));
  for (Eigen::Index r = 0; r < m; ++r) {
    ComplexVector b(len);
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t i = 0; i < count; ++i) b(static_cast<Eigen::Index>(c * count + i)) = -t[static_cast<std::size_t>(r) * n + c][i];
    const auto res = numlin::gmres(apply, b, opt.gmres_tol, 80, 800);
    if (!res.converged || res.hessenberg_smin <= opt.singular_tol) {
      throw MarchenkoSingular(x, res.hessenberg_smin);
    }
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t i = 0; i < count; ++i) k[i](r, static_cast<Eigen::Index>(c)) = res.x(static_cast<Eigen::Index>(c * count + i));
  }
  return k;
}

}  // namespace

MarchenkoSolution solve_marchenko_nystrom(const std::function<ComplexMatrix(double)>& F, std::size_t n, double x,
                                          const Grid& y_grid, const NystromOptions& opt) {
  if (y_grid.count < 3 || !(y_grid.step > 0.0)) throw InputError("solve_marchenko_nystrom: grid too small");
  const double h = y_grid.step;
  std::vector<ComplexMatrix> k = nystrom_once(F, n, x, h, y_grid.count, opt);
  if (opt.richardson) {
    const std::vector<ComplexMatrix> fine = nystrom_once(F, n, x, 0.5 * h, 2 * y_grid.count - 1, opt);
    for (std::size_t i = 0; i < k.size(); ++i) k[i] = (4.0 * fine[2 * i] - k[i]) / 3.0;
  }
  MarchenkoSolution sol;
  sol.x = x;
  sol.K_diag = k.front();
  sol.K = SampledK{{x, h, y_grid.count}, std::move(k)};
  return sol;
}

double nystrom_length(const ScatteringData& data) {
  double len = 10.0;
  for (const auto& t : f_terms(data)) {
    // walk out until the term itself is negligible; y^q e^{-a y} decays late for large q
    const double c = numlin::max_abs(t.C);
    double l = 10.0 / t.rate;
    while (l < 30.0 && c * std::pow(l, t.power) * std::exp(-t.rate * l) > 1e-10) l += 0.5;
    len = std::max(len, l);
  }
  return std::min(30.0, len);
}

double marchenko_residual(const MarchenkoSolution& sol, const std::function<ComplexMatrix(double)>& F,
                          std::size_t probes, double length) {
  double worst = 0.0;
  const double span = std::min(length, 5.0);
  const auto panels = static_cast<std::size_t>(std::ceil(2.0 * length));
  for (std::size_t p = 0; p < probes; ++p) {
    const double y = sol.x + (static_cast<double>(p) + 0.5) * span / static_cast<double>(probes);
    const ComplexMatrix integral = detail::gauss_legendre(
        [&](double z) -> ComplexMatrix { return sol.K_at(z) * F(z + y); }, sol.x, sol.x + length, panels);
    worst = std::max(worst, numlin::max_abs(sol.K_at(y) + F(sol.x + y) + integral));
  }
  return worst;
}

// ---------------------------------------------------------------- recovery

namespace {

// d/dx of g at x with 4th-order stencils; forward-biased when x - 2h < 0.
template <class G>
ComplexMatrix derivative4(const G& g, double x, double h) {
  if (x - 2.0 * h >= -1e-15) {
    return (-g(x + 2 * h) + 8.0 * g(x + h) - 8.0 * g(x - h) + g(x - 2 * h)) / (12.0 * h);
  }
  return (-25.0 * g(x) + 48.0 * g(x + h) - 36.0 * g(x + 2 * h) + 16.0 * g(x + 3 * h) - 3.0 * g(x + 4 * h)) /
         (12.0 * h);
}

}  // namespace

RecoveredPotential recover_potential(const ScatteringData& data, const Grid& x_grid) {
  RecoveredPotential out;
  const std::size_t n = data.n;
  std::vector<ComplexMatrix> values(x_grid.count, zeros(n));
  std::vector<std::string> fail(x_grid.count);
  std::vector<double> asym(x_grid.count, 0.0);

  if (data.analytic()) {
    const separable::FiniteRankKernel kernel(f_terms(data), n);
    const double h = std::min(x_grid.step, 1e-3);
    auto kdiag = [&](double x) { return solve_marchenko_separable(kernel, x, false).K_diag; };
    parallel_for(x_grid.count, [&](std::size_t i) {
      try {
        const ComplexMatrix v = -2.0 * derivative4(kdiag, x_grid.at(i), h);
        asym[i] = numlin::max_abs(v - v.adjoint());
        values[i] = numlin::hermitize(v);
      } catch (const MarchenkoSingular& e) {
        fail[i] = e.what();
      }
    });
  } else {
    // Nystrom K(x,x) at the grid points, differentiated on the grid itself.
    const SampledFs& fs = require_fs(data);
    const double length = std::min(20.0, 0.5 * fs.y_grid.last());
    const Grid yg = Grid::covering(0.0, length, x_grid.step);
    NystromOptions opt;
    opt.richardson = false;
    std::vector<ComplexMatrix> diag(x_grid.count, zeros(n));
    std::vector<bool> ok(x_grid.count, false);
    parallel_for(x_grid.count, [&](std::size_t i) {
      try {
        diag[i] = solve_marchenko_nystrom([&](double y) { return f_eval(data, y); }, n, x_grid.at(i), yg, opt).K_diag;
        ok[i] = true;
      } catch (const MarchenkoSingular& e) {
        fail[i] = e.what();
      }
    });
    const double h = x_grid.step;
    const std::size_t cnt = x_grid.count;
    for (std::size_t i = 0; i < cnt; ++i) {
      if (cnt < 5) break;
      ComplexMatrix d;
      const std::size_t lo = i < 2 ? 0 : (i + 2 >= cnt ? cnt - 5 : i - 2);
      bool all = true;
      for (std::size_t j = lo; j < lo + 5; ++j) all = all && ok[j];
      if (!all) {
        if (fail[i].empty()) fail[i] = "neighbouring Marchenko solve failed";
        continue;
      }
      const double t = static_cast<double>(i - lo);
      // derivative of the quartic through the 5 points, at offset t
      d = zeros(n);
      for (std::size_t a = 0; a < 5; ++a) {
        double wsum = 0.0;
        for (std::size_t skip = 0; skip < 5; ++skip) {
          if (skip == a) continue;
          double prod = 1.0 / (static_cast<double>(a) - static_cast<double>(skip));
          for (std::size_t b = 0; b < 5; ++b) {
            if (b == a || b == skip) continue;
            prod *= (t - static_cast<double>(b)) / (static_cast<double>(a) - static_cast<double>(b));
          }
          wsum += prod;
        }
        d += wsum * diag[lo + a];
      }
      const ComplexMatrix v = -2.0 * d / h;
      asym[i] = numlin::max_abs(v - v.adjoint());
      values[i] = numlin::hermitize(v);
    }
  }

  out.first_index = x_grid.count;
  for (std::size_t i = 0; i < x_grid.count; ++i) {
    if (fail[i].empty()) {
      out.first_index = std::min(out.first_index, i);
    } else {
      out.failures.push_back("x = " + fmt(x_grid.at(i)) + ": " + fail[i]);
    }
    out.max_asymmetry = std::max(out.max_asymmetry, asym[i]);
  }
  out.potential = Potential::sampled(x_grid, std::move(values), x_grid.last());
  return out;
}

JostAtZero jost_from_kernel(const MarchenkoSolution& k0, Complex k) {
  if (std::abs(k0.x) > 1e-14) throw InputError("jost_from_kernel needs the Marchenko solution at x = 0");
  const auto n = static_cast<std::size_t>(k0.K_diag.rows());
  JostAtZero out;
  out.f0 = eye(n) + rep_fourier(k0.K, k, n);
  out.fp0 = kI * k * eye(n) - k0.K_diag;
  if (k0.Kx) {
    out.fp0 += rep_fourier(*k0.Kx, k, n);
  } else {
    throw SolverError("jost_from_kernel: K_x(0, .) is required");
  }
  return out;
}

ComplexMatrix jost_matrix_from_kernel(const MarchenkoSolution& k0, const BoundaryPair& pair, Complex k) {
  const JostAtZero jz = jost_from_kernel(k0, -std::conj(k));
  return jz.f0.adjoint() * pair.B - jz.fp0.adjoint() * pair.A;
}

BoundaryRecovery recover_boundary(const ComplexMatrix& s_inf, const ComplexMatrix& g1, const ComplexMatrix& k00,
                                  double tol) {
  BoundaryRecovery out;
  const Eigen::Index n = s_inf.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  ComplexMatrix sys = ComplexMatrix::Zero(2 * n, 2 * n);
  sys.topLeftCorner(n, n) = id - s_inf;
  sys.bottomLeftCorner(n, n) = s_inf * k00 + k00 * s_inf - g1;
  sys.bottomRightCorner(n, n) = id + s_inf;
  const numlin::Nullspace ns = numlin::nullspace(sys, tol);
  out.nullity = ns.nullity;
  if (ns.nullity != static_cast<std::size_t>(n)) {
    out.issues.push_back("boundary recovery failed: nullity " + std::to_string(ns.nullity) + ", expected " +
                         std::to_string(n));
    return out;
  }
  const ComplexMatrix a = ns.basis.topRows(n);
  const ComplexMatrix b = ns.basis.bottomRows(n);
  // basis columns are orthonormal, so the residual is already relative
  out.symmetry_residual = numlin::max_abs(b.adjoint() * a - a.adjoint() * b);
  if (out.symmetry_residual > std::max(1e-10, 10.0 * tol)) {
    out.issues.push_back("boundary recovery failed: B^dagger A is not hermitian (residual " +
                         fmt(out.symmetry_residual) + ")");
    return out;
  }
  out.pair = BoundaryPair{a, b}.normalized();
  return out;
}

double suggested_x_end(const ScatteringData& data) {
  double amin = std::numeric_limits<double>::infinity();
  for (const auto& t : f_terms(data)) amin = std::min(amin, t.rate);
  if (!std::isfinite(amin)) return 8.0;
  return std::clamp(9.0 / amin, 8.0, 40.0);
}

InverseResult invert(const ScatteringData& input, const InverseOptions& opt) {
  const Issues structural = structural_issues(input);
  if (!structural.empty()) {
    std::string msg = "invalid scattering data:";
    for (const auto& s : structural) msg += " " + s + ";";
    throw InputError(msg);
  }
  ScatteringData data = input;
  InverseResult res;
  for (const auto& w : check_scattering_data(data)) res.warnings.push_back(w);
  if (!data.analytic() && !data.sampled().fs) fs_from_sampled(data, opt.sampled);

  res.s_inf = data.s_inf();
  res.g1 = g1_from_data(data);

  Grid grid = opt.x_grid;
  if (opt.extend_x_cut && data.analytic()) {
    const double end = std::max(grid.last(), suggested_x_end(data));
    grid = Grid::covering(grid.start, end, grid.step);
  }

  // potential
  RecoveredPotential rp = recover_potential(data, grid);
  res.potential = rp.potential;
  res.first_index = rp.first_index;
  res.potential_asymmetry = rp.max_asymmetry;
  if (!rp.failures.empty()) {
    res.errors.push_back("potential: recovered from x = " + fmt(grid.at(std::min(rp.first_index, grid.count - 1))) +
                         " on; " + std::to_string(rp.failures.size()) + " grid point(s) failed (first: " +
                         rp.failures.front() + ")");
  }

  // kernel at x = 0
  try {
    if (data.analytic()) {
      res.k0 = solve_marchenko_separable(data, 0.0, true);
    } else {
      const double length = std::min(20.0, 0.5 * data.sampled().fs->y_grid.last());
      const Grid yg = Grid::covering(0.0, length, 0.02);
      auto F = [&](double y) { return f_eval(data, y); };
      MarchenkoSolution s0 = solve_marchenko_nystrom(F, data.n, 0.0, yg);
      const double d = yg.step;
      const MarchenkoSolution s1 = solve_marchenko_nystrom(F, data.n, d, yg);
      const MarchenkoSolution s2 = solve_marchenko_nystrom(F, data.n, 2 * d, yg);
      // second-order one-sided difference in x on the x = 0 nodes
      const auto& v0 = std::get<SampledK>(s0.K).values;
      SampledK kx{std::get<SampledK>(s0.K).y_grid, std::vector<ComplexMatrix>(v0.size(), zeros(data.n))};
      for (std::size_t i = 0; i < v0.size(); ++i) {
        const double y = yg.at(i);
        if (y < 2 * d) continue;
        kx.values[i] = (-3.0 * v0[i] + 4.0 * s1.K_at(y) - s2.K_at(y)) / (2.0 * d);
      }
      if (v0.size() > 3) kx.values[0] = kx.values[1] = 2.0 * kx.values[2] - kx.values[3];
      s0.Kx = kx;
      res.k0 = s0;
    }
  } catch (const MarchenkoSingular& e) {
    res.errors.push_back(std::string("kernel at x = 0: ") + e.what());
  }

  if (res.k0) {
    res.k00 = res.k0->K_diag;
    res.k00_asymmetry = numlin::max_abs(res.k00 - res.k00.adjoint());
    auto F = [&](double y) { return f_eval(data, y); };
    res.marchenko_residual = marchenko_residual(*res.k0, F, 20, data.analytic() ? 2.0 * nystrom_length(data) : 20.0);
    const BoundaryRecovery br = recover_boundary(res.s_inf, res.g1, res.k00, data.analytic() ? 1e-8 : 1e-2);
    res.boundary_nullity = br.nullity;
    if (br.pair) {
      res.boundary = br.pair;
    } else {
      for (const auto& s : br.issues) res.errors.push_back("boundary: " + s);
    }
  } else {
    res.k00 = zeros(data.n);
  }
  return res;
}

}  // namespace marchenko
}  // namespace hls
