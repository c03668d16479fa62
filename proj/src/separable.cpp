#include "hls/separable.hpp"

#include <cmath>

#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <Eigen/SVD>

namespace hls::separable {

namespace {

double binom(int n, int k) { return boost::math::binomial_coefficient<double>(n, k); }
double factorial(int n) { return boost::math::factorial<double>(static_cast<unsigned>(n)); }

// x^m with 0^0 = 1
double ipow(double x, int m) { return m == 0 ? 1.0 : std::pow(x, m); }

}  // namespace

double upper_integral(int m, double c, double x) {
  // e^{-cx} sum_{j=0}^m m!/j! x^j / c^{m-j+1}
  double sum = 0.0;
  double term = factorial(m) / std::pow(c, m + 1);  // j = 0
  for (int j = 0; j <= m; ++j) {
    sum += term;
    term *= x * c / static_cast<double>(j + 1);
  }
  return std::exp(-c * x) * sum;
}

Complex exp_poly_transform(int q, double a, Complex k) {
  return factorial(q) / std::pow(Complex(a, 0.0) - kI * k, q + 1);
}

FiniteRankKernel::FiniteRankKernel(std::vector<ExpPolyTerm> terms, std::size_t n) : terms_(std::move(terms)), n_(n) {
  for (const auto& t : terms_) {
    if (!(t.rate > 0.0)) throw InputError("finite-rank kernel: term rates must be positive");
    if (t.power < 0) throw InputError("finite-rank kernel: term powers must be nonnegative");
    std::size_t r = 0;
    for (; r < rates_.size(); ++r) {
      if (std::abs(rates_[r] - t.rate) <= 1e-10 * std::max(rates_[r], t.rate)) break;
    }
    if (r == rates_.size()) rates_.push_back(t.rate);
    term_basis_rate_.push_back(r);
  }
  for (std::size_t r = 0; r < rates_.size(); ++r) {
    int max_power = -1;
    for (std::size_t t = 0; t < terms_.size(); ++t) {
      if (term_basis_rate_[t] == r) max_power = std::max(max_power, terms_[t].power);
    }
    for (int q = 0; q <= max_power; ++q) {
      basis_.push_back({rates_[r], q});
      basis_rate_.push_back(r);
    }
  }
}

ComplexMatrix FiniteRankKernel::kernel(double s) const {
  const auto m = static_cast<Eigen::Index>(n_);
  ComplexMatrix out = ComplexMatrix::Zero(m, m);
  for (const auto& t : terms_) out += t.C * (ipow(s, t.power) * std::exp(-t.rate * s));
  return out;
}

ComplexMatrix FiniteRankKernel::kernel_ds(double s) const {
  const auto m = static_cast<Eigen::Index>(n_);
  ComplexMatrix out = ComplexMatrix::Zero(m, m);
  for (const auto& t : terms_) {
    const double e = std::exp(-t.rate * s);
    double d = -t.rate * ipow(s, t.power) * e;
    if (t.power > 0) d += t.power * ipow(s, t.power - 1) * e;
    out += t.C * d;
  }
  return out;
}

double FiniteRankKernel::basis_value(std::size_t b, double y) const {
  return ipow(y, basis_[b].power) * std::exp(-basis_[b].rate * y);
}

double FiniteRankKernel::basis_derivative(std::size_t b, double y) const {
  const auto [a, q] = basis_[b];
  const double e = std::exp(-a * y);
  double d = -a * ipow(y, q) * e;
  if (q > 0) d += q * ipow(y, q - 1) * e;
  return d;
}

ComplexMatrix FiniteRankKernel::gram(double x) const {
  const auto m = static_cast<Eigen::Index>(n_);
  const auto nb = static_cast<Eigen::Index>(basis_.size());
  ComplexMatrix w = ComplexMatrix::Zero(m * nb, m * nb);
  for (Eigen::Index bp = 0; bp < nb; ++bp) {
    const auto& e1 = basis_[static_cast<std::size_t>(bp)];
    for (Eigen::Index b = 0; b < nb; ++b) {
      const auto& e2 = basis_[static_cast<std::size_t>(b)];
      auto blk = w.block(bp * m, b * m, m, m);
      for (std::size_t t = 0; t < terms_.size(); ++t) {
        if (term_basis_rate_[t] != basis_rate_[static_cast<std::size_t>(b)] || terms_[t].power < e2.power) continue;
        const auto& tt = terms_[t];
        blk += tt.C * (binom(tt.power, e2.power) * upper_integral(e1.power + tt.power - e2.power, e1.rate + tt.rate, x));
      }
    }
  }
  return w;
}

ComplexMatrix FiniteRankKernel::source(double x) const {
  const auto m = static_cast<Eigen::Index>(n_);
  const auto nb = static_cast<Eigen::Index>(basis_.size());
  ComplexMatrix g = ComplexMatrix::Zero(m, m * nb);
  for (Eigen::Index b = 0; b < nb; ++b) {
    const auto& e = basis_[static_cast<std::size_t>(b)];
    for (std::size_t t = 0; t < terms_.size(); ++t) {
      if (term_basis_rate_[t] != basis_rate_[static_cast<std::size_t>(b)] || terms_[t].power < e.power) continue;
      const auto& tt = terms_[t];
      g.block(0, b * m, m, m) += tt.C * (binom(tt.power, e.power) * ipow(x, tt.power - e.power) * std::exp(-tt.rate * x));
    }
  }
  return g;
}

ComplexMatrix FiniteRankKernel::source_dx(double x) const {
  const auto m = static_cast<Eigen::Index>(n_);
  const auto nb = static_cast<Eigen::Index>(basis_.size());
  ComplexMatrix g = ComplexMatrix::Zero(m, m * nb);
  for (Eigen::Index b = 0; b < nb; ++b) {
    const auto& e = basis_[static_cast<std::size_t>(b)];
    for (std::size_t t = 0; t < terms_.size(); ++t) {
      if (term_basis_rate_[t] != basis_rate_[static_cast<std::size_t>(b)] || terms_[t].power < e.power) continue;
      const auto& tt = terms_[t];
      const int d = tt.power - e.power;
      const double ex = std::exp(-tt.rate * x);
      double val = -tt.rate * ipow(x, d) * ex;
      if (d > 0) val += d * ipow(x, d - 1) * ex;
      g.block(0, b * m, m, m) += tt.C * (binom(tt.power, e.power) * val);
    }
  }
  return g;
}

NullityResult operator_nullity(const FiniteRankKernel& kernel, double sign, double tol) {
  NullityResult res;
  res.rank = kernel.rank();
  if (kernel.empty()) {
    res.smallest_singular_value = 1.0;
    return res;
  }
  const auto size = static_cast<Eigen::Index>(kernel.n() * kernel.rank());
  const ComplexMatrix op = sign * ComplexMatrix::Identity(size, size) + kernel.gram(0.0);
  Eigen::JacobiSVD<ComplexMatrix> svd(op);
  const auto& s = svd.singularValues();
  const double smax = std::max(s(0), 1e-300);
  res.smallest_singular_value = s(size - 1) / smax;
  for (Eigen::Index i = 0; i < size; ++i) {
    if (s(i) <= tol * smax) ++res.nullity;
  }
  return res;
}

}  // namespace hls::separable
