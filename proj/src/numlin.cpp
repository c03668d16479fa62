#include "hls/numlin.hpp"
#include "hls/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace hls {

GridTooCoarse::GridTooCoarse(std::size_t idx, double j)
    : SolverError("arg det jump of " + std::to_string(j) + " rad at path index " + std::to_string(idx) +
                  "; refine the parameter grid"),
      index(idx),
      jump(j) {}

namespace numlin {
namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw InputError(std::string(what) + ": matrix must be square, got " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()));
  }
}

void check_sylvester_spectra(const ComplexMatrix& a, const ComplexMatrix& b) {
  Eigen::ComplexEigenSolver<ComplexMatrix> ea(a, false);
  Eigen::ComplexEigenSolver<ComplexMatrix> eb(b, false);
  const double scale = norm2(a) + norm2(b);
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
      gap = std::min(gap, std::abs(ea.eigenvalues()(i) + eb.eigenvalues()(j)));
    }
  }
  if (gap <= 1e-12 * std::max(scale, 1e-300)) {
    throw SolverError("sylvester_solve: singular Sylvester operator (spectral gap " + std::to_string(gap) + ")");
  }
}

}  // namespace

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double norm2(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  require_square(m, "is_hermitian");
  return max_abs(m - m.adjoint()) <= tol;
}

ComplexMatrix hermitize(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (!std::isfinite(m(i).real()) || !std::isfinite(m(i).imag())) return false;
  }
  return true;
}

ComplexMatrix mat_exp(const ComplexMatrix& m, double t) {
  require_square(m, "mat_exp");
  const Eigen::Index n = m.rows();
  if (n == 0) return m;
  if (is_hermitian(m, 1e-14 * std::max(1.0, max_abs(m)))) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(m));
    const Eigen::VectorXd lam = es.eigenvalues();
    ComplexVector d(n);
    for (Eigen::Index i = 0; i < n; ++i) d(i) = std::exp(-lam(i) * t);
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
  }
  Eigen::ComplexEigenSolver<ComplexMatrix> es(m);
  if (es.info() == Eigen::Success) {
    const ComplexMatrix& v = es.eigenvectors();
    Eigen::JacobiSVD<ComplexMatrix> svd(v);
    const auto& s = svd.singularValues();
    const double cond = s(n - 1) > 0 ? s(0) / s(n - 1) : std::numeric_limits<double>::infinity();
    if (cond <= 1e8) {
      ComplexVector d(n);
      for (Eigen::Index i = 0; i < n; ++i) d(i) = std::exp(-es.eigenvalues()(i) * t);
      return v * d.asDiagonal() * v.partialPivLu().inverse();
    }
  }
  ComplexMatrix scaled = -t * m;
  return scaled.exp();
}

ComplexMatrix sylvester_solve(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c) {
  require_square(a, "sylvester_solve(A)");
  require_square(b, "sylvester_solve(B)");
  if (c.rows() != a.rows() || c.cols() != b.rows()) {
    throw InputError("sylvester_solve: C must be rows(A) x rows(B)");
  }
  check_sylvester_spectra(a, b);
  const Eigen::Index n = a.rows();
  const Eigen::Index m = b.rows();
  if (n <= 16 && m <= 16) {
    // vec(AX + XB) = (I_m (x) A + B^T (x) I_n) vec(X), column-major vec.
    const ComplexMatrix op = Eigen::kroneckerProduct(ComplexMatrix::Identity(m, m), a).eval() +
                             Eigen::kroneckerProduct(b.transpose(), ComplexMatrix::Identity(n, n)).eval();
    const ComplexVector rhs = Eigen::Map<const ComplexVector>(c.data(), c.size());
    const ComplexVector x = op.fullPivLu().solve(rhs);
    return Eigen::Map<const ComplexMatrix>(x.data(), n, m);
  }
  Eigen::ComplexSchur<ComplexMatrix> sa(a), sb(b);
  const ComplexMatrix& ta = sa.matrixT();
  const ComplexMatrix& tb = sb.matrixT();
  const ComplexMatrix f = sa.matrixU().adjoint() * c * sb.matrixU();
  ComplexMatrix y = ComplexMatrix::Zero(n, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    ComplexVector rhs = f.col(j);
    for (Eigen::Index i = 0; i < j; ++i) rhs -= tb(i, j) * y.col(i);
    ComplexMatrix lhs = ta;
    lhs.diagonal().array() += tb(j, j);
    y.col(j) = lhs.triangularView<Eigen::Upper>().solve(rhs);
  }
  return sa.matrixU() * y * sb.matrixU().adjoint();
}

Nullspace nullspace(const ComplexMatrix& m, double tol) {
  Nullspace out;
  const Eigen::Index cols = m.cols();
  if (cols == 0) return out;
  if (m.rows() == 0) {
    out.basis = ComplexMatrix::Identity(cols, cols);
    out.nullity = static_cast<std::size_t>(cols);
    return out;
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  out.singular_values.assign(s.data(), s.data() + s.size());
  const double smax = s.size() > 0 ? s(0) : 0.0;
  std::vector<Eigen::Index> null_cols;
  for (Eigen::Index i = 0; i < cols; ++i) {
    if (i >= s.size() || s(i) <= tol * smax) null_cols.push_back(i);
  }
  out.nullity = null_cols.size();
  out.basis.resize(cols, static_cast<Eigen::Index>(null_cols.size()));
  for (std::size_t j = 0; j < null_cols.size(); ++j) {
    out.basis.col(static_cast<Eigen::Index>(j)) = svd.matrixV().col(null_cols[j]);
  }
  return out;
}

ComplexMatrix range_projector(const ComplexMatrix& m, double tol) {
  ComplexMatrix p = ComplexMatrix::Zero(m.rows(), m.rows());
  if (m.size() == 0) return p;
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU);
  const auto& s = svd.singularValues();
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol * s(0)) p += svd.matrixU().col(i) * svd.matrixU().col(i).adjoint();
  }
  return p;
}

ComplexMatrix inv_sqrt_psd(const ComplexMatrix& m) {
  require_square(m, "inv_sqrt_psd");
  const double scale = std::max(max_abs(m), 1e-300);
  if (!is_hermitian(m, 1e-10 * scale)) throw InputError("inv_sqrt_psd: matrix is not hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(m));
  const Eigen::VectorXd lam = es.eigenvalues();
  if (lam.size() > 0 && !(lam(0) > 0.0)) {
    throw InputError("inv_sqrt_psd: matrix is not positive definite (smallest eigenvalue " +
                     std::to_string(lam(0)) + ")");
  }
  const Eigen::VectorXd d = lam.array().rsqrt();
  return es.eigenvectors() * d.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

ComplexMatrix sqrt_psd(const ComplexMatrix& m) {
  require_square(m, "sqrt_psd");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(m));
  const Eigen::VectorXd d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * d.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

std::size_t count_eigenvalues_near(const ComplexMatrix& m, Complex target, double radius) {
  require_square(m, "count_eigenvalues_near");
  Eigen::ComplexEigenSolver<ComplexMatrix> es(m, false);
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (std::abs(es.eigenvalues()(i) - target) <= radius) ++count;
  }
  return count;
}

std::size_t rank(const ComplexMatrix& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& s = svd.singularValues();
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol * s(0)) ++r;
  }
  return r;
}

double min_singular_value(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

double arg_det_unwrap(std::span<const ComplexMatrix> values) {
  double total = 0.0;
  Complex prev{};
  for (std::size_t i = 0; i < values.size(); ++i) {
    require_square(values[i], "arg_det_unwrap");
    const Complex d = values[i].determinant();
    if (d == Complex{0.0, 0.0} || !std::isfinite(std::abs(d))) {
      throw SolverError("arg_det_unwrap: determinant vanishes or is not finite at path index " + std::to_string(i));
    }
    if (i > 0) {
      const double step = std::arg(d / prev);
      if (std::abs(step) >= std::numbers::pi - 0.1) throw GridTooCoarse(i, step);
      total += step;
    }
    prev = d;
  }
  return total;
}

}  // namespace numlin
}  // namespace hls

namespace hls::numlin {

GmresResult gmres(const std::function<void(const ComplexVector&, ComplexVector&)>& apply, const ComplexVector& b,
                  double tol, std::size_t restart, std::size_t max_iter) {
  const auto& simd = simd::kernels();
  const Eigen::Index n = b.size();
  GmresResult res;
  res.x = ComplexVector::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    res.converged = true;
    res.hessenberg_smin = std::numeric_limits<double>::infinity();
    return res;
  }
  const auto m = static_cast<Eigen::Index>(std::max<std::size_t>(1, restart));
  ComplexMatrix v(n, m + 1);
  ComplexMatrix h = ComplexMatrix::Zero(m + 1, m);
  ComplexVector w(n), r(n);
  double smin = std::numeric_limits<double>::infinity();

  double previous = std::numeric_limits<double>::infinity();
  while (res.iterations < max_iter) {
    apply(res.x, r);
    r = b - r;
    const double beta = r.norm();
    res.relative_residual = beta / bnorm;
    if (res.relative_residual <= tol) {
      res.converged = true;
      break;
    }
    // a full cycle that does not reduce the residual will not do better after restart
    if (res.relative_residual > 0.999 * previous) break;
    previous = res.relative_residual;
    v.col(0) = r / beta;
    h.setZero();
    Eigen::Index j = 0;
    ComplexVector y;
    bool breakdown = false;
    for (; j < m && res.iterations < max_iter; ++j) {
      ++res.iterations;
      apply(v.col(j), w);
      const double wnorm = w.norm();
      for (Eigen::Index i = 0; i <= j; ++i) {
        h(i, j) = simd.cdotc(v.col(i).data(), w.data(), static_cast<std::size_t>(n));
        simd.caxpy(-h(i, j), v.col(i).data(), w.data(), static_cast<std::size_t>(n));
      }
      h(j + 1, j) = w.norm();
      breakdown = std::abs(h(j + 1, j)) <= 1e-12 * std::max(wnorm, 1e-300);
      if (!breakdown) v.col(j + 1) = w / h(j + 1, j);
      // small least-squares problem min |beta e1 - H y|
      const ComplexMatrix hj = h.topLeftCorner(j + 2, j + 1);
      Eigen::JacobiSVD<ComplexMatrix> svd(hj, Eigen::ComputeThinU | Eigen::ComputeThinV);
      smin = std::min(smin, svd.singularValues()(j));
      ComplexVector rhs = ComplexVector::Zero(j + 2);
      rhs(0) = beta;
      y = svd.solve(rhs);
      res.relative_residual = (rhs - hj * y).norm() / bnorm;
      if (res.relative_residual <= tol || breakdown) {
        ++j;
        break;
      }
    }
    res.x += v.leftCols(j) * y.head(j);
    if (breakdown && res.relative_residual > tol) break;  // invariant subspace without a solution
  }
  if (!res.converged) {
    apply(res.x, r);
    res.relative_residual = (b - r).norm() / bnorm;
    res.converged = res.relative_residual <= tol;
  }
  res.hessenberg_smin = smin;
  return res;
}

}  // namespace hls::numlin
