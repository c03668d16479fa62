#include "hls/simd/kernels.hpp"

namespace hls::simd::scalar {
namespace {

Complex cdot(const Complex* a, const Complex* b, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += a[i].real() * b[i].real() - a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() + a[i].imag() * b[i].real();
  }
  return {re, im};
}

Complex cdotc(const Complex* a, const Complex* b, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {re, im};
}

void caxpy(Complex alpha, const Complex* x, Complex* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void cscale_real(const double* w, const Complex* x, Complex* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = w[i] * x[i];
}

double ddot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

constexpr KernelTable kTable{Isa::Scalar, cdot, cdotc, caxpy, cscale_real, ddot};

}  // namespace

const KernelTable& table() { return kTable; }

}  // namespace hls::simd::scalar
