// Compiled with -mavx2 -mfma on x86-64; never called unless the CPU supports both.
#include "hls/simd/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#define HLS_HAVE_AVX2 1
#else
#define HLS_HAVE_AVX2 0
#endif

namespace hls::simd::avx2 {

#if HLS_HAVE_AVX2
namespace {

// Complex values are interleaved (re, im); one __m256d holds two of them.

inline double hsum_even(__m256d v) {
  alignas(32) double t[4];
  _mm256_store_pd(t, v);
  return t[0] + t[2];
}
inline double hsum_odd(__m256d v) {
  alignas(32) double t[4];
  _mm256_store_pd(t, v);
  return t[1] + t[3];
}

// Accumulates prod = a*b (lane-wise: ar*br, ai*bi) and cross = a*swap(b) (ar*bi, ai*br).
inline void accumulate(const double* pa, const double* pb, std::size_t n, __m256d& prod, __m256d& cross,
                       std::size_t& i) {
  __m256d prod2 = _mm256_setzero_pd();
  __m256d cross2 = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4) {
    const __m256d a0 = _mm256_loadu_pd(pa + 2 * i);
    const __m256d b0 = _mm256_loadu_pd(pb + 2 * i);
    const __m256d a1 = _mm256_loadu_pd(pa + 2 * i + 4);
    const __m256d b1 = _mm256_loadu_pd(pb + 2 * i + 4);
    prod = _mm256_fmadd_pd(a0, b0, prod);
    cross = _mm256_fmadd_pd(a0, _mm256_permute_pd(b0, 0b0101), cross);
    prod2 = _mm256_fmadd_pd(a1, b1, prod2);
    cross2 = _mm256_fmadd_pd(a1, _mm256_permute_pd(b1, 0b0101), cross2);
  }
  for (; i + 2 <= n; i += 2) {
    const __m256d a0 = _mm256_loadu_pd(pa + 2 * i);
    const __m256d b0 = _mm256_loadu_pd(pb + 2 * i);
    prod = _mm256_fmadd_pd(a0, b0, prod);
    cross = _mm256_fmadd_pd(a0, _mm256_permute_pd(b0, 0b0101), cross);
  }
  prod = _mm256_add_pd(prod, prod2);
  cross = _mm256_add_pd(cross, cross2);
}

Complex cdot(const Complex* a, const Complex* b, std::size_t n) {
  const auto* pa = reinterpret_cast<const double*>(a);
  const auto* pb = reinterpret_cast<const double*>(b);
  __m256d prod = _mm256_setzero_pd();
  __m256d cross = _mm256_setzero_pd();
  std::size_t i = 0;
  accumulate(pa, pb, n, prod, cross, i);
  double re = hsum_even(prod) - hsum_odd(prod);
  double im = hsum_even(cross) + hsum_odd(cross);
  for (; i < n; ++i) {
    re += a[i].real() * b[i].real() - a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() + a[i].imag() * b[i].real();
  }
  return {re, im};
}

Complex cdotc(const Complex* a, const Complex* b, std::size_t n) {
  const auto* pa = reinterpret_cast<const double*>(a);
  const auto* pb = reinterpret_cast<const double*>(b);
  __m256d prod = _mm256_setzero_pd();
  __m256d cross = _mm256_setzero_pd();
  std::size_t i = 0;
  accumulate(pa, pb, n, prod, cross, i);
  double re = hsum_even(prod) + hsum_odd(prod);
  double im = hsum_even(cross) - hsum_odd(cross);
  for (; i < n; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {re, im};
}

void caxpy(Complex alpha, const Complex* x, Complex* y, std::size_t n) {
  const auto* px = reinterpret_cast<const double*>(x);
  auto* py = reinterpret_cast<double*>(y);
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_setr_pd(-alpha.imag(), alpha.imag(), -alpha.imag(), alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(px + 2 * i);
    __m256d yv = _mm256_loadu_pd(py + 2 * i);
    yv = _mm256_fmadd_pd(ar, xv, yv);
    yv = _mm256_fmadd_pd(ai, _mm256_permute_pd(xv, 0b0101), yv);
    _mm256_storeu_pd(py + 2 * i, yv);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void cscale_real(const double* w, const Complex* x, Complex* y, std::size_t n) {
  const auto* px = reinterpret_cast<const double*>(x);
  auto* py = reinterpret_cast<double*>(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d wv = _mm256_setr_pd(w[i], w[i], w[i + 1], w[i + 1]);
    _mm256_storeu_pd(py + 2 * i, _mm256_mul_pd(wv, _mm256_loadu_pd(px + 2 * i)));
  }
  for (; i < n; ++i) y[i] = w[i] * x[i];
}

double ddot(const double* a, const double* b, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd();
  __m256d s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), s1);
  }
  for (; i + 4 <= n; i += 4) s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
  s0 = _mm256_add_pd(s0, s1);
  alignas(32) double t[4];
  _mm256_store_pd(t, s0);
  double s = (t[0] + t[1]) + (t[2] + t[3]);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

constexpr KernelTable kTable{Isa::Avx2, cdot, cdotc, caxpy, cscale_real, ddot};

}  // namespace

const KernelTable& table() { return kTable; }
bool compiled() { return true; }

#else

const KernelTable& table() { return scalar::table(); }
bool compiled() { return false; }

#endif

}  // namespace hls::simd::avx2
