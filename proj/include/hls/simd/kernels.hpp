#pragma once
// Data-parallel inner loops used by the quadrature and Nystrom code.
//
// Every kernel has a scalar reference implementation; an AVX2/FMA variant is
// compiled separately and chosen at runtime when the CPU reports support.
// Setting HLS_SIMD=scalar in the environment forces the reference path.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace hls::simd {

using Complex = std::complex<double>;

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  Isa isa;
  // sum_i a[i] * b[i]
  Complex (*cdot)(const Complex* a, const Complex* b, std::size_t n);
  // sum_i conj(a[i]) * b[i]
  Complex (*cdotc)(const Complex* a, const Complex* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*caxpy)(Complex alpha, const Complex* x, Complex* y, std::size_t n);
  // y[i] = w[i] * x[i]   (real weights, complex data)
  void (*cscale_real)(const double* w, const Complex* x, Complex* y, std::size_t n);
  // sum_i a[i] * b[i]
  double (*ddot)(const double* a, const double* b, std::size_t n);
};

bool isa_available(Isa isa);
const KernelTable& kernels(Isa isa);
/// The table selected for this process (best available unless overridden).
const KernelTable& kernels();
std::string_view isa_name(Isa isa);

namespace scalar {
const KernelTable& table();
}
namespace avx2 {
// Only valid to call when isa_available(Isa::Avx2).
const KernelTable& table();
bool compiled();
}  // namespace avx2

inline Complex cdot(std::span<const Complex> a, std::span<const Complex> b) {
  return kernels().cdot(a.data(), b.data(), a.size());
}
inline Complex cdotc(std::span<const Complex> a, std::span<const Complex> b) {
  return kernels().cdotc(a.data(), b.data(), a.size());
}
inline void caxpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y) {
  kernels().caxpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace hls::simd
