#include <random>
#include <vector>

#include "doctest.h"
#include "hls/simd/kernels.hpp"

using namespace hls::simd;

namespace {

std::vector<Complex> random_complex(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Complex> v(n);
  for (auto& z : v) z = {u(rng), u(rng)};
  return v;
}

}  // namespace

TEST_CASE("scalar kernels against std::complex arithmetic") {
  const auto a = random_complex(37, 1);
  const auto b = random_complex(37, 2);
  Complex dot{}, dotc{};
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    dotc += std::conj(a[i]) * b[i];
  }
  const auto& k = scalar::table();
  CHECK(std::abs(k.cdot(a.data(), b.data(), a.size()) - dot) < 1e-13);
  CHECK(std::abs(k.cdotc(a.data(), b.data(), a.size()) - dotc) < 1e-13);
}

TEST_CASE("avx2 kernels match scalar reference") {
  if (!isa_available(Isa::Avx2)) {
    MESSAGE("AVX2 not available; skipping");
    return;
  }
  const auto& s = scalar::table();
  const auto& v = kernels(Isa::Avx2);
  CHECK(v.isa == Isa::Avx2);
  // odd and even lengths exercise the remainder loops
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 16u, 33u, 1001u}) {
    CAPTURE(n);
    const auto a = random_complex(n, 10 + n);
    const auto b = random_complex(n, 20 + n);
    const double tol = 1e-14 * static_cast<double>(n + 1);
    CHECK(std::abs(v.cdot(a.data(), b.data(), n) - s.cdot(a.data(), b.data(), n)) < tol);
    CHECK(std::abs(v.cdotc(a.data(), b.data(), n) - s.cdotc(a.data(), b.data(), n)) < tol);

    const Complex alpha{0.3, -1.7};
    auto y1 = random_complex(n, 30 + n);
    auto y2 = y1;
    s.caxpy(alpha, a.data(), y1.data(), n);
    v.caxpy(alpha, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) < 1e-15);

    std::vector<double> w(n), r1(n), r2(n);
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = a[i].real();
      r1[i] = b[i].imag();
    }
    r2 = r1;
    std::vector<Complex> z1(n), z2(n);
    s.cscale_real(w.data(), b.data(), z1.data(), n);
    v.cscale_real(w.data(), b.data(), z2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(z1[i] - z2[i]) == 0.0);
    CHECK(std::abs(v.ddot(w.data(), r2.data(), n) - s.ddot(w.data(), r1.data(), n)) < tol);
  }
}

TEST_CASE("span wrappers use the active table") {
  const auto a = random_complex(11, 5);
  const auto b = random_complex(11, 6);
  const Complex ref = scalar::table().cdotc(a.data(), b.data(), a.size());
  CHECK(std::abs(cdotc(a, b) - ref) < 1e-13);
  CHECK(isa_name(kernels().isa).size() > 0);
}
