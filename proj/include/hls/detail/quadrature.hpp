#pragma once
// Composite Gauss-Legendre rule for matrix-valued integrands.

#include <algorithm>
#include <cmath>
#include <cstddef>

#include <boost/math/quadrature/gauss.hpp>

namespace hls::detail {

/// int_a^b f(x) dx with `panels` equal panels of 20-point Gauss-Legendre.
template <class F>
auto gauss_legendre(const F& f, double a, double b, std::size_t panels) {
  using Rule = boost::math::quadrature::gauss<double, 20>;
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  const double width = (b - a) / static_cast<double>(std::max<std::size_t>(panels, 1));
  decltype(f(a)) sum = f(a) * 0.0;
  for (std::size_t p = 0; p < std::max<std::size_t>(panels, 1); ++p) {
    const double lo = a + static_cast<double>(p) * width;
    const double c = lo + 0.5 * width;
    const double h = 0.5 * width;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sum += (h * w[i]) * (f(c + h * x[i]) + f(c - h * x[i]));
    }
  }
  return sum;
}

}  // namespace hls::detail
