#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "twochan/errors.hpp"

namespace twochan {

enum class QuadScheme {
  adaptive,  ///< recursive Gauss-Kronrod 7/15, split at breakpoints
  trapezoid, ///< fixed n_nodes composite trapezoid (spectral for Gaussians)
};

/// Settings for the Gaussian-damped line integrals.
/// u_max is dimensionless: the range is u_max / sigma either side of the
/// Gaussian centre, so the neglected tail is below exp(-u_max^2).
struct QuadratureSpec {
  std::size_t n_nodes = 128;
  double u_max = 8.0;
  QuadScheme scheme = QuadScheme::adaptive;
  double rel_tol = 1e-12;
  unsigned max_depth = 20;

  void validate() const {
    if (n_nodes < 16)
      throw config_error("QuadratureSpec: n_nodes must be >= 16");
    if (!(u_max >= 6.0))
      throw config_error("QuadratureSpec: u_max must be >= 6");
    if (!(rel_tol > 0.0))
      throw config_error("QuadratureSpec: rel_tol must be positive");
  }
};

namespace detail {

/// Sorted, deduplicated breakpoints restricted to the open interval (a, b),
/// with the endpoints prepended/appended.
inline std::vector<double> segment_points(double a, double b,
                                          std::vector<double> cuts) {
  std::vector<double> pts{a};
  std::sort(cuts.begin(), cuts.end());
  const double eps = 1e-12 * std::max(1.0, b - a);
  for (double c : cuts)
    if (c > pts.back() + eps && c < b - eps)
      pts.push_back(c);
  pts.push_back(b);
  return pts;
}

} // namespace detail

/// Integrate a complex-valued f over [a, b].
template <class F>
std::complex<double> integrate(F &&f, double a, double b,
                               const QuadratureSpec &spec,
                               std::vector<double> breakpoints = {}) {
  using boost::math::quadrature::gauss_kronrod;
  std::complex<double> total{0.0, 0.0};
  if (spec.scheme == QuadScheme::trapezoid) {
    const std::size_t n = spec.n_nodes;
    const double h = (b - a) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      const double wgt = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
      total += wgt * f(a + static_cast<double>(i) * h);
    }
    total *= h;
  } else {
    const auto pts = detail::segment_points(a, b, std::move(breakpoints));
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      double err = 0.0;
      total += gauss_kronrod<double, 15>::integrate(
          f, pts[i], pts[i + 1], spec.max_depth, spec.rel_tol, &err);
    }
  }
  if (!std::isfinite(total.real()) || !std::isfinite(total.imag()))
    throw numerical_error("quadrature produced a non-finite value");
  return total;
}

} // namespace twochan
