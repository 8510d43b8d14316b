#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "twochan/errors.hpp"
#include "twochan/phys_core.hpp"
#include "twochan/quadrature.hpp"
#include "twochan/stationary.hpp"

namespace twochan {

/// (int |psi1|^2 dx, int |psi2|^2 dx) by composite trapezoid.
inline std::pair<double, double> channel_norms(const WaveField &w) {
  const double dx = w.grid.dx();
  return {norm_trapezoid(w.psi1, dx), norm_trapezoid(w.psi2, dx)};
}

/// Per-channel sqrt(int |a - b|^2 dx).
inline std::pair<double, double> l2_distance(const WaveField &a,
                                             const WaveField &b) {
  if (!(a.grid == b.grid))
    throw domain_error("l2_distance: grids differ");
  if (std::abs(a.t - b.t) > 1e-12 * std::max(1.0, std::abs(a.t)))
    throw domain_error("l2_distance: times differ");
  const std::size_t n = a.grid.n_points;
  std::vector<cplx> d1(n), d2(n);
  for (std::size_t i = 0; i < n; ++i) {
    d1[i] = a.psi1[i] - b.psi1[i];
    d2[i] = a.psi2[i] - b.psi2[i];
  }
  const double dx = a.grid.dx();
  return {std::sqrt(norm_trapezoid(d1, dx)), std::sqrt(norm_trapezoid(d2, dx))};
}

/// Relative L2 distance of |test|^2 from |ref|^2, restricted to the nodes
/// where |ref|^2 exceeds floor * max |ref|^2. Returns 0 when ref vanishes.
inline double relative_density_l2(const std::vector<cplx> &test,
                                  const std::vector<cplx> &ref,
                                  double floor = 1e-4) {
  if (test.size() != ref.size())
    throw domain_error("relative_density_l2: size mismatch");
  double peak = 0.0;
  for (const cplx &z : ref)
    peak = std::max(peak, std::norm(z));
  if (peak == 0.0)
    return 0.0;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double r = std::norm(ref[i]);
    if (r <= floor * peak)
      continue;
    const double d = std::norm(test[i]) - r;
    num += d * d;
    den += r * r;
  }
  return std::sqrt(num / den);
}

struct Populations {
  double R = 0.0;
  double T1 = 0.0;
  double T2 = 0.0;

  double total() const { return R + T1 + T2; }
};

/// int |packet_fourier(k)|^2 {R, T1, T2}(k) dk. Components with k <= 0 move
/// away from the junction and are counted as reflected.
inline Populations stationary_average(const PhysParams &p,
                                      const PacketParams &q) {
  p.validate();
  q.validate();
  const double half = 10.0 / q.sigma;
  const double lo = q.k1 - half, hi = q.k1 + half;
  QuadratureSpec spec;
  spec.rel_tol = 1e-12;
  std::vector<double> cuts{0.0};
  if (p.V0 > 0.0)
    cuts.push_back(p.threshold_k());
  auto weight = [&](double k) { return std::norm(packet_fourier(q, k)); };
  auto part = [&](int which) {
    auto f = [&](double k) -> cplx {
      if (k <= 0.0)
        return which == 0 ? weight(k) : 0.0;
      const FluxBalance fb = flux_balance(p, channel_momenta_at(p, k));
      const double v = which == 0 ? fb.R : which == 1 ? fb.T1 : fb.T2;
      return weight(k) * v;
    };
    return integrate(f, lo, hi, spec, cuts).real();
  };
  return {part(0), part(1), part(2)};
}

/// Slope of a least-squares line through (x_i, y_i).
inline double fit_slope(const std::vector<double> &x,
                        const std::vector<double> &y) {
  if (x.size() != y.size() || x.size() < 2)
    throw domain_error("fit_slope: need at least two matching points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace twochan
