#pragma once

// Shared vocabulary: physical parameters, the initial Gaussian packet, uniform
// spatial grids and the two-channel field container.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "twochan/errors.hpp"

namespace twochan {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

/// Mass, Planck constant, delta-coupling strength and channel offset.
/// Channel 2 sits V0 above channel 1; the coupling k0*delta(x) is at x = 0.
struct PhysParams {
  double m = 1.0;
  double hbar = 1.0;
  double k0 = 0.0;
  double V0 = 0.0;

  /// (m k0 / hbar^2)^2, units 1/length^2.
  double beta() const {
    const double g = coupling();
    return g * g;
  }
  /// m k0 / hbar^2. Half the derivative jump per unit amplitude at x = 0.
  double coupling() const { return m * k0 / (hbar * hbar); }
  /// 2 m V0 / hbar^2, the squared channel-2 threshold wavenumber.
  double threshold_k2() const { return 2.0 * m * V0 / (hbar * hbar); }
  double threshold_k() const { return std::sqrt(threshold_k2()); }
  /// hbar / (2m): multiplies t in the complex packet width.
  double diffusion() const { return hbar / (2.0 * m); }

  void validate() const {
    if (!(m > 0.0) || !std::isfinite(m))
      throw domain_error("PhysParams: mass must be positive");
    if (!(hbar > 0.0) || !std::isfinite(hbar))
      throw domain_error("PhysParams: hbar must be positive");
    if (!(V0 >= 0.0) || !std::isfinite(V0))
      throw domain_error("PhysParams: V0 must be >= 0");
    if (!std::isfinite(k0))
      throw domain_error("PhysParams: k0 must be finite");
  }
};

/// Gaussian packet centred at x = -x0 with width sigma and carrier k1.
struct PacketParams {
  double x0 = 10.0;
  double sigma = 1.0;
  double k1 = 0.0;

  void validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
      throw domain_error("PacketParams: sigma must be positive");
    if (!(x0 > 0.0) || !std::isfinite(x0))
      throw domain_error("PacketParams: x0 must be positive");
    if (x0 < 5.0 * sigma)
      throw domain_error("PacketParams: x0 must be at least 5 sigma so the "
                         "packet starts left of the coupling");
    if (!std::isfinite(k1))
      throw domain_error("PacketParams: k1 must be finite");
  }
};

struct SpatialGrid {
  double x_min = -30.0;
  double x_max = 30.0;
  std::size_t n_points = 2048;

  double dx() const {
    return (x_max - x_min) / static_cast<double>(n_points - 1);
  }
  double x(std::size_t i) const {
    return x_min + static_cast<double>(i) * dx();
  }
  std::vector<double> points() const {
    std::vector<double> xs(n_points);
    for (std::size_t i = 0; i < n_points; ++i)
      xs[i] = x(i);
    return xs;
  }

  void validate() const {
    if (n_points < 3)
      throw domain_error("SpatialGrid: need at least 3 points");
    if (!(x_min < 0.0 && 0.0 < x_max))
      throw domain_error("SpatialGrid: must satisfy x_min < 0 < x_max");
  }

  friend bool operator==(const SpatialGrid &, const SpatialGrid &) = default;
};

/// Channel amplitudes psi1, psi2 sampled on a grid at time t.
struct WaveField {
  SpatialGrid grid;
  double t = 0.0;
  std::vector<cplx> psi1;
  std::vector<cplx> psi2;

  explicit WaveField(const SpatialGrid &g = {}, double time = 0.0)
      : grid(g), t(time), psi1(g.n_points), psi2(g.n_points) {}
};

/// Composite trapezoid rule on uniform spacing.
inline double trapezoid(std::span<const double> f, double dx) {
  if (f.size() < 2)
    return 0.0;
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i)
    s += f[i];
  return s * dx;
}

inline double norm_trapezoid(std::span<const cplx> psi, double dx) {
  std::vector<double> a(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i)
    a[i] = std::norm(psi[i]);
  return trapezoid(a, dx);
}

/// Complex packet width sigma^2 + i hbar t / (2m).
inline cplx complex_width(const PhysParams &p, const PacketParams &q,
                          double t) {
  return {q.sigma * q.sigma, p.diffusion() * t};
}

/// Initial amplitude at a single point; psi2 is zero at t = 0.
inline cplx initial_amplitude(const PacketParams &q, double x) {
  const double s2 = q.sigma * q.sigma;
  const double y = x + q.x0;
  const double norm = std::pow(1.0 / (2.0 * pi * s2), 0.25);
  return norm * std::exp(cplx(-y * y / (4.0 * s2), q.k1 * y));
}

inline WaveField initial_packet(const PacketParams &q, const SpatialGrid &g) {
  q.validate();
  g.validate();
  const double centre = -q.x0;
  if (g.x_min > centre - 5.0 * q.sigma || g.x_max < centre + 5.0 * q.sigma)
    throw domain_error("initial_packet: grid does not cover +-5 sigma around "
                       "the packet centre");
  WaveField f(g, 0.0);
  for (std::size_t i = 0; i < g.n_points; ++i)
    f.psi1[i] = initial_amplitude(q, g.x(i));
  return f;
}

/// Unitary Fourier transform (1/sqrt(2 pi)) int psi(x,0) e^{-ikx} dx.
inline cplx packet_fourier(const PacketParams &q, double k) {
  const double s2 = q.sigma * q.sigma;
  const double d = k - q.k1;
  return std::pow(2.0 * s2 / pi, 0.25) * std::exp(cplx(-s2 * d * d, k * q.x0));
}

/// Mean energy hbar^2 (k1^2 + 1/(4 sigma^2)) / (2m).
inline double packet_energy(const PhysParams &p, const PacketParams &q) {
  const double k2 = q.k1 * q.k1 + 1.0 / (4.0 * q.sigma * q.sigma);
  return p.hbar * p.hbar * k2 / (2.0 * p.m);
}

} // namespace twochan
