#pragma once

// Time-domain propagation of the Gaussian packet through the point coupling.
//
// Channel 1 splits into the free packet plus a scattered part
//   psi1_s(x,t) = B(x,t) * I(x,t),
//   I = int_R exp(-w (k - kappa)^2) / (k q(k) + beta) dk,
// with w = sigma^2 + i hbar t / 2m and kappa the completed-square shift.
// The real-line integral is evaluated by moving the contour onto the line
// k = u + kappa, which leaves
//   I = 2 pi i sum_l mu_l Res_l  +  int_R (...) du  +  C,
// where mu_l selects the genuine poles between the real axis and the shifted
// line, and C is the jump of the integrand across the channel-2 branch cut
// [-a, a] (non-zero only when the line lies below the real axis).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "twochan/errors.hpp"
#include "twochan/phys_core.hpp"
#include "twochan/quadrature.hpp"
#include "twochan/stationary.hpp"

namespace twochan {

/// kappa(x,t) = i (|x| + x0 - 2 i sigma^2 k1) / (2 w).
struct KappaShift {
  cplx value{0.0, 0.0};
};

enum class OnLinePoleRule {
  half_residue, ///< principal value on the line plus half the residue
  zero_weight,  ///< principal value only
};

/// Per-pole weights mu_l in {-1, -1/2, 0, 1/2, 1}.
struct ResidueSelection {
  std::array<double, 4> mu{};
};

struct KernelOptions {
  OnLinePoleRule pole_rule = OnLinePoleRule::half_residue;
};

/// Pole-to-line distance below which a pole counts as lying on the line.
inline constexpr double on_line_floor = 1e-6;

namespace detail {

inline double packet_distance(const PhysParams &, const PacketParams &q,
                              double x) {
  return std::abs(x) + q.x0;
}

/// (sigma^2 / (2 pi^3))^{1/4}, the k-space prefactor of the packet.
inline double kspace_prefactor(const PacketParams &q) {
  return std::pow(q.sigma * q.sigma / (2.0 * pi * pi * pi), 0.25);
}

/// log of B(x,t) / (prefactor * (-beta)): the completed-square constant
/// -sigma^2 k1^2 - (|x| + x0 - 2 i sigma^2 k1)^2 / (4 w).
inline cplx envelope_log(const PhysParams &p, const PacketParams &q, double x,
                         double t) {
  const cplx w = complex_width(p, q, t);
  const double s2 = q.sigma * q.sigma;
  const cplx st = packet_distance(p, q, x) - 2.0 * I * s2 * q.k1;
  return -s2 * q.k1 * q.k1 - st * st / (4.0 * w);
}

inline cplx kernel_denominator(const PhysParams &p, cplx k) {
  return k * channel2_momentum(p, k) + p.beta();
}

} // namespace detail

inline KappaShift kappa(const PhysParams &p, const PacketParams &q, double x,
                        double t) {
  const cplx w = complex_width(p, q, t);
  const double s2 = q.sigma * q.sigma;
  const cplx st = detail::packet_distance(p, q, x) - 2.0 * I * s2 * q.k1;
  return {I * st / (2.0 * w)};
}

/// Free Gaussian evolved in channel 1. Equals the initial packet at t = 0.
inline cplx free_evolution(const PhysParams &p, const PacketParams &q,
                           double x, double t) {
  if (t < 0.0)
    throw domain_error("free_evolution: t must be >= 0");
  const cplx w = complex_width(p, q, t);
  const double s2 = q.sigma * q.sigma;
  const double y = x + q.x0;
  const cplx amp = std::pow(2.0 * pi, -0.25) * std::sqrt(q.sigma / w);
  const double phase = q.k1 * y - p.diffusion() * q.k1 * q.k1 * t;
  return amp * std::exp(-y * y / (4.0 * w) + I * (s2 / w) * phase);
}

inline cplx envelope_B(const PhysParams &p, const PacketParams &q, double x,
                       double t) {
  if (t < 0.0)
    throw domain_error("envelope_B: t must be >= 0");
  if (p.k0 == 0.0)
    return 0.0;
  return detail::kspace_prefactor(q) * (-p.beta()) *
         std::exp(detail::envelope_log(p, q, x, t));
}

/// Which genuine poles the contour crosses when it is moved from the real
/// axis to the line Im k = Im kappa. Spurious poles always get weight 0.
inline ResidueSelection
select_residues(const PoleSet &poles, KappaShift kap,
                OnLinePoleRule rule = OnLinePoleRule::half_residue) {
  ResidueSelection sel;
  const double h = kap.value.imag();
  const double orient = h > 0.0 ? 1.0 : -1.0;
  for (std::size_t l = 0; l < 4; ++l) {
    if (!poles.genuine[l])
      continue;
    const double y = poles.poles[l].imag();
    if (std::abs(y - h) < on_line_floor) {
      sel.mu[l] = rule == OnLinePoleRule::half_residue ? 0.5 * orient : 0.0;
    } else if (h > 0.0 && y > 0.0 && y < h) {
      sel.mu[l] = 1.0;
    } else if (h < 0.0 && y < 0.0 && y > h) {
      sel.mu[l] = -1.0;
    }
  }
  return sel;
}

/// Residue of exp(-w (k - kappa)^2 + log_scale) / (k q + beta) at pole l,
/// written as N(k_l) e^{...} / prod_{i != l} (k_l - k_i), N = k q - beta.
inline cplx pole_residue(const PoleSet &poles, std::size_t l, KappaShift kap,
                         const PhysParams &p, cplx w, cplx log_scale = 0.0) {
  if (poles.degenerate)
    throw degenerate_error("pole_residue: repeated poles");
  const cplx kl = poles.poles[l];
  cplx den{1.0, 0.0};
  for (std::size_t i = 0; i < 4; ++i)
    if (i != l)
      den *= kl - poles.poles[i];
  const cplx num = kl * channel2_momentum(p, kl) - p.beta();
  const cplx d = kl - kap.value;
  return num * std::exp(-w * d * d + log_scale) / den;
}

inline cplx residue_sum(const PoleSet &poles, const ResidueSelection &sel,
                        KappaShift kap, const PhysParams &p, cplx w,
                        cplx log_scale = 0.0) {
  if (poles.degenerate)
    throw degenerate_error("residue_sum: repeated poles");
  cplx sum{0.0, 0.0};
  for (std::size_t l = 0; l < 4; ++l)
    if (sel.mu[l] != 0.0)
      sum += sel.mu[l] * pole_residue(poles, l, kap, p, w, log_scale);
  return 2.0 * pi * I * sum;
}

/// int_R exp(-w u^2 + log_scale) / ((u + kappa) q(u + kappa) + beta) du.
///
/// A genuine pole closer to the line than a safe margin is handled by moving
/// the line past the pole, away from the real axis, and restoring the
/// crossed residue analytically. A pole within on_line_floor of the line
/// yields the principal value.
inline cplx line_integral_u(KappaShift kap, const PoleSet &poles,
                            const PhysParams &p, cplx w,
                            const QuadratureSpec &quad, cplx log_scale = 0.0) {
  const double sigma = std::sqrt(w.real());
  if (!(w.real() > 0.0))
    throw domain_error("line_integral_u: Re(w) must be positive");
  const double tau = w.imag();
  const double h = kap.value.imag();

  double margin = 0.5 / sigma;
  if (tau > 0.0)
    margin = std::min(margin, 0.5 * sigma / tau);

  double shift = 0.0;
  cplx correction{0.0, 0.0};
  if (!poles.degenerate) {
    for (std::size_t l = 0; l < 4; ++l) {
      if (!poles.genuine[l])
        continue;
      const double y = poles.poles[l].imag();
      const double near = std::min(margin, 0.5 * std::abs(y));
      const double d = y - h;
      if (std::abs(d) >= near)
        continue;
      const double side = y > 0.0 ? 1.0 : -1.0;
      shift = y + side * near - h;
      const cplx res = pole_residue(poles, l, kap, p, w, log_scale);
      if (std::abs(d) < on_line_floor)
        correction = side * pi * I * res;
      else if (side * d > 0.0) // line between pole and real axis
        correction = side * 2.0 * pi * I * res;
      break;
    }
  }

  const cplx base = kap.value + I * shift;
  auto f = [&](double u) {
    const cplx k = base + u;
    const cplx v = u + I * shift;
    return std::exp(-w * v * v + log_scale) / detail::kernel_denominator(p, k);
  };

  const double centre = tau * shift / (sigma * sigma);
  const double half = quad.u_max / sigma;
  std::vector<double> cuts;
  for (std::size_t l = 0; l < 4; ++l)
    if (poles.genuine[l])
      cuts.push_back(poles.poles[l].real() - base.real());
  const double a = p.threshold_k();
  if (a > 0.0) {
    cuts.push_back(a - base.real());
    cuts.push_back(-a - base.real());
  }
  return integrate(f, centre - half, centre + half, quad, std::move(cuts)) +
         correction;
}

/// Jump of the integrand across the branch cut [-a, a]:
/// int_{-a}^{a} [f(k + i0) - f(k - i0)] dk. Zero unless Im kappa < 0.
inline cplx branch_cut_integral(KappaShift kap, const PhysParams &p, cplx w,
                                const QuadratureSpec &quad,
                                cplx log_scale = 0.0) {
  const double a = p.threshold_k();
  if (a == 0.0 || !(kap.value.imag() < 0.0))
    return 0.0;
  const double beta = p.beta();
  // k = a sin(theta) removes the square-root endpoint behaviour
  auto f = [&](double th) {
    const double k = a * std::sin(th);
    const double c = a * std::cos(th);
    const cplx d = k - kap.value;
    const cplx g = std::exp(-w * d * d + log_scale);
    return g * (-2.0 * I * k * c) * c / (beta * beta + k * k * c * c);
  };
  QuadratureSpec q = quad;
  q.scheme = QuadScheme::adaptive;
  return integrate(f, -0.5 * pi, 0.5 * pi, q, {0.0});
}

/// Scattered channel-1 wave B(x,t) [residues + line integral + cut term].
inline cplx psi1_scattered(const PhysParams &p, const PacketParams &q, double x,
                           double t, const QuadratureSpec &quad = {},
                           const KernelOptions &opts = {}) {
  if (t < 0.0)
    throw domain_error("psi1_scattered: t must be >= 0");
  if (p.k0 == 0.0)
    return 0.0;
  const cplx w = complex_width(p, q, t);
  const KappaShift kap = kappa(p, q, x, t);
  const PoleSet poles = compute_poles(p);
  const ResidueSelection sel = select_residues(poles, kap, opts.pole_rule);
  // B = prefactor * (-beta) * exp(log_b); folding exp(log_b) into every
  // exponent keeps each piece finite far from the packet
  const cplx log_b = detail::envelope_log(p, q, x, t);
  const cplx total = residue_sum(poles, sel, kap, p, w, log_b) +
                     line_integral_u(kap, poles, p, w, quad, log_b) +
                     branch_cut_integral(kap, p, w, quad, log_b);
  return detail::kspace_prefactor(q) * (-p.beta()) * total;
}

inline cplx psi1_total(const PhysParams &p, const PacketParams &q, double x,
                       double t, const QuadratureSpec &quad = {},
                       const KernelOptions &opts = {}) {
  return free_evolution(p, q, x, t) + psi1_scattered(p, q, x, t, quad, opts);
}

/// Channel-2 amplitude by direct quadrature over the packet's k window:
/// prefactor * int e^{-sigma^2 (k-k1)^2 + i k x0} t2(k) e^{-i hbar k^2 t / 2m}
/// e^{i q(k) |x|} dk. The channel-2 phase uses E2 = hbar^2 q^2/2m + V0, which
/// equals the channel-1 energy hbar^2 k^2 / 2m.
inline cplx psi2(const PhysParams &p, const PacketParams &q, double x,
                 double t, const QuadratureSpec &quad = {}) {
  if (t < 0.0)
    throw domain_error("psi2: t must be >= 0");
  if (p.k0 == 0.0)
    return 0.0;
  const double s2 = q.sigma * q.sigma;
  const double tau = p.diffusion() * t;
  const double ax = std::abs(x);
  const double g = p.coupling();
  const double beta = p.beta();
  auto f = [&](double k) {
    const cplx qk = channel2_momentum(p, k);
    const double d = k - q.k1;
    const cplx t2 = -I * k * g / (k * qk + beta);
    return t2 * std::exp(cplx(-s2 * d * d, k * q.x0 - tau * k * k) +
                         I * qk * ax);
  };
  const double half = std::max(8.0, quad.u_max) / q.sigma;
  const double a = p.threshold_k();
  QuadratureSpec qs = quad;
  qs.scheme = QuadScheme::adaptive;
  return detail::kspace_prefactor(q) *
         integrate(f, q.k1 - half, q.k1 + half, qs, {-a, a});
}

/// Analytic fields on a grid at time t.
inline WaveField analytic_field(const PhysParams &p, const PacketParams &q,
                                const SpatialGrid &g, double t,
                                const QuadratureSpec &quad = {},
                                const KernelOptions &opts = {}) {
  WaveField f(g, t);
  for (std::size_t i = 0; i < g.n_points; ++i) {
    const double x = g.x(i);
    f.psi1[i] = psi1_total(p, q, x, t, quad, opts);
    f.psi2[i] = psi2(p, q, x, t, quad);
  }
  return f;
}

} // namespace twochan
