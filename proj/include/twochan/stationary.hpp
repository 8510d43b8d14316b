#pragma once

// Stationary two-channel scattering through the point coupling at x = 0.
//
// For a unit wave e^{ikx} incident in channel 1 the junction conditions
//   [phi1'] = 2 m k0 / hbar^2 * phi2(0),   [phi2'] = 2 m k0 / hbar^2 * phi1(0)
// with continuity of both channels give
//   r  = -beta / (k k' + beta),
//   t2 = -i k (m k0 / hbar^2) / (k k' + beta),      beta = (m k0 / hbar^2)^2.

#include <array>
#include <cmath>
#include <complex>
#include <utility>

#include "twochan/errors.hpp"
#include "twochan/phys_core.hpp"

namespace twochan {

/// Channel-2 wavenumber q(k) with q^2 = k^2 - 2 m V0 / hbar^2.
///
/// This is the branch sqrt(k - a) sqrt(k + a), analytic off the segment
/// [-a, a] of the real axis and ~k at infinity. On the real axis the value
/// from above is used, so for real k >= 0 it is the root with Im >= 0
/// (decaying e^{iq|x|} in the closed channel) and q >= 0 when open.
inline cplx channel2_momentum(const PhysParams &p, cplx k) {
  const double a = p.threshold_k();
  if (k.imag() == 0.0)
    k = cplx(k.real(), 0.0); // normalise -0.0 to the upper side
  if (a == 0.0)
    return k;
  return std::sqrt(k - a) * std::sqrt(k + a);
}

struct ChannelMomenta {
  double k = 0.0;
  cplx k_prime{0.0, 0.0};
};

inline ChannelMomenta channel_momenta_at(const PhysParams &p, double k) {
  if (!(k >= 0.0))
    throw domain_error("channel_momenta: k must be >= 0");
  return {k, channel2_momentum(p, k)};
}

inline ChannelMomenta channel_momenta(const PhysParams &p, double E) {
  p.validate();
  if (!(E >= 0.0))
    throw domain_error("channel_momenta: energy must be >= 0");
  return channel_momenta_at(p, std::sqrt(2.0 * p.m * E) / p.hbar);
}

struct ScatteringAmplitudes {
  double k = 0.0;
  cplx r{0.0, 0.0};
  cplx t2{0.0, 0.0};

  /// Channel-1 transmitted amplitude.
  cplx t1() const { return 1.0 + r; }
};

inline ScatteringAmplitudes scattering_amplitudes(const PhysParams &p,
                                                  const ChannelMomenta &cm) {
  if (cm.k < 0.0)
    throw domain_error("scattering_amplitudes: k must be >= 0");
  const double beta = p.beta();
  if (cm.k == 0.0 && beta == 0.0)
    throw threshold_error("scattering_amplitudes: k = 0 without coupling is "
                          "indeterminate");
  const cplx den = cm.k * cm.k_prime + beta;
  return {cm.k, -beta / den, -I * cm.k * p.coupling() / den};
}

/// (phi1(x), phi2(x)) for unit incidence from the left in channel 1.
inline std::pair<cplx, cplx> stationary_state(const PhysParams &p,
                                              const ChannelMomenta &cm,
                                              double x) {
  const auto amp = scattering_amplitudes(p, cm);
  const double k = cm.k;
  if (x < 0.0) {
    return {std::exp(I * k * x) + amp.r * std::exp(-I * k * x),
            amp.t2 * std::exp(-I * cm.k_prime * x)};
  }
  return {amp.t1() * std::exp(I * k * x),
          amp.t2 * std::exp(I * cm.k_prime * x)};
}

/// Reflected, channel-1 transmitted and channel-2 flux fractions.
struct FluxBalance {
  double R = 0.0;
  double T1 = 0.0;
  double T2 = 0.0;
  bool channel2_open = false;

  double total() const { return R + T1 + T2; }
};

inline FluxBalance flux_balance(const PhysParams &p, const ChannelMomenta &cm) {
  const auto amp = scattering_amplitudes(p, cm);
  FluxBalance fb;
  fb.R = std::norm(amp.r);
  fb.T1 = std::norm(amp.t1());
  fb.channel2_open = cm.k_prime.imag() == 0.0 && cm.k_prime.real() > 0.0;
  if (fb.channel2_open) {
    // channel 2 radiates in both directions
    fb.T2 = 2.0 * (cm.k_prime.real() / cm.k) * std::norm(amp.t2);
  }
  return fb;
}

/// Roots of k^4 - (2 m V0 / hbar^2) k^2 - beta^2, the denominator of the
/// rationalised kernel (k k' - beta) / ((k k')^2 - beta^2).
///
/// Order follows the sign labels (-+, ++, --, +-):
///   [0] = -p, [1] = +p, [2] = -i nu, [3] = +i nu,
/// with p^2 = a^2/2 + sqrt(a^4/4 + beta^2) and -nu^2 the other root in k^2.
/// A root is genuine when k q(k) = -beta (a true zero of k k' + beta on the
/// branch of channel2_momentum) and spurious when k q(k) = +beta.
struct PoleSet {
  std::array<cplx, 4> poles{};
  std::array<bool, 4> genuine{};
  bool degenerate = false;
};

inline double quartic_relative_residual(const PhysParams &p, cplx k) {
  const double a2 = p.threshold_k2();
  const double beta = p.beta();
  const cplx k2 = k * k;
  const double scale =
      std::norm(k) * std::norm(k) + a2 * std::norm(k) + beta * beta;
  if (scale == 0.0)
    return 0.0;
  return std::abs(k2 * k2 - a2 * k2 - beta * beta) / scale;
}

inline PoleSet compute_poles(const PhysParams &p) {
  p.validate();
  const double a2 = p.threshold_k2();
  const double beta = p.beta();
  if (beta == 0.0 && a2 == 0.0)
    throw degenerate_error("compute_poles: V0 = 0 and k0 = 0 give a quadruple "
                           "root at the origin");
  const double disc = std::hypot(0.5 * a2, beta);
  const double kp2 = 0.5 * a2 + disc;
  const double km2 = -beta * beta / kp2; // product of roots is -beta^2
  const double pr = std::sqrt(kp2);
  const double nu = std::sqrt(-km2);

  PoleSet ps;
  ps.poles = {cplx(-pr, 0.0), cplx(pr, 0.0), cplx(0.0, -nu), cplx(0.0, nu)};
  if (beta == 0.0) {
    ps.degenerate = true; // double root at 0, none of them genuine
    return ps;
  }
  // k q(k) at each root, from q^2 = k^2 - a^2 = -km2 (real roots) or -kp2
  // (imaginary roots); avoids evaluating q next to the branch point, where
  // k - a cancels.
  const std::array<cplx, 4> kq{cplx(pr * nu, 0.0), cplx(pr * nu, 0.0),
                               cplx(-nu * pr, 0.0), cplx(-nu * pr, 0.0)};
  constexpr double tol = 1e-8;
  for (std::size_t l = 0; l < 4; ++l) {
    const double scale = std::abs(kq[l]) + beta;
    if (std::abs(kq[l] + beta) <= tol * scale)
      ps.genuine[l] = true;
    else if (std::abs(kq[l] - beta) <= tol * scale)
      ps.genuine[l] = false;
    else
      throw numerical_error("compute_poles: root is neither genuine nor "
                            "spurious within tolerance");
  }
  return ps;
}

} // namespace twochan
