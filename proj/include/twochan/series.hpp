#pragma once

// Truncated asymptotic series for the two limits E >> V0 and E << V0.
//
// Summands follow the closed forms term by term; only unbalanced brackets in
// the exponents are repaired. Each series is summed up to its smallest
// magnitude term (optimal truncation), capped at n_terms.

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "twochan/errors.hpp"
#include "twochan/kernel.hpp"
#include "twochan/phys_core.hpp"

namespace twochan {

enum class SeriesRegime { high_energy, low_energy };

/// Reading of the low-energy channel-2 prefactor exp(sqrt(-2 m V0 |x|)/hbar).
enum class EnvelopeReading {
  decaying, ///< exp(-sqrt(2 m V0) |x| / hbar)
  literal,  ///< exp(i sqrt(2 m V0 |x|) / hbar)
};

struct SeriesParams {
  SeriesRegime regime = SeriesRegime::high_energy;
  std::size_t n_terms = 12;
  /// Multiplier c of sigma^2 k1 in the channel-2 prefactor
  /// i (|x| + x0 - i c sigma^2 k1) / (2 w). 1 as printed, 2 as in kappa.
  double k1_factor = 2.0;
  EnvelopeReading envelope = EnvelopeReading::decaying;

  /// beta for the high-energy series, -beta sqrt(2 m V0)/hbar for low energy.
  double eps0(const PhysParams &p) const {
    if (regime == SeriesRegime::high_energy)
      return p.beta();
    return -p.beta() * p.threshold_k();
  }

  void validate() const {
    if (n_terms < 1)
      throw config_error("SeriesParams: n_terms must be >= 1");
    if (!(k1_factor == 1.0 || k1_factor == 2.0))
      throw config_error("SeriesParams: k1_factor must be 1 or 2");
  }
};

struct SeriesResult {
  cplx value{0.0, 0.0};
  /// Free part added to the scattered sum (zero for channel 2).
  cplx base{0.0, 0.0};
  /// Summands including the B(x,t) prefactor, in order of n.
  std::vector<cplx> terms;
  std::size_t truncation_index = 0;
  /// False when E/V0 lies outside the regime's validity window.
  bool regime_ok = true;
};

namespace detail {

/// (2k-1)!! style double factorial with (-1)!! = 0!! = 1.
inline double double_factorial(int n) {
  double r = 1.0;
  for (int i = n; i > 1; i -= 2)
    r *= i;
  return r;
}

/// Index of the first local minimum of |terms|, or the last index.
inline std::size_t optimal_truncation(const std::vector<cplx> &terms) {
  for (std::size_t i = 0; i + 1 < terms.size(); ++i)
    if (std::abs(terms[i + 1]) > std::abs(terms[i]))
      return i;
  return terms.empty() ? 0 : terms.size() - 1;
}

inline void finish(SeriesResult &r) {
  r.truncation_index = optimal_truncation(r.terms);
  r.value = r.base;
  for (std::size_t i = 0; i <= r.truncation_index && i < r.terms.size(); ++i)
    r.value += r.terms[i];
}

inline bool regime_holds(const PhysParams &p, const PacketParams &q,
                         SeriesRegime regime) {
  const double e = packet_energy(p, q);
  if (regime == SeriesRegime::high_energy)
    return p.V0 == 0.0 || e / p.V0 >= 10.0;
  return p.V0 > 0.0 && e / p.V0 <= 0.1;
}

inline cplx channel2_prefactor(const PacketParams &q, double x, cplx w,
                               double k1_factor) {
  const double s = std::abs(x) + q.x0;
  return I * (s - I * k1_factor * q.sigma * q.sigma * q.k1) / (2.0 * w);
}

/// (-1)^n (2n-1)!! hbar^{4(2n+2)} sqrt(pi) / ((m^2 k0^2)^{2n+2} 2^n w^{n+1/2}).
inline cplx high_energy_summand(const PhysParams &p, int n, cplx w) {
  const double ratio = std::pow(p.hbar, 4.0) / (p.m * p.m * p.k0 * p.k0);
  const double sign = n % 2 == 0 ? 1.0 : -1.0;
  return sign * double_factorial(2 * n - 1) * std::pow(ratio, 2 * n + 2) *
         std::sqrt(pi) /
         (std::pow(2.0, n) * std::pow(w, static_cast<double>(n) + 0.5));
}

/// m^2 k0^2 sqrt(2 m V0), the low-energy denominator base.
inline double low_energy_base(const PhysParams &p) {
  return p.m * p.m * p.k0 * p.k0 * std::sqrt(2.0 * p.m * p.V0);
}

inline void require_low_energy(const PhysParams &p, const char *where) {
  if (!(p.V0 > 0.0))
    throw regime_error(std::string(where) +
                       ": the low-energy series needs V0 > 0");
}

} // namespace detail

inline SeriesResult psi1_series_highE(const PhysParams &p,
                                      const PacketParams &q, double x,
                                      double t, std::size_t N = 12) {
  if (N < 1)
    throw config_error("psi1_series_highE: N must be >= 1");
  SeriesResult r;
  r.regime_ok = detail::regime_holds(p, q, SeriesRegime::high_energy);
  r.base = free_evolution(p, q, x, t);
  if (p.k0 != 0.0) {
    const cplx w = complex_width(p, q, t);
    const cplx b = envelope_B(p, q, x, t);
    for (std::size_t n = 0; n <= N; ++n)
      r.terms.push_back(b *
                        detail::high_energy_summand(p, static_cast<int>(n), w));
  }
  detail::finish(r);
  return r;
}

inline SeriesResult psi2_series_highE(const PhysParams &p,
                                      const PacketParams &q, double x,
                                      double t, std::size_t N = 12,
                                      double k1_factor = 2.0) {
  if (N < 1)
    throw config_error("psi2_series_highE: N must be >= 1");
  SeriesResult r;
  r.regime_ok = detail::regime_holds(p, q, SeriesRegime::high_energy);
  if (p.k0 != 0.0) {
    const cplx w = complex_width(p, q, t);
    const cplx pre = envelope_B(p, q, x, t) *
                     detail::channel2_prefactor(q, x, w, k1_factor);
    for (std::size_t n = 0; n <= N; ++n)
      r.terms.push_back(
          pre * detail::high_energy_summand(p, static_cast<int>(n), w));
  }
  detail::finish(r);
  return r;
}

/// Even n = 2s, s = 0..ceil(N/2):
/// (n-1)!! (hbar^5)^{n+1} sqrt(pi) /
///   ((-i m^2 k0^2 sqrt(2 m V0))^{2(n+2)} 2^{n/2} w^{n+1/2}).
inline SeriesResult psi1_series_lowE(const PhysParams &p, const PacketParams &q,
                                     double x, double t, std::size_t N = 12) {
  if (N < 1)
    throw config_error("psi1_series_lowE: N must be >= 1");
  detail::require_low_energy(p, "psi1_series_lowE");
  SeriesResult r;
  r.regime_ok = detail::regime_holds(p, q, SeriesRegime::low_energy);
  r.base = free_evolution(p, q, x, t);
  if (p.k0 != 0.0) {
    const cplx w = complex_width(p, q, t);
    const cplx b = envelope_B(p, q, x, t);
    const cplx base = -I * detail::low_energy_base(p);
    const std::size_t s_max = (N + 1) / 2;
    for (std::size_t s = 0; s <= s_max; ++s) {
      const int n = static_cast<int>(2 * s);
      const cplx den = std::pow(base, 2 * (n + 2)) * std::pow(2.0, 0.5 * n) *
                       std::pow(w, n + 0.5);
      r.terms.push_back(b * detail::double_factorial(n - 1) *
                        std::pow(p.hbar, 5.0 * (n + 1)) * std::sqrt(pi) / den);
    }
  }
  detail::finish(r);
  return r;
}

/// Two interleaved sub-series ordered by n = -1, 0, 1, 2, ...:
///   even n: kappa_c (-1)^n (n-1)!! hbar^{5(n+1)} sqrt(pi) /
///           ((m^2 k0^2 sqrt(2 m V0))^{n+1} 2^{n/2} w^{(n+1)/2})
///   odd n:  hbar^{5(n+1)} (-1)^n n!! sqrt(pi) /
///           ((m^2 k0^2 sqrt(2 m V0))^{n+1} 2^{(n+1)/2} w^{(n+2)/2})
/// all multiplied by B(x,t) and the channel-2 envelope.
inline SeriesResult psi2_series_lowE(const PhysParams &p, const PacketParams &q,
                                     double x, double t, std::size_t N = 12,
                                     double k1_factor = 2.0,
                                     EnvelopeReading env_reading =
                                         EnvelopeReading::decaying) {
  if (N < 1)
    throw config_error("psi2_series_lowE: N must be >= 1");
  detail::require_low_energy(p, "psi2_series_lowE");
  SeriesResult r;
  r.regime_ok = detail::regime_holds(p, q, SeriesRegime::low_energy);
  if (p.k0 != 0.0) {
    const cplx w = complex_width(p, q, t);
    const double ax = std::abs(x);
    const double root = std::sqrt(2.0 * p.m * p.V0);
    const cplx env = env_reading == EnvelopeReading::decaying
                         ? cplx(std::exp(-root * ax / p.hbar))
                         : std::exp(I * std::sqrt(2.0 * p.m * p.V0 * ax) /
                                    p.hbar);
    const cplx pre = envelope_B(p, q, x, t) * env;
    const cplx kap = detail::channel2_prefactor(q, x, w, k1_factor);
    const double base = detail::low_energy_base(p);
    for (int n = -1; n <= static_cast<int>(N); ++n) {
      const double sign = (n % 2 == 0) ? 1.0 : -1.0;
      const double num = std::pow(p.hbar, 5.0 * (n + 1)) * std::sqrt(pi) /
                         std::pow(base, n + 1);
      cplx term;
      if (n % 2 == 0) {
        term = kap * sign * detail::double_factorial(n - 1) * num /
               (std::pow(2.0, 0.5 * n) * std::pow(w, 0.5 * (n + 1)));
      } else {
        term = sign * detail::double_factorial(n) * num /
               (std::pow(2.0, 0.5 * (n + 1)) * std::pow(w, 0.5 * (n + 2)));
      }
      r.terms.push_back(pre * term);
    }
  }
  detail::finish(r);
  return r;
}

/// Dispatch on the configured regime.
inline SeriesResult psi1_series(const SeriesParams &sp, const PhysParams &p,
                                const PacketParams &q, double x, double t) {
  sp.validate();
  return sp.regime == SeriesRegime::high_energy
             ? psi1_series_highE(p, q, x, t, sp.n_terms)
             : psi1_series_lowE(p, q, x, t, sp.n_terms);
}

inline SeriesResult psi2_series(const SeriesParams &sp, const PhysParams &p,
                                const PacketParams &q, double x, double t) {
  sp.validate();
  return sp.regime == SeriesRegime::high_energy
             ? psi2_series_highE(p, q, x, t, sp.n_terms, sp.k1_factor)
             : psi2_series_lowE(p, q, x, t, sp.n_terms, sp.k1_factor,
                                sp.envelope);
}

} // namespace twochan
