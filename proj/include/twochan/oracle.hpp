#pragma once

// Crank-Nicolson solver for the coupled two-channel equations
//   i hbar d/dt psi1 = -hbar^2/2m psi1'' + k0 delta(x) psi2
//   i hbar d/dt psi2 = -hbar^2/2m psi2'' + V0 psi2 + k0 delta(x) psi1
// on a uniform grid with psi = 0 beyond the end points. The delta is
// replaced by a narrow normalised Gaussian. Unknowns are interleaved as
// (psi1_j, psi2_j), so each step is one 2x2 block-tridiagonal solve.
//
// The compact stencil uses the mass matrix M = tridiag(1, 10, 1)/12, i.e.
// solves (M + i a (K + M V)) psi' = (M - i a (K + M V)) psi with a = dt/2hbar.
// M and K commute, so the effective Hamiltonian M^-1 K + V stays Hermitian.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "twochan/errors.hpp"
#include "twochan/phys_core.hpp"

namespace twochan {

enum class Stencil {
  compact,      ///< fourth-order compact (Numerov) Laplacian
  second_order, ///< standard three-point Laplacian
};

enum class BoundaryKind { reflecting, absorbing };

struct Boundary {
  BoundaryKind kind = BoundaryKind::reflecting;
  double strength = 0.0; ///< peak of the imaginary ramp, energy units
  double width = 0.0;    ///< ramp length at each end
};

struct OracleConfig {
  SpatialGrid grid;
  double dt = 1e-3;
  std::size_t n_steps = 0;
  /// Width of the regularised delta; 0 selects 4 dx.
  double delta_width = 0.0;
  Boundary boundary;
  Stencil stencil = Stencil::compact;

  double effective_delta_width() const {
    return delta_width > 0.0 ? delta_width : 4.0 * grid.dx();
  }

  /// Throws config_error on hard violations and returns soft warnings.
  std::vector<std::string> validate(const PhysParams &p) const {
    grid.validate();
    std::vector<std::string> warn;
    if (!(dt > 0.0) || !std::isfinite(dt))
      throw config_error("OracleConfig: dt must be positive");
    const double dx = grid.dx();
    if (effective_delta_width() < 2.0 * dx)
      throw config_error("OracleConfig: delta_width must be >= 2 dx");
    if (boundary.kind == BoundaryKind::absorbing) {
      if (boundary.width < 10.0 * dx)
        throw config_error("OracleConfig: absorbing width must be >= 10 dx");
      if (!(boundary.strength > 0.0))
        throw config_error("OracleConfig: absorbing strength must be > 0");
    }
    if (dt > 0.5 * p.m * dx * dx / p.hbar)
      warn.push_back("dt exceeds 0.5 m dx^2 / hbar; phase accuracy of fast "
                     "components may suffer");
    return warn;
  }
};

/// Normalised Gaussian standing in for delta(x).
inline double regularized_delta(double x, double width) {
  if (!(width > 0.0))
    throw domain_error("regularized_delta: width must be positive");
  return std::exp(-0.5 * x * x / (width * width)) /
         (width * std::sqrt(2.0 * pi));
}

namespace detail {

using Mat2 = std::array<cplx, 4>; // row major
using Vec2 = std::array<cplx, 2>;

inline Mat2 mul(const Mat2 &a, const Mat2 &b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

inline Vec2 mul(const Mat2 &a, const Vec2 &v) {
  return {a[0] * v[0] + a[1] * v[1], a[2] * v[0] + a[3] * v[1]};
}

inline Mat2 inverse(const Mat2 &a, std::size_t row) {
  const cplx det = a[0] * a[3] - a[1] * a[2];
  const double scale = std::abs(a[0]) * std::abs(a[3]) +
                       std::abs(a[1]) * std::abs(a[2]);
  if (!(std::abs(det) > 1e-14 * scale))
    throw numerical_error("block solve: singular pivot at row " +
                          std::to_string(row));
  return {a[3] / det, -a[1] / det, -a[2] / det, a[0] / det};
}

} // namespace detail

/// Precomputed Crank-Nicolson step for fixed parameters.
class Propagator {
public:
  Propagator(const OracleConfig &cfg, const PhysParams &p) : cfg_(cfg) {
    p.validate();
    cfg.validate(p);
    const std::size_t n = cfg.grid.n_points;
    const double dx = cfg.grid.dx();
    const cplx a = I * (cfg.dt / (2.0 * p.hbar));
    const double kin = -p.hbar * p.hbar / (2.0 * p.m * dx * dx);
    const bool compact = cfg.stencil == Stencil::compact;
    const double m_off = compact ? 1.0 / 12.0 : 0.0;
    const double m_diag = compact ? 10.0 / 12.0 : 1.0;

    // site potentials: coupling, channel offset and absorbing ramp
    std::vector<detail::Mat2> v(n);
    const double wd = cfg.effective_delta_width();
    for (std::size_t j = 0; j < n; ++j) {
      const double x = cfg.grid.x(j);
      const double c = p.k0 * regularized_delta(x, wd);
      const cplx absorb = -I * ramp(x);
      v[j] = {absorb, c, c, p.V0 + absorb};
    }

    auto block = [&](double mass, double k, const detail::Mat2 &vv,
                     cplx s) -> detail::Mat2 {
      return {mass + s * (k + mass * vv[0]), s * mass * vv[1],
              s * mass * vv[2], mass + s * (k + mass * vv[3])};
    };

    lower_.resize(n);
    upper_.resize(n);
    diag_.resize(n);
    rhs_lower_.resize(n);
    rhs_upper_.resize(n);
    rhs_diag_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      diag_[j] = block(m_diag, -2.0 * kin, v[j], a);
      rhs_diag_[j] = block(m_diag, -2.0 * kin, v[j], -a);
      if (j > 0) {
        lower_[j] = block(m_off, kin, v[j - 1], a);
        rhs_lower_[j] = block(m_off, kin, v[j - 1], -a);
      }
      if (j + 1 < n) {
        upper_[j] = block(m_off, kin, v[j + 1], a);
        rhs_upper_[j] = block(m_off, kin, v[j + 1], -a);
      }
    }

    // block Thomas factorisation
    pivot_inv_.resize(n);
    ratio_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      detail::Mat2 d = diag_[j];
      if (j > 0) {
        const detail::Mat2 lx = detail::mul(lower_[j], ratio_[j - 1]);
        for (int e = 0; e < 4; ++e)
          d[e] -= lx[e];
      }
      pivot_inv_[j] = detail::inverse(d, j);
      if (j + 1 < n)
        ratio_[j] = detail::mul(pivot_inv_[j], upper_[j]);
    }
  }

  const OracleConfig &config() const { return cfg_; }

  /// Advance the field by one step in place.
  void advance(WaveField &f) const {
    const std::size_t n = cfg_.grid.n_points;
    if (f.psi1.size() != n || f.psi2.size() != n)
      throw domain_error("Propagator: field size does not match the grid");
    std::vector<detail::Vec2> r(n);
    for (std::size_t j = 0; j < n; ++j) {
      const detail::Vec2 here{f.psi1[j], f.psi2[j]};
      detail::Vec2 s = detail::mul(rhs_diag_[j], here);
      if (j > 0) {
        const auto t = detail::mul(rhs_lower_[j],
                                   detail::Vec2{f.psi1[j - 1], f.psi2[j - 1]});
        s[0] += t[0];
        s[1] += t[1];
      }
      if (j + 1 < n) {
        const auto t = detail::mul(rhs_upper_[j],
                                   detail::Vec2{f.psi1[j + 1], f.psi2[j + 1]});
        s[0] += t[0];
        s[1] += t[1];
      }
      r[j] = s;
    }
    // forward sweep
    for (std::size_t j = 0; j < n; ++j) {
      if (j > 0) {
        const auto t = detail::mul(lower_[j], r[j - 1]);
        r[j][0] -= t[0];
        r[j][1] -= t[1];
      }
      r[j] = detail::mul(pivot_inv_[j], r[j]);
    }
    // back substitution
    for (std::size_t j = n - 1; j-- > 0;) {
      const auto t = detail::mul(ratio_[j], r[j + 1]);
      r[j][0] -= t[0];
      r[j][1] -= t[1];
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(r[j][0].real()) || !std::isfinite(r[j][1].real()))
        throw numerical_error("Propagator: non-finite amplitude at row " +
                              std::to_string(j));
      f.psi1[j] = r[j][0];
      f.psi2[j] = r[j][1];
    }
  }

private:
  double ramp(double x) const {
    const Boundary &b = cfg_.boundary;
    if (b.kind != BoundaryKind::absorbing)
      return 0.0;
    const double left = cfg_.grid.x_min + b.width;
    const double right = cfg_.grid.x_max - b.width;
    double s = 0.0;
    if (x < left)
      s = (left - x) / b.width;
    else if (x > right)
      s = (x - right) / b.width;
    return b.strength * s * s;
  }

  OracleConfig cfg_;
  std::vector<detail::Mat2> lower_, upper_, diag_;
  std::vector<detail::Mat2> rhs_lower_, rhs_upper_, rhs_diag_;
  std::vector<detail::Mat2> pivot_inv_, ratio_;
};

/// One step; builds the factorisation, so prefer Propagator for loops.
inline WaveField step(const WaveField &state, const OracleConfig &cfg,
                      const PhysParams &p) {
  if (!(state.grid == cfg.grid))
    throw domain_error("step: state is not on the configured grid");
  Propagator prop(cfg, p);
  WaveField next = state;
  prop.advance(next);
  next.t = state.t + cfg.dt;
  return next;
}

/// cfg.n_steps steps with a snapshot every record_every steps. The initial
/// state is always first and the final state always last.
inline std::vector<WaveField> evolve(const WaveField &state,
                                     const OracleConfig &cfg,
                                     const PhysParams &p,
                                     std::size_t record_every) {
  if (!(state.grid == cfg.grid))
    throw domain_error("evolve: state is not on the configured grid");
  if (record_every == 0)
    throw config_error("evolve: record_every must be >= 1");
  std::vector<WaveField> out{state};
  if (cfg.n_steps == 0)
    return out;
  Propagator prop(cfg, p);
  WaveField f = state;
  for (std::size_t s = 1; s <= cfg.n_steps; ++s) {
    prop.advance(f);
    f.t = state.t + static_cast<double>(s) * cfg.dt;
    if (s % record_every == 0 || s == cfg.n_steps)
      out.push_back(f);
  }
  return out;
}

/// sum_j (|psi1_j|^2 + |psi2_j|^2) dx, the quantity the scheme conserves with
/// reflecting boundaries. Differs from the trapezoid norm only through the
/// end-point weights.
inline double discrete_norm(const WaveField &f) {
  double s = 0.0;
  for (std::size_t j = 0; j < f.grid.n_points; ++j)
    s += std::norm(f.psi1[j]) + std::norm(f.psi2[j]);
  return s * f.grid.dx();
}

/// Channel populations split at x = 0; the x = 0 node counts half each side.
struct Transmission {
  double R = 0.0;
  double T1 = 0.0;
  double T2 = 0.0;

  double total() const { return R + T1 + T2; }
};

inline Transmission transmission(const WaveField &f) {
  Transmission t;
  const double dx = f.grid.dx();
  const std::size_t n = f.grid.n_points;
  for (std::size_t j = 0; j < n; ++j) {
    const double w = (j == 0 || j + 1 == n) ? 0.5 * dx : dx;
    const double x = f.grid.x(j);
    const double a1 = std::norm(f.psi1[j]) * w;
    if (std::abs(x) < 1e-12 * dx) {
      t.R += 0.5 * a1;
      t.T1 += 0.5 * a1;
    } else if (x < 0.0) {
      t.R += a1;
    } else {
      t.T1 += a1;
    }
  }
  t.T2 = norm_trapezoid(f.psi2, dx);
  return t;
}

/// |psi1|^2 + |psi2|^2 at the grid node nearest x = 0.
inline double junction_density(const WaveField &f) {
  const double dx = f.grid.dx();
  const auto j = static_cast<std::size_t>(std::llround(-f.grid.x_min / dx));
  const std::size_t jj = std::min(j, f.grid.n_points - 1);
  return std::norm(f.psi1[jj]) + std::norm(f.psi2[jj]);
}

struct ClearedRun {
  WaveField field;
  Transmission populations;
  std::size_t steps = 0;
  bool cleared = false;
};

/// Step until the junction density falls below threshold * its running peak
/// (after the peak has been seen), or until cfg.n_steps.
inline ClearedRun run_until_cleared(const WaveField &state,
                                    const OracleConfig &cfg,
                                    const PhysParams &p,
                                    double threshold = 1e-8) {
  Propagator prop(cfg, p);
  ClearedRun out{state, {}, 0, false};
  double peak = junction_density(state);
  bool rising_done = false;
  double prev = peak;
  for (std::size_t s = 1; s <= cfg.n_steps; ++s) {
    prop.advance(out.field);
    out.field.t = state.t + static_cast<double>(s) * cfg.dt;
    out.steps = s;
    const double d = junction_density(out.field);
    if (d > peak)
      peak = d;
    if (d < prev)
      rising_done = true;
    prev = d;
    if (rising_done && peak > 0.0 && d < threshold * peak) {
      out.cleared = true;
      break;
    }
  }
  out.populations = transmission(out.field);
  return out;
}

} // namespace twochan
