#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "twochan/analysis.hpp"
#include "twochan/series.hpp"

using namespace twochan;

namespace {

PhysParams params(double k0, double V0, double m = 1.0, double hbar = 1.0) {
  PhysParams p;
  p.k0 = k0;
  p.V0 = V0;
  p.m = m;
  p.hbar = hbar;
  return p;
}

double dfact(int n) {
  double r = 1.0;
  for (int i = n; i > 1; i -= 2)
    r *= i;
  return r;
}

} // namespace

TEST(SeriesHighE, LeadingTermWithUnits) {
  const PhysParams p = params(1.7, 0.2, 1.3, 0.8);
  const PacketParams q{10.0, 1.0, 4.0};
  const double x = 0.7, t = 1.1;
  const auto r = psi1_series_highE(p, q, x, t, 4);
  const cplx w = complex_width(p, q, t);
  const double mk = p.m * p.m * p.k0 * p.k0;
  const cplx expect = envelope_B(p, q, x, t) * std::pow(p.hbar, 8.0) *
                      std::sqrt(pi) / (mk * mk * std::sqrt(w));
  EXPECT_LT(std::abs(r.terms[0] - expect), 1e-13 * std::abs(expect));
}

TEST(SeriesHighE, PinnedSummands) {
  // (-1)^n (2n-1)!! hbar^{4(2n+2)} sqrt(pi) / ((m^2 k0^2)^{2n+2} 2^n w^{n+1/2})
  const PhysParams p = params(2.0, 0.1, 1.1, 0.9);
  const PacketParams q{10.0, 1.0, 4.0};
  const double x = -0.4, t = 0.6;
  const auto r = psi1_series_highE(p, q, x, t, 3);
  const cplx w = complex_width(p, q, t);
  const cplx b = envelope_B(p, q, x, t);
  const double mk = p.m * p.m * p.k0 * p.k0;
  for (int n = 0; n <= 2; ++n) {
    const cplx expect = b * std::pow(-1.0, n) * dfact(2 * n - 1) *
                        std::pow(p.hbar, 4.0 * (2 * n + 2)) * std::sqrt(pi) /
                        (std::pow(mk, 2 * n + 2) * std::pow(2.0, n) *
                         std::pow(w, n + 0.5));
    EXPECT_LT(std::abs(r.terms[n] - expect), 1e-13 * std::abs(expect));
  }
}

TEST(SeriesHighE, TermRatio) {
  const PhysParams p = params(1.2, 0.1);
  const PacketParams q{10.0, 1.0, 4.0};
  const double t = 0.9;
  const auto r = psi1_series_highE(p, q, 0.0, t, 6);
  const double wabs = std::abs(complex_width(p, q, t));
  const double mk = p.k0 * p.k0;
  for (int n = 0; n < 5; ++n)
    EXPECT_NEAR(std::abs(r.terms[n + 1] / r.terms[n]),
                (2 * n + 1) / (2.0 * mk * mk * wabs), 1e-12);
}

TEST(SeriesHighE, ScatteredPartScalesInverselyWithBeta) {
  const PacketParams q{10.0, 1.0, 4.0};
  const auto a = psi1_series_highE(params(5.0, 0.1), q, 0.0, 2.5);
  const auto b = psi1_series_highE(params(50.0, 0.1), q, 0.0, 2.5);
  EXPECT_NEAR(std::abs(b.value - b.base) / std::abs(a.value - a.base), 1e-2,
              1e-4);
}

TEST(SeriesHighE, ZeroCouplingIsFree) {
  const PacketParams q{10.0, 1.0, 4.0};
  const auto r = psi1_series_highE(params(0.0, 0.1), q, 0.3, 1.0);
  EXPECT_EQ(r.value, free_evolution(params(0.0, 0.1), q, 0.3, 1.0));
  EXPECT_EQ(psi2_series_highE(params(0.0, 0.1), q, 0.3, 1.0).value,
            cplx(0.0, 0.0));
}

TEST(SeriesHighE, Channel2StaticValue) {
  // hbar = m = 1, sigma = 1, k1 = 0, x0 = 10, x = 0, t = 0, k0 = 2
  const PhysParams p = params(2.0, 0.0);
  const PacketParams q{10.0, 1.0, 0.0};
  const auto r = psi2_series_highE(p, q, 0.0, 0.0, 3);
  const cplx expect =
      cplx(0.0, 5.0) * envelope_B(p, q, 0.0, 0.0) * std::sqrt(pi) / 16.0;
  EXPECT_LT(std::abs(r.terms[0] - expect), 1e-13 * std::abs(expect));
}

TEST(SeriesHighE, Channel2PrefactorVariants) {
  const PhysParams p = params(2.0, 0.1);
  const PacketParams q{10.0, 1.5, 3.0};
  const double x = 0.5, t = 1.0;
  const auto one = psi2_series_highE(p, q, x, t, 2, 1.0);
  const auto two = psi2_series_highE(p, q, x, t, 2, 2.0);
  const double s = std::abs(x) + q.x0, s2k = q.sigma * q.sigma * q.k1;
  const cplx ratio = (s - 2.0 * I * s2k) / (s - I * s2k);
  EXPECT_LT(std::abs(two.terms[0] / one.terms[0] - ratio), 1e-13);
  EXPECT_EQ(two.terms[0], psi2_series_highE(p, q, x, t, 2).terms[0]);
}

TEST(SeriesHighE, Channel2IsEven) {
  const PhysParams p = params(2.0, 0.1);
  const PacketParams q{10.0, 1.0, 3.0};
  for (double x : {0.3, 2.0})
    EXPECT_EQ(psi2_series_highE(p, q, x, 1.5).value,
              psi2_series_highE(p, q, -x, 1.5).value);
}

TEST(SeriesLowE, RequiresOffset) {
  const PacketParams q{10.0, 1.0, 0.5};
  EXPECT_THROW(psi1_series_lowE(params(1.0, 0.0), q, 0.0, 1.0), regime_error);
  EXPECT_THROW(psi2_series_lowE(params(1.0, 0.0), q, 0.0, 1.0), regime_error);
}

TEST(SeriesLowE, EvenOrdersOnly) {
  const PacketParams q{10.0, 1.0, 0.5};
  for (std::size_t N : {1u, 4u, 5u, 12u}) {
    const auto r = psi1_series_lowE(params(1.0, 10.0), q, 0.0, 1.0, N);
    EXPECT_EQ(r.terms.size(), (N + 1) / 2 + 1) << "N = " << N;
  }
}

TEST(SeriesLowE, PinnedSummandsChannel1) {
  const PhysParams p = params(1.3, 8.0, 1.2, 0.9);
  const PacketParams q{10.0, 1.0, 0.5};
  const double x = 0.2, t = 0.7;
  const auto r = psi1_series_lowE(p, q, x, t, 4);
  const cplx w = complex_width(p, q, t);
  const cplx base = -I * p.m * p.m * p.k0 * p.k0 * std::sqrt(2.0 * p.m * p.V0);
  const cplx b = envelope_B(p, q, x, t);
  for (int s = 0; s <= 2; ++s) {
    const int n = 2 * s;
    const cplx expect = b * dfact(n - 1) * std::pow(p.hbar, 5.0 * (n + 1)) *
                        std::sqrt(pi) /
                        (std::pow(base, 2 * (n + 2)) * std::pow(2.0, n / 2.0) *
                         std::pow(w, n + 0.5));
    EXPECT_LT(std::abs(r.terms[s] - expect), 1e-13 * std::abs(expect));
  }
}

TEST(SeriesLowE, CouplingScalingOfSummands) {
  // doubling k0 scales summand n (without B) by 2^{-4(n+2)}
  const PacketParams q{10.0, 1.0, 0.5};
  const double x = 0.0, t = 1.0;
  const PhysParams a = params(1.0, 10.0), b = params(2.0, 10.0);
  const auto ra = psi1_series_lowE(a, q, x, t, 4);
  const auto rb = psi1_series_lowE(b, q, x, t, 4);
  const cplx ba = envelope_B(a, q, x, t), bb = envelope_B(b, q, x, t);
  for (int s = 0; s <= 2; ++s) {
    const int n = 2 * s;
    const cplx ratio = (rb.terms[s] / bb) / (ra.terms[s] / ba);
    EXPECT_NEAR(std::abs(ratio), std::pow(2.0, -4.0 * (n + 2)), 1e-12);
  }
}

TEST(SeriesLowE, PinnedSummandsChannel2) {
  const PhysParams p = params(1.0, 10.0);
  const PacketParams q{10.0, 1.0, 0.5};
  const double x = 0.3, t = 1.2;
  const auto r = psi2_series_lowE(p, q, x, t, 2, 2.0);
  ASSERT_EQ(r.terms.size(), 4u); // n = -1, 0, 1, 2
  const cplx w = complex_width(p, q, t);
  const double a = std::sqrt(20.0);
  const cplx pre = envelope_B(p, q, x, t) * std::exp(-a * std::abs(x));
  const cplx kap = I * (std::abs(x) + q.x0 - 2.0 * I * q.sigma * q.sigma * q.k1) /
                   (2.0 * w);
  const double c = std::sqrt(20.0); // m^2 k0^2 sqrt(2 m V0)
  const cplx n_m1 = -std::sqrt(pi) / std::sqrt(w);
  const cplx n_0 = kap * std::sqrt(pi) / (c * std::sqrt(w));
  const cplx n_1 = -std::sqrt(pi) / (c * c * 2.0 * std::pow(w, 1.5));
  const cplx n_2 = kap * std::sqrt(pi) / (c * c * c * 2.0 * std::pow(w, 1.5));
  const cplx expect[] = {n_m1, n_0, n_1, n_2};
  for (int i = 0; i < 4; ++i)
    EXPECT_LT(std::abs(r.terms[i] - pre * expect[i]),
              1e-13 * std::abs(pre * expect[i]))
        << "index " << i;
}

TEST(SeriesLowE, Channel2EvanescentEnvelope) {
  const PhysParams p = params(1.0, 10.0);
  const PacketParams q{20.0, 2.0, 1.0};
  const double t = 20.0, a = p.threshold_k();
  const double v0 = std::abs(psi2_series_lowE(p, q, 0.0, t).value);
  for (double x : {0.05, 0.1, 0.2}) {
    const double ratio = std::abs(psi2_series_lowE(p, q, x, t).value) / v0;
    EXPECT_NEAR(ratio / std::exp(-a * x), 1.0, 0.02) << "x = " << x;
  }
}

TEST(SeriesLowE, LiteralEnvelopeIsUnimodular) {
  const PhysParams p = params(1.0, 10.0);
  const PacketParams q{20.0, 2.0, 1.0};
  const auto dec = psi2_series_lowE(p, q, 0.4, 5.0, 6, 2.0);
  const auto lit =
      psi2_series_lowE(p, q, 0.4, 5.0, 6, 2.0, EnvelopeReading::literal);
  EXPECT_NEAR(std::abs(lit.value) * std::exp(-p.threshold_k() * 0.4),
              std::abs(dec.value), 1e-12 * std::abs(dec.value));
}

TEST(SeriesLowE, EvenAndZeroCoupling) {
  const PacketParams q{10.0, 1.0, 0.5};
  const PhysParams p = params(1.0, 10.0);
  for (double x : {0.2, 1.0})
    EXPECT_EQ(psi2_series_lowE(p, q, x, 2.0).value,
              psi2_series_lowE(p, q, -x, 2.0).value);
  EXPECT_EQ(psi2_series_lowE(params(0.0, 10.0), q, 0.2, 2.0).value,
            cplx(0.0, 0.0));
}

TEST(Series, OptimalTruncationStopsAtSmallestTerm) {
  const std::vector<cplx> t{1.0, 0.5, 0.1, 0.2, 5.0};
  EXPECT_EQ(detail::optimal_truncation(t), 2u);
  const std::vector<cplx> mono{1.0, 0.5, 0.1};
  EXPECT_EQ(detail::optimal_truncation(mono), 2u);
}

TEST(Series, ValueIsBasePlusTruncatedSum) {
  const PacketParams q{10.0, 1.0, 4.0};
  const auto r = psi1_series_highE(params(0.6, 0.1), q, 0.0, 2.5, 12);
  cplx s = r.base;
  for (std::size_t i = 0; i <= r.truncation_index; ++i)
    s += r.terms[i];
  EXPECT_EQ(s, r.value);
}

TEST(Series, RegimeFlags) {
  const PacketParams q{10.0, 1.0, 4.0}; // E = 8.125
  EXPECT_TRUE(psi1_series_highE(params(1.0, 0.5), q, 0.0, 1.0).regime_ok);
  EXPECT_FALSE(psi1_series_highE(params(1.0, 2.0), q, 0.0, 1.0).regime_ok);
  EXPECT_TRUE(psi1_series_lowE(params(1.0, 100.0), q, 0.0, 1.0).regime_ok);
  EXPECT_FALSE(psi1_series_lowE(params(1.0, 10.0), q, 0.0, 1.0).regime_ok);
}

TEST(SeriesParams, Validation) {
  SeriesParams sp;
  sp.n_terms = 0;
  EXPECT_THROW(sp.validate(), config_error);
  sp.n_terms = 3;
  sp.k1_factor = 1.5;
  EXPECT_THROW(sp.validate(), config_error);
  sp.k1_factor = 1.0;
  EXPECT_NO_THROW(sp.validate());
  EXPECT_DOUBLE_EQ(sp.eps0(params(2.0, 1.0)), 4.0);
  sp.regime = SeriesRegime::low_energy;
  EXPECT_DOUBLE_EQ(sp.eps0(params(2.0, 2.0)), -4.0 * 2.0);
}
