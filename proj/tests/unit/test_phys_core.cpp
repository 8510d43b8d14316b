#include <gtest/gtest.h>

#include <cmath>

#include "twochan/phys_core.hpp"

using namespace twochan;

TEST(PhysParams, DerivedConstants) {
  PhysParams p{2.0, 0.5, 3.0, 4.0};
  EXPECT_DOUBLE_EQ(p.coupling(), 2.0 * 3.0 / 0.25);
  EXPECT_DOUBLE_EQ(p.beta(), 24.0 * 24.0);
  EXPECT_DOUBLE_EQ(p.threshold_k2(), 2.0 * 2.0 * 4.0 / 0.25);
  EXPECT_DOUBLE_EQ(p.diffusion(), 0.5 / 4.0);
}

TEST(PhysParams, RejectsInvalid) {
  EXPECT_THROW((PhysParams{0.0, 1.0, 1.0, 0.0}.validate()), domain_error);
  EXPECT_THROW((PhysParams{1.0, -1.0, 1.0, 0.0}.validate()), domain_error);
  EXPECT_THROW((PhysParams{1.0, 1.0, 1.0, -0.5}.validate()), domain_error);
  EXPECT_THROW((PhysParams{1.0, 1.0, NAN, 0.0}.validate()), domain_error);
  EXPECT_NO_THROW((PhysParams{1.0, 1.0, -2.0, 0.0}.validate()));
}

TEST(PacketParams, RequiresStartLeftOfCoupling) {
  EXPECT_NO_THROW((PacketParams{10.0, 2.0, 1.0}.validate()));
  EXPECT_THROW((PacketParams{9.0, 2.0, 1.0}.validate()), domain_error);
  EXPECT_THROW((PacketParams{10.0, 0.0, 1.0}.validate()), domain_error);
}

TEST(SpatialGrid, SpacingAndValidation) {
  SpatialGrid g{-2.0, 2.0, 5};
  EXPECT_DOUBLE_EQ(g.dx(), 1.0);
  EXPECT_DOUBLE_EQ(g.x(3), 1.0);
  EXPECT_EQ(g.points().size(), 5u);
  EXPECT_THROW((SpatialGrid{1.0, 2.0, 5}.validate()), domain_error);
  EXPECT_THROW((SpatialGrid{-1.0, 2.0, 2}.validate()), domain_error);
}

TEST(InitialPacket, UnitNormAndEmptyChannel2) {
  PacketParams q{10.0, 1.0, 3.0};
  SpatialGrid g{-30.0, 30.0, 6001};
  const WaveField f = initial_packet(q, g);
  EXPECT_NEAR(norm_trapezoid(f.psi1, g.dx()), 1.0, 1e-10);
  for (const cplx &z : f.psi2)
    EXPECT_EQ(z, cplx(0.0, 0.0));
}

TEST(InitialPacket, GridMustCoverPacket) {
  PacketParams q{10.0, 1.0, 0.0};
  EXPECT_THROW(initial_packet(q, SpatialGrid{-12.0, 5.0, 100}), domain_error);
}

TEST(PacketFourier, UnitNormInK) {
  PacketParams q{10.0, 1.5, 2.0};
  double s = 0.0;
  const double dk = 1e-3;
  for (double k = -8.0; k <= 12.0; k += dk)
    s += std::norm(packet_fourier(q, k)) * dk;
  EXPECT_NEAR(s, 1.0, 1e-9);
}

TEST(PacketFourier, MatchesDirectTransform) {
  PacketParams q{6.0, 1.0, 1.5};
  const double k = 1.2, dx = 1e-3;
  cplx s{0.0, 0.0};
  for (double x = -20.0; x <= 8.0; x += dx)
    s += initial_amplitude(q, x) * std::exp(-I * k * x) * dx;
  s /= std::sqrt(2.0 * pi);
  EXPECT_NEAR(std::abs(s - packet_fourier(q, k)), 0.0, 1e-9);
}

TEST(Trapezoid, ExactForLinear) {
  const std::vector<double> f{0.0, 1.0, 2.0, 3.0};
  EXPECT_DOUBLE_EQ(trapezoid(f, 0.5), 2.25);
}

TEST(PacketEnergy, KineticMean) {
  PhysParams p;
  PacketParams q{10.0, 0.5, 2.0};
  EXPECT_DOUBLE_EQ(packet_energy(p, q), 0.5 * (4.0 + 1.0));
}
