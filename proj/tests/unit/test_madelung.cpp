#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mvlab/errors.hpp"
#include "mvlab/evolution.hpp"
#include "mvlab/madelung.hpp"

namespace mvlab {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Decompose, PlaneWaveModulusAndLinearPhase) {
  const SpatialGrid g(0.0, 2.0 * kPi, 128, Boundary::periodic);
  const PhysicalParams p{0.7, 1.0};
  const double k = 5.0;
  const auto polar = decompose(make_plane_wave(g, k, 2.0), p);
  const double offset = polar.phi[0] - p.hbar * k * g.x(0);
  for (std::size_t j = 0; j < g.size(); ++j) {
    EXPECT_NEAR(polar.R[j], 2.0, 1e-14);
    EXPECT_NEAR(polar.phi[j] - p.hbar * k * g.x(j), offset, 1e-11);
    EXPECT_FALSE(polar.node_mask[j]);
  }
}

TEST(Decompose, RealGaussianHasZeroPhase) {
  const SpatialGrid g(-10.0, 10.0, 256, Boundary::periodic);
  const auto polar = decompose(make_gaussian_packet(g, 0.0, 1.0, 0.0, {}), {});
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (!polar.node_mask[j]) {
      EXPECT_EQ(polar.phi[j], 0.0);
    }
  }
}

TEST(Decompose, NodeMaskMatchesThresholdAndSplitsUnwrapping) {
  const SpatialGrid g(-10.0, 10.0, 400, Boundary::periodic);
  const PhysicalParams p{};
  const auto wf = make_harmonic_eigenstate(g, 1, 1.0, p);
  const double eps = 1e-6;
  const auto polar = decompose(wf, p, eps);
  const std::size_t centre = g.nearest_index(0.0);
  EXPECT_TRUE(polar.node_mask[centre]);
  double max_r = 0.0;
  for (double r : polar.R) max_r = std::max(max_r, r);
  for (std::size_t j = 0; j < g.size(); ++j) {
    EXPECT_GE(polar.R[j], 0.0);
    EXPECT_EQ(polar.node_mask[j], polar.R[j] < eps * max_r);
  }
  // Each side is a real function of fixed sign; its phase is constant.
  const double left = polar.phi[centre - 5], right = polar.phi[centre + 5];
  for (std::size_t j = centre - 50; j < centre; ++j) EXPECT_NEAR(polar.phi[j], left, 1e-12);
  for (std::size_t j = centre + 1; j < centre + 50; ++j) EXPECT_NEAR(polar.phi[j], right, 1e-12);
  EXPECT_NEAR(std::abs(left - right), kPi * p.hbar, 1e-12);
}

TEST(Decompose, Guards) {
  const SpatialGrid g(-10.0, 10.0, 64, Boundary::periodic);
  const GridWavefunction zero(g, std::vector<Complex>(64));
  EXPECT_THROW(decompose(zero, {}), Error);
  try {
    decompose(zero, {});
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate_input);
  }
}

TEST(Recompose, IdentityAndPlaneWave) {
  const SpatialGrid g(0.0, 2.0 * kPi, 64, Boundary::periodic);
  const PhysicalParams p{};
  PolarField unit{g, std::vector<double>(64, 1.0), std::vector<double>(64, 0.0),
                  std::vector<bool>(64, false), p.hbar};
  const auto one = recompose(unit, p);
  for (std::size_t j = 0; j < g.size(); ++j) EXPECT_EQ(one[j], Complex(1.0, 0.0));

  for (std::size_t j = 0; j < g.size(); ++j) unit.phi[j] = p.hbar * 2.0 * g.x(j);
  const auto pw = recompose(unit, p);
  const auto expected = make_plane_wave(g, 2.0, 1.0);
  for (std::size_t j = 0; j < g.size(); ++j) EXPECT_NEAR(std::abs(pw[j] - expected[j]), 0.0, 1e-14);
}

TEST(Recompose, RoundTripOnEvolvedSnapshot) {
  const SpatialGrid g(-10.0, 10.0, 1024, Boundary::periodic);
  const PhysicalParams p{};
  const auto rec = evolve_schrodinger(make_gaussian_packet(g, 0.5, 1.0, 1.0, p),
                                      make_free_potential(g), p, 1e-3, 500, 500);
  const auto& wf = rec.snapshots.back().wf;
  const auto polar = decompose(wf, p);
  const auto back = recompose(polar, p);
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (polar.node_mask[j]) continue;
    EXPECT_LT(std::abs(back[j] - wf[j]) / std::abs(wf[j]), 1e-10);
  }
}

TEST(QuantumPotential, VanishesForConstantModulus) {
  const SpatialGrid g(0.0, 2.0 * kPi, 128, Boundary::periodic);
  const auto qp = quantum_potential(decompose(make_plane_wave(g, 3.0, 1.5), {}), {});
  for (double u : qp.U_quantum) EXPECT_NEAR(u, 0.0, 1e-12);
}

TEST(QuantumPotential, GaussianMatchesSymbolicDerivative) {
  const SpatialGrid g(-10.0, 10.0, 2048, Boundary::periodic);
  const PhysicalParams p{};
  const double sigma = 1.0;
  const auto qp = quantum_potential(decompose(make_gaussian_packet(g, 0.0, sigma, 0.0, p), p), p);
  std::size_t checked = 0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (qp.node_mask[j]) continue;
    const double x = g.x(j);
    const double oracle = -(p.hbar * p.hbar / (2.0 * p.mass)) *
                          (x * x / (4.0 * std::pow(sigma, 4)) - 1.0 / (2.0 * sigma * sigma));
    EXPECT_LT(std::abs(qp.U_quantum[j] - oracle), 1e-6) << "x=" << x;
    ++checked;
  }
  EXPECT_GT(checked, g.size() / 2);
}

TEST(QuantumPotential, ScaleInvariantInR) {
  const SpatialGrid g(-10.0, 10.0, 512, Boundary::periodic);
  const PhysicalParams p{};
  const auto wf = make_gaussian_packet(g, 0.3, 1.2, 0.5, p);
  std::vector<Complex> amps(wf.amplitudes().begin(), wf.amplitudes().end());
  for (auto& a : amps) a *= 7.5;
  const GridWavefunction scaled(g, amps);
  const auto a = quantum_potential(decompose(wf, p), p);
  const auto b = quantum_potential(decompose(scaled, p), p);
  for (std::size_t j = 0; j < g.size(); ++j) {
    ASSERT_EQ(a.node_mask[j], b.node_mask[j]);
    EXPECT_NEAR(a.U_quantum[j], b.U_quantum[j], 1e-12);
  }
}

TEST(QuantumPotential, ScalesWithHbarSquared) {
  const SpatialGrid g(-10.0, 10.0, 512, Boundary::periodic);
  const PhysicalParams p1{1.0, 1.0}, p2{0.1, 1.0};
  const auto wf = make_gaussian_packet(g, 0.0, 1.0, 0.0, p1);
  const auto a = quantum_potential(decompose(wf, p1), p1);
  const auto b = quantum_potential(decompose(wf, p2), p2);
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (a.node_mask[j]) continue;
    EXPECT_NEAR(b.U_quantum[j], 0.01 * a.U_quantum[j], 1e-12);
  }
}

TEST(UniverseDensity, Examples) {
  const SpatialGrid g(-10.0, 10.0, 1024, Boundary::periodic);
  const PhysicalParams p{};
  const auto gauss = universe_density(decompose(make_gaussian_packet(g, 0.0, 1.0, 0.0, p), p));
  double total = 0.0;
  for (double d : gauss) total += d * g.dx();
  EXPECT_NEAR(total, 1.0, 1e-12);

  const SpatialGrid ring(0.0, 2.0 * kPi, 64, Boundary::periodic);
  for (double d : universe_density(decompose(make_plane_wave(ring, 1.0, 3.0), p))) {
    EXPECT_NEAR(d, 9.0, 1e-12);
  }

  const auto left = make_gaussian_packet(g, -4.0, 0.8, 0.0, p);
  const auto right = make_gaussian_packet(g, 4.0, 0.8, 0.0, p);
  const double wl = 0.3, wr = 0.7;
  const auto two = superpose(left, Complex(std::sqrt(wl)), right, Complex(std::sqrt(wr)));
  const auto rho = universe_density(decompose(two, p));
  double lower = 0.0, upper = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) (g.x(j) < 0.0 ? lower : upper) += rho[j] * g.dx();
  EXPECT_NEAR(lower, wl, 1e-6);
  EXPECT_NEAR(upper, wr, 1e-6);
}

TEST(Residuals, PlaneWaveVanishes) {
  const SpatialGrid g(0.0, 2.0 * kPi, 128, Boundary::periodic);
  const PhysicalParams p{};
  const auto v = make_free_potential(g);
  const auto rec = evolve_schrodinger(make_plane_wave(g, 2.0, 1.0), v, p, 1e-3, 100, 10);
  const auto c = continuity_residual(rec, p);
  const auto hj = hamilton_jacobi_residual(rec, v, p);
  EXPECT_LT(c.l2, 1e-9);
  EXPECT_LT(hj.l2, 1e-9);
}

TEST(Residuals, HarmonicGroundStateIsStationary) {
  const SpatialGrid g(-8.0, 8.0, 512, Boundary::periodic);
  const PhysicalParams p{};
  const auto v = make_harmonic_potential(g, 1.0, p);
  const auto rec =
      evolve_schrodinger(make_harmonic_eigenstate(g, 0, 1.0, p), v, p, 1e-5, 2000, 200);
  const double eps = 1e-3;
  EXPECT_LT(continuity_residual(rec, p, eps).l2, 1e-8);
  EXPECT_LT(hamilton_jacobi_residual(rec, v, p, eps).l2, 1e-8);
}

TEST(Residuals, FreeGaussianSmallRelative) {
  const SpatialGrid g(-10.0, 10.0, 2048, Boundary::periodic);
  const PhysicalParams p{};
  const auto v = make_free_potential(g);
  const auto rec = evolve_schrodinger(make_gaussian_packet(g, 0.0, 1.0, 0.0, p), v, p, 1e-4,
                                      10000, 20);
  EXPECT_LT(continuity_residual(rec, p, 1e-3).relative, 1e-4);
  EXPECT_LT(hamilton_jacobi_residual(rec, v, p, 1e-3).relative, 1e-4);
}

TEST(Residuals, TooFewSnapshots) {
  const SpatialGrid g(-10.0, 10.0, 128, Boundary::periodic);
  const PhysicalParams p{};
  const auto v = make_free_potential(g);
  const auto rec = evolve_schrodinger(make_gaussian_packet(g, 0.0, 1.0, 0.0, p), v, p, 1e-3, 1, 1);
  try {
    continuity_residual(rec, p);
    FAIL() << "expected arity error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::arity);
  }
  EXPECT_THROW(hamilton_jacobi_residual(rec, v, p), Error);
}

}  // namespace
}  // namespace mvlab
