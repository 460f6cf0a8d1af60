#include <random>

#include "common.hpp"

using namespace plemelj;
using namespace plemelj::testing;

namespace {
std::vector<double> gaps(const SCData& d) {
  std::vector<double> g;
  const std::size_t n = d.theta.size();
  for (std::size_t k = 0; k < n; ++k) g.push_back(k + 1 < n ? d.theta[k + 1] - d.theta[k] : d.theta[0] + two_pi - d.theta[k]);
  return g;
}
}  // namespace

TEST(Conformal, SquarePrevertexSymmetry) {
  const auto m = solve_sc_parameters(square());
  EXPECT_LT(m.sc()->side_residual, 1e-10);
  for (double g : gaps(*m.sc())) EXPECT_NEAR(g, pi / 2.0, 1e-8);
  EXPECT_LT(std::abs(m.eval(0.0)), 1e-10);
  const cplx d0 = m.derivative(0.0);
  EXPECT_GT(d0.real(), 0.0);
  EXPECT_NEAR(d0.imag(), 0.0, 1e-10);
}

TEST(Conformal, TrianglePrevertexSymmetry) {
  CurveSpec tri{PolygonSpec{{{1, 0}, {-0.5, std::sqrt(3.0) / 2}, {-0.5, -std::sqrt(3.0) / 2}}}};
  for (double g : gaps(*solve_sc_parameters(tri).sc())) EXPECT_NEAR(g, two_pi / 3.0, 1e-8);
}

TEST(Conformal, RectangleSideLengths) {
  CurveSpec rect{PolygonSpec{{{1, 0.5}, {-1, 0.5}, {-1, -0.5}, {1, -0.5}}}};
  const auto m = solve_sc_parameters(rect);
  const auto& d = *m.sc();
  for (std::size_t k = 0; k < 4; ++k) EXPECT_LT(std::abs(d.images[k] - d.vertices[k]), 1e-8 * 2.0 * std::sqrt(1.25));
}

TEST(Conformal, SharpSpikeIsIllConditioned) {
  CurveSpec spike{PolygonSpec{{{0, 0}, {10, 0.2}, {0, 0.4}}}};
  EXPECT_ERROR_KIND(solve_sc_parameters(spike), ErrorKind::IllConditioned);
}

TEST(Conformal, SquareHardyNormIsPerimeterOverTwoPi) {
  const auto m = solve_sc_parameters(square());
  EXPECT_NEAR(m.boundary_length(), 8.0, 1e-8);
}

TEST(Conformal, KoebeDistortion) {
  for (const auto& spec : {square(), polar({{0, 1.0}, {4, 0.125}}), ellipse21()}) {
    const auto m = riemann_map_for(spec);
    const auto c = build_curve(spec, 1024);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
      const double r = 0.995 * std::sqrt(u(rng));
      const cplx z = std::polar(r, two_pi * u(rng));
      const double q = c.distance(m.eval(z)) / ((1.0 - r) * std::abs(m.derivative(z)));
      EXPECT_GE(q, 0.25);
      EXPECT_LE(q, 4.0);
    }
  }
}

TEST(Conformal, TheodorsenOnCircleIsIdentity) {
  const auto m = theodorsen_solve(polar({{0, 1.0}}), 256);
  for (double t : {0.0, 1.0, 4.0}) EXPECT_NEAR(m.boundary_theta(t), t, 1e-12);
  EXPECT_LT(std::abs(m.eval(cplx(0.3, 0.2)) - cplx(0.3, 0.2)), 1e-12);
}

TEST(Conformal, TheodorsenMonotoneWithNonvanishingDerivative) {
  const auto m = theodorsen_solve(polar({{0, 1.0}, {1, 0.2}}), 1024, 1e-10);
  double prev = -1.0;
  for (int j = 0; j < 512; ++j) {
    const double t = two_pi * j / 512;
    EXPECT_GT(m.boundary_theta_prime(t), 0.0);
    EXPECT_GT(std::abs(m.derivative(std::polar(0.99, t))), 0.0);
    const double th = m.boundary_theta(t);
    EXPECT_GT(th, prev);
    prev = th;
  }
}

TEST(Conformal, TheodorsenBoundaryOnCurve) {
  const PolarLipschitzSpec p{{{0, 1.0}, {3, 0.1}}};
  const auto m = theodorsen_solve(CurveSpec{p}, 1024);
  for (int j = 0; j < 200; ++j) {
    const cplx w = m.boundary_point(two_pi * j / 200);
    EXPECT_NEAR(std::abs(w), p.radius(std::arg(w)), 1e-8);
  }
}

TEST(Conformal, TheodorsenRejectsNonContraction) {
  EXPECT_ERROR_KIND(theodorsen_solve(polar({{0, 1.0}, {4, 0.4}}), 256), ErrorKind::TheodorsenDiverged);
}

TEST(Conformal, CorrespondenceIdentityAndMonotone) {
  const auto c = build_curve(unit_circle(), 128);
  const auto bc = boundary_correspondence(RiemannMap::identity(), c, 256);
  for (std::size_t j = 0; j < bc.size(); ++j) {
    EXPECT_NEAR(bc.h_prime_abs[j], 1.0, 1e-12);
    EXPECT_NEAR(bc.h_values[j] - bc.h_values[0], bc.t[j] - bc.t[0], 1e-9);
  }
  const auto spec = polar({{0, 1.0}, {1, 0.2}});
  const auto bp = boundary_correspondence(theodorsen_solve(spec, 1024), build_curve(spec, 256));
  for (std::size_t j = 1; j < bp.size(); ++j) EXPECT_GT(bp.h_values[j], bp.h_values[j - 1]);
}

TEST(Conformal, MismatchedCurveRejected) {
  const auto m = solve_sc_parameters(square());
  CurveSpec other{PolygonSpec{{{2, 1}, {-1, 1}, {-1, -1}, {1, -1}}}};
  EXPECT_ERROR_KIND(boundary_correspondence(m, build_curve(other, 64)), ErrorKind::CurveMapMismatch);
}

// The half-shifted resampling is monotone cubic, so the error falls by 4 per doubling.
TEST(Conformal, ConjugateCosineOnCircle) {
  double prev = 0.0;
  for (int N : {64, 128, 256, 512}) {
    const auto c = build_curve(unit_circle(), N);
    const auto bc = boundary_correspondence(RiemannMap::identity(), c);
    std::vector<cplx> f(N), one(N, 1.0);
    for (int k = 0; k < N; ++k) f[k] = std::cos(two_pi * k / N);
    const auto g = conjugate_on_curve(f, c, bc);
    double e = 0.0;
    for (int k = 0; k < N; ++k) e = std::max(e, std::abs(g[k] - std::sin(two_pi * k / N)));
    EXPECT_LT(e, 5e-3);
    if (prev > 0.0) EXPECT_NEAR(prev / e, 4.0, 0.4) << N;
    prev = e;
    for (auto v : conjugate_on_curve(one, c, bc)) EXPECT_NEAR(std::abs(v), 0.0, 1e-12);
  }
}

// Re z on the square conjugates to Im z up to a constant.
TEST(Conformal, ConjugateRealPartOnSquare) {
  const auto m = solve_sc_parameters(square());
  const auto c = build_curve(square(), 256);
  const auto bc = boundary_correspondence(m, c, 2048);
  std::vector<cplx> f(256);
  for (int k = 0; k < 256; ++k) f[k] = c.nodes[k].real();
  const auto g = conjugate_on_curve(f, c, bc, &m);
  cplx shift{};
  for (int k = 0; k < 256; ++k) shift += (g[k] - c.nodes[k].imag()) / 256.0;
  for (int k = 0; k < 256; ++k) EXPECT_NEAR(std::abs(g[k] - shift - c.nodes[k].imag()), 0.0, 1e-5);
}

TEST(Conformal, ConjugateTwiceIsMinusIdentity) {
  const auto m = solve_sc_parameters(square());
  const auto c = build_curve(square(), 256);
  const auto bc = boundary_correspondence(m, c, 2048);
  std::vector<cplx> f(256);
  for (int k = 0; k < 256; ++k) f[k] = std::exp(-std::norm(c.nodes[k] - cplx(0.5, 0.2)));
  f = mean_centered(c, f);
  const auto g = conjugate_on_curve(f, c, bc, &m);
  const auto gg = conjugate_on_curve(g, c, bc, &m);
  // H^2 = -I up to the mean in the disk parametrization.
  cplx mean{};
  for (int k = 0; k < 256; ++k) mean += (gg[k] + f[k]) / 256.0;
  for (int k = 0; k < 256; ++k) EXPECT_LT(std::abs(gg[k] - mean + f[k]), 5e-3);
}

TEST(Conformal, ArcA2OfBoundarySpeedStable) {
  for (const auto& spec : {square(), polar({{0, 1.0}, {4, 0.125}})}) {
    const auto m = riemann_map_for(spec);
    std::vector<double> a;
    for (std::size_t M : {1024u, 2048u}) {
      std::vector<double> w(M);
      for (std::size_t j = 0; j < M; ++j) w[j] = m.boundary_speed(two_pi * (j + 0.5) / M);
      a.push_back(a2_circle_constant(w));
    }
    EXPECT_TRUE(std::isfinite(a[1]));
    EXPECT_NEAR(a[1] / a[0], 1.0, 0.1);
  }
}

TEST(Conformal, MapJsonRoundTrip) {
  const auto m = solve_sc_parameters(square());
  const auto back = map_from_json(map_to_json(m));
  for (cplx z : {cplx(0.1, 0.2), cplx(-0.5, 0.3), cplx(0.7, -0.6)}) EXPECT_LT(std::abs(back.eval(z) - m.eval(z)), 1e-12);
}
