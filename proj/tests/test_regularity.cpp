#include "common.hpp"

using namespace plemelj;
using namespace plemelj::testing;

// [DERIVED] the t-neighborhood of the unit circle has area 4 pi t for t <= 1 and 9 pi at t = 2.
TEST(Regularity, CircleMinkowskiContent) {
  const auto m = minkowski_content(build_curve(unit_circle(), 4096), 1.0, 8);
  EXPECT_NEAR(m.M[0], 9.0 * pi / 2.0, 1e-3 * 9.0 * pi / 2.0);
  for (std::size_t j = 1; j < m.M.size(); ++j) EXPECT_NEAR(m.M[j], 4.0 * pi, 1e-2 * 4.0 * pi) << j;
  EXPECT_NEAR(m.sup, 9.0 * pi / 2.0, 1e-3 * 9.0 * pi / 2.0);
  EXPECT_ERROR_KIND(minkowski_content(build_curve(unit_circle(), 64), 2.5), ErrorKind::InvalidParameter);
}

TEST(Regularity, SquareMinkowskiContent) {
  // perimeter 8: 8 t + pi t^2 outside and 8 t - 4 t^2 inside for t <= 1
  const auto m = minkowski_content(build_curve(square(), 1024), 1.0, 8);
  for (std::size_t j = 2; j < m.t.size(); ++j) EXPECT_NEAR(m.M[j], 16.0 + (pi - 4.0) * m.t[j], 0.01 * 16.0) << j;
}

TEST(Regularity, SmoothCurvesHaveDimensionOne) {
  for (const auto& spec : {unit_circle(), square()}) {
    const auto h = estimate_h(build_curve(spec, 2048));
    EXPECT_GE(h.h, 0.95);
    EXPECT_LE(h.h, 1.05);
  }
}

// [DERIVED] log 4 / log 3 = 1.2618595071429149 for the limit curve.
TEST(Regularity, KochDimensionEstimate) {
  const auto h = estimate_h(build_curve(koch(4), 3072));
  EXPECT_GE(h.h, 1.16);
  EXPECT_LE(h.h, 1.36);
}

TEST(Regularity, RegularityConstantFiniteOnCircle) {
  const auto r = delta_regularity_constant(build_curve(unit_circle(), 2048), 1.0, 64, 1);
  EXPECT_TRUE(std::isfinite(r.value));
  EXPECT_GT(r.value, 1.0);
  for (double v : r.constants) EXPECT_LT(v, 2.0 * r.constants.back());
  EXPECT_ERROR_KIND(delta_regularity_constant(build_curve(unit_circle(), 256), 1.0, 10), ErrorKind::InvalidParameter);
}

TEST(Regularity, SolvableInterval) {
  const auto a = solvable_interval(1.0);
  EXPECT_EQ(a.first, 0.0);
  EXPECT_EQ(a.second, 1.0);
  const auto k = solvable_interval(1.2618595071429149);
  EXPECT_NEAR(k.first, 0.1309297535714575, 1e-12);
  EXPECT_NEAR(k.second, 0.8690702464285425, 1e-12);
  EXPECT_ERROR_KIND(solvable_interval(2.0), ErrorKind::EmptyInterval);
  EXPECT_ERROR_KIND(solvable_interval(0.5), ErrorKind::InvalidParameter);
}

TEST(Regularity, PorosityBounds) {
  EXPECT_GE(porosity_constant(build_curve(unit_circle(), 1024)).c, 0.24);
  EXPECT_GE(porosity_constant(build_curve(square(), 1024)).c, 0.2);
  const auto k = porosity_constant(build_curve(koch(4), 3072));
  EXPECT_GT(k.c, 0.0);
  EXPECT_LE(k.c, 0.5);
}

TEST(Regularity, FlatWeightHasUnitConstant) {
  const auto c = build_curve(unit_circle(), 1024);
  EXPECT_NEAR(ap_constant_plane(c, 1.0, 2).value, 1.0, 1e-12);
  EXPECT_NEAR(ap_constant_plane(c, 1.0, 1).value, 1.0, 1e-12);
  EXPECT_ERROR_KIND(ap_constant_plane(c, 1.0, 3), ErrorKind::InvalidParameter);
}

// [DERIVED] disks centered on a line, weight |y|^{+-1/2}: mean * mean of inverse = 1.3581221810508402.
TEST(Regularity, CircleA2AtDistancePowers) {
  const auto c = build_curve(unit_circle(), 1024);
  for (double s : {0.25, 0.75}) {
    const auto r = ap_constant_plane(c, 2.0 - 2.0 * s, 2);
    EXPECT_FALSE(r.divergent);
    EXPECT_TRUE(std::isfinite(r.value));
    EXPECT_GE(r.value, 0.98 * 1.3581221810508402) << s;
    EXPECT_LE(r.value, 3.0) << s;
  }
}

TEST(Regularity, NonIntegrableWeightDiverges) {
  const auto c = build_curve(unit_circle(), 1024);
  const auto r = ap_constant_plane(c, -0.2, 2);
  EXPECT_TRUE(r.divergent);
  EXPECT_TRUE(std::isinf(r.value));
  // a cutoff makes it finite but growing as the cutoff shrinks
  ApOptions o;
  double prev = 0.0;
  for (double eps : {1e-3, 1e-4, 1e-5}) {
    o.cutoff = eps;
    const double v = ap_constant_plane(c, -0.2, 2, o).value;
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(Regularity, CircleArcA2) {
  EXPECT_NEAR(a2_circle_constant(std::vector<double>(64, 3.0)), 1.0, 1e-12);
  EXPECT_ERROR_KIND(a2_circle_constant({1.0, 0.0, 2.0}), ErrorKind::InvalidWeight);
  // |t|^{-3/2} is not locally integrable. On midpoint samples the smallest arcs give
  // mean(w) mean(1/w) ~ M^{1/2}, so each halving of the spacing multiplies the constant by ~sqrt 2.
  auto sampled = [](std::size_t M) {
    std::vector<double> w(M);
    for (std::size_t j = 0; j < M; ++j) w[j] = std::pow(std::abs(two_pi * (j + 0.5) / M - pi), -1.5);
    return a2_circle_constant(w);
  };
  double prev = sampled(256);
  for (std::size_t M = 512; M <= 8192; M *= 2) {
    const double v = sampled(M);
    EXPECT_GT(v / prev, 1.35) << M;
    EXPECT_LT(v / prev, 1.5) << M;
    prev = v;
  }
  // |t|^{-1/2} stays bounded
  std::vector<double> w(4096);
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = std::pow(std::abs(two_pi * (j + 0.5) / w.size() - pi), -0.5);
  EXPECT_LT(a2_circle_constant(w), 3.0);
}

TEST(Regularity, ReportIsDeterministic) {
  const auto c = build_curve(square(), 512);
  const auto a = to_json(regularity_report(c, {0.5}, 7)).dump();
  const auto b = to_json(regularity_report(c, {0.5}, 7)).dump();
  EXPECT_EQ(a, b);
}
