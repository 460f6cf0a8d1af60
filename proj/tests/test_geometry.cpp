#include <random>

#include "common.hpp"

using namespace plemelj;
using namespace plemelj::testing;

TEST(Geometry, CircleNodesAreEquiangular) {
  const auto c = build_curve(unit_circle(), 16);
  EXPECT_NEAR(c.total_length, two_pi, 1e-12);
  for (std::size_t k = 0; k < 16; ++k) EXPECT_LT(std::abs(c.nodes[k] - std::polar(1.0, pi * k / 8.0)), 1e-12);
}

TEST(Geometry, SquarePerimeterAndCorners) {
  const auto c = build_curve(square(), 16);
  EXPECT_NEAR(c.total_length, 8.0, 1e-12);
  ASSERT_EQ(c.corner_indices.size(), 4u);
  std::vector<double> s = c.corner_arclengths;
  std::sort(s.begin(), s.end());
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(s[i], 2.0 * i, 1e-12);
}

TEST(Geometry, KochLengthFollowsEdgeRecursion) {
  const auto c = build_curve(koch(2), 192);
  EXPECT_NEAR(c.total_length, 16.0 / 3.0, 1e-12);
  EXPECT_EQ(koch_vertices(4, 1.0).size(), 3u * 256u);
}

TEST(Geometry, SelfIntersectingPolygonRejected) {
  CurveSpec bow{PolygonSpec{{{0, 0}, {1, 1}, {1, 0}, {0, 1}}}};
  EXPECT_ERROR_KIND(build_curve(bow, 16), ErrorKind::InvalidCurve);
}

TEST(Geometry, NonpositivePolarRadiusRejected) {
  EXPECT_ERROR_KIND(build_curve(polar({{0, 1.0}, {2, 1.5}}), 64), ErrorKind::InvalidCurve);
}

TEST(Geometry, RepeatedPointIsDegenerate) {
  EXPECT_ERROR_KIND(reparametrize_arclength({0.0, 1.0, 1.0, cplx(0, 1)}, 16), ErrorKind::DegeneratePath);
}

TEST(Geometry, EllipseGapsUniformAfterReparametrization) {
  std::vector<cplx> raw;
  for (int j = 0; j < 4000; ++j) {
    const double u = two_pi * j / 4000.0;
    const double t = u + 0.3 * std::sin(u);  // nonuniform in angle
    raw.push_back({2.0 * std::cos(t), std::sin(t)});
  }
  const auto c = reparametrize_arclength(raw, 200);
  double lo = 1e9, hi = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double g = std::abs(c.nodes[(k + 1) % c.size()] - c.nodes[k]);
    lo = std::min(lo, g), hi = std::max(hi, g);
  }
  EXPECT_LT(hi / lo - 1.0, 0.01);
}

TEST(Geometry, CircleFromNonuniformSamples) {
  std::vector<cplx> raw;
  for (int j = 0; j < 20000; ++j) {
    const double u = two_pi * j / 20000.0;
    raw.push_back(std::polar(1.0, u + 0.2 * std::sin(u)));
  }
  const auto c = reparametrize_arclength(raw, 64);
  const double rot = std::arg(c.nodes[0]);
  for (std::size_t k = 0; k < 64; ++k)
    EXPECT_LT(std::abs(c.nodes[k] / std::abs(c.nodes[k]) - std::polar(1.0, rot + two_pi * k / 64.0)), 1e-6);
}

TEST(Geometry, SquareCornersSurviveNonuniformParameter) {
  std::vector<cplx> raw;
  const cplx v[4] = {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}};
  for (int e = 0; e < 4; ++e)
    for (int j = 0; j < 37; ++j) {
      const double t = std::pow(j / 37.0, 1.7);
      raw.push_back(v[e] + t * (v[(e + 1) % 4] - v[e]));
    }
  const auto c = reparametrize_arclength(raw, 64);
  ASSERT_EQ(c.corner_arclengths.size(), 4u);
  std::vector<double> s = c.corner_arclengths;
  std::sort(s.begin(), s.end());
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(s[i], 2.0 * i, 1e-9);
}

// Arc pi over chord 2.
TEST(Geometry, CircleChordArc) { EXPECT_NEAR(chord_arc_constant(build_curve(unit_circle(), 512)), pi / 2.0, 1e-3); }

// Points opposite each other on parallel sides: chord 2, shorter arc 4.
TEST(Geometry, SquareChordArcIsTwo) { EXPECT_NEAR(chord_arc_constant(build_curve(square(), 512)), 2.0, 1e-3); }

TEST(Geometry, KochChordArcGrowsWithLevel) {
  const double k2 = chord_arc_constant(build_curve(koch(2), 768));
  const double k4 = chord_arc_constant(build_curve(koch(4), 3072));
  EXPECT_GT(k4, k2);
  EXPECT_GE(k4, 1.9);
}

// Opposite nodes exist for even N, so the discrete value is exact.
TEST(Geometry, ChordArcOnCircleNodes) {
  for (std::size_t N : {64u, 128u}) EXPECT_NEAR(chord_arc_constant(build_curve(unit_circle(), N)), pi / 2.0, 1e-12);
}

TEST(Geometry, ChordArcInvariantUnderSimilarity) {
  const double base = chord_arc_constant(build_curve(polar({{0, 1.0}, {3, 0.2}}), 256));
  const cplx a = std::polar(2.5, 0.7), b{3.0, -1.0};
  std::vector<cplx> moved;
  const auto c = build_curve(polar({{0, 1.0}, {3, 0.2}}), 256);
  for (auto z : c.nodes) moved.push_back(a * z + b);
  // The similarity maps uniform arclength nodes to uniform arclength nodes.
  const auto m = reparametrize_arclength(moved, 256);
  EXPECT_NEAR(chord_arc_constant(m) / base, 1.0, 1e-3);
}

TEST(Geometry, DistanceExamples) {
  const auto c = build_curve(unit_circle(), 256);
  EXPECT_NEAR(distance_to_curve(c, 0.0), 1.0, 1e-12);
  EXPECT_NEAR(distance_to_curve(c, 2.0), 1.0, 1e-12);
  EXPECT_NEAR(distance_to_curve(build_curve(square(), 64), 0.0), 1.0, 1e-12);
}

TEST(Geometry, LipschitzConstants) {
  EXPECT_NEAR(lipschitz_constant(polar({{0, 1.0}})), 0.0, 1e-12);
  EXPECT_NEAR(lipschitz_constant(polar({{0, 1.0}, {1, 0.2}})), 0.2, 1e-6);
  EXPECT_NEAR(lipschitz_constant(polar({{0, 1.0}, {3, 0.1}})), 0.3, 1e-6);
}

TEST(Geometry, NodesWithinOneStepAndWindOnce) {
  for (const auto& spec : {unit_circle(), square(), ellipse21(), polar({{0, 1.0}, {4, 0.125}}), koch(3)}) {
    const auto c = build_curve(spec, 384);
    const auto fine = resample(c, 4 * 384);
    for (std::size_t k = 0; k < c.size(); k += 7) EXPECT_LE(distance_to_curve(fine, c.nodes[k]), c.spacing());
    EXPECT_NEAR(winding_number(c.nodes, c.anchor), 1.0, 1e-9);
  }
}

TEST(Geometry, CurveIdStableAndRoundTrips) {
  const auto j = curve_to_json(square());
  const auto back = curve_from_json(j);
  EXPECT_EQ(curve_id(back), curve_id(square()));
  EXPECT_EQ(curve_id(square()).size(), 16u);
  EXPECT_NE(curve_id(square()), curve_id(unit_circle()));
}

TEST(Geometry, ClockwisePolygonIsReoriented) {
  CurveSpec cw{PolygonSpec{{{1, -1}, {-1, -1}, {-1, 1}, {1, 1}}}};
  const auto c = build_curve(cw, 64);
  EXPECT_GT(signed_area(c.nodes), 0.0);
}

TEST(Geometry, SignedDistanceSign) {
  const auto c = build_curve(ellipse21(), 512);
  EXPECT_GT(c.signed_distance(0.0), 0.0);
  EXPECT_LT(c.signed_distance(cplx(3.0, 0.0)), 0.0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const cplx z{u(rng), u(rng)};
    const bool in = sqr(z.real() / 2.0) + sqr(z.imag()) < 1.0;
    if (std::abs(c.signed_distance(z)) > 1e-3) EXPECT_EQ(c.inside(z), in);
  }
}
