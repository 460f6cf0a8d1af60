#include "common.hpp"

using namespace plemelj;
using namespace plemelj::testing;

namespace {
std::vector<cplx> mode_on_circle(const SampledCurve& c, int n) {
  std::vector<cplx> v(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) v[k] = std::pow(c.nodes[k], n);
  return v;
}
}  // namespace

// [DERIVED] 2 pi W(n,s) from tools/oracle_values.py.
TEST(Sobolev, CircleDouglasMatchesOracle) {
  const auto c = build_curve(unit_circle(), 512);
  struct Row {
    int n;
    double s, ref;
  };
  const Row rows[] = {{1, 0.25, 42.58557445142258}, {2, 0.25, 68.136919122276128}, {5, 0.25, 119.66353725942725},
                      {1, 0.5, 39.478417604357434}, {3, 0.5, 118.4352528130723},   {2, 0.75, 124.26127755555961},
                      {5, 0.75, 475.8642106389044}};
  for (const auto& r : rows) EXPECT_NEAR(douglas_norm(c, mode_on_circle(c, r.n), r.s).value / r.ref, 1.0, 0.01);
}

TEST(Sobolev, DouglasConstantIsZeroAndSRangeChecked) {
  const auto c = build_curve(square(), 128);
  EXPECT_NEAR(douglas_norm(c, std::vector<cplx>(128, cplx(2.0, -1.0)), 0.4).value, 0.0, 1e-20);
  EXPECT_ERROR_KIND(douglas_norm(c, std::vector<cplx>(128, 1.0), 0.0), ErrorKind::InvalidParameter);
}

TEST(Sobolev, QuadraticHomogeneityAndTranslationInvariance) {
  const auto c = build_curve(square(), 256);
  const auto f = bump(cplx(0.3, 0.2), 0.7).on_curve(c);
  const cplx a(1.5, -0.5);
  std::vector<cplx> af(f.size()), fc(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) af[k] = a * f[k], fc[k] = f[k] + cplx(4.0, 2.0);
  for (double s : {0.25, 0.75}) {
    const double base = douglas_norm(c, f, s).value;
    EXPECT_NEAR(douglas_norm(c, af, s).value / (std::norm(a) * base), 1.0, 1e-12);
    EXPECT_NEAR(douglas_norm(c, fc, s).value / base, 1.0, 1e-12);
  }
  const auto m = solve_sc_parameters(square());
  const auto g = boundary_samples(m, [](cplx z) { return z * z; }, 512, pi / 512);
  std::vector<cplx> ag(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) ag[k] = a * g[k];
  EXPECT_NEAR(pullback_energy_trace(m, ag, pi / 512, 0.5).value / (std::norm(a) * pullback_energy_trace(m, g, pi / 512, 0.5).value), 1.0, 1e-12);
}

TEST(Sobolev, IdentityPullbackExamples) {
  const auto id = RiemannMap::identity();
  auto one = [](cplx) { return cplx(1.0); };
  EXPECT_NEAR(pullback_energy(id, one, 0.5).value, pi, 1e-6);
  EXPECT_NEAR(pullback_energy(id, one, 0.25).value, 8.0 * pi / 15.0, 1e-6);
}

// F = z on the square at s = 1/2 gives its area.
TEST(Sobolev, SquarePullbackIsArea) {
  const auto m = solve_sc_parameters(square());
  EXPECT_NEAR(pullback_energy(m, [](cplx) { return cplx(1.0); }, 0.5).value, 4.0, 0.04);
}

TEST(Sobolev, VsOnIdentityAndSquare) {
  const auto id = RiemannMap::identity();
  auto dF = [](cplx z) { return 3.0 * z * z; };
  const cplx z(0.3, -0.4);
  EXPECT_LT(std::abs(vs_transform(id, dF, 0.3, z) - z * z * z), 1e-10);
  const auto m = solve_sc_parameters(square());
  EXPECT_LT(std::abs(vs_transform(m, [](cplx) { return cplx(1.0); }, 0.5, z) - (m.eval(z) - m.eval(0.0))), 1e-8);
}

TEST(Sobolev, DirectEnergyUnitDisk) {
  const auto c = build_curve(unit_circle(), 512);
  auto u = [](cplx z) { return cplx(z.real()); };
  EXPECT_NEAR(direct_weighted_energy(c, u, 0.5, 512).value / pi, 1.0, 0.01);
  EXPECT_NEAR(direct_weighted_energy(c, [](cplx) { return cplx(2.0); }, 0.5, 256).value, 0.0, 1e-12);
  // Re z = (z + conj z) / 2, disk defect weight: w_i(1, 1/4) / 2 = pi B(1, 3/2)
  EXPECT_NEAR(direct_weighted_energy(c, u, 0.25, 512, WeightKind::circle_defect).value / (pi * 2.0 / 3.0), 1.0, 0.01);
}

// [DERIVED] 2 pi n^2 B(n, 2 - 2s) from tools/oracle_values.py.
TEST(Sobolev, CircleDirectEnergyMatchesOracle) {
  const auto c = build_curve(unit_circle(), 512);
  struct Row {
    int n;
    double s, ref;
  };
  const Row rows[] = {{1, 0.25, 4.188790204786391}, {3, 0.5, 18.849555921538759}, {5, 0.75, 127.65836814587096}};
  for (const auto& r : rows) {
    const auto v = direct_weighted_energy(c, [n = r.n](cplx z) { return std::pow(z, n); }, r.s, 512, WeightKind::circle_defect);
    EXPECT_NEAR(v.value / r.ref, 1.0, 0.01) << r.n << " " << r.s;
  }
}

// [DERIVED] trace-route energies of z^n on the disk with (1 - |z|)^{1-2s}.
TEST(Sobolev, CircleTraceEnergyMatchesOracle) {
  const auto id = RiemannMap::identity();
  std::vector<cplx> g(1024);
  for (int j = 0; j < 1024; ++j) g[j] = std::polar(1.0, 2.0 * (0.1 + two_pi * j / 1024));
  EXPECT_NEAR(pullback_energy_trace(id, g, 0.1, 0.25).value, 5.1063347258348385, 1e-6);
  EXPECT_NEAR(pullback_energy_trace(id, g, 0.1, 0.75).value, 45.957012532513547, 1e-3);
  FourierSeries f(16);
  f.at(-2) = 1.0;
  EXPECT_NEAR(circle_exterior_energy(f, 0.25), 6.1685027506808491, 1e-10);
}

// Koebe sandwich: interior pullback and direct energies within 4^{|1-2s|}.
TEST(Sobolev, KoebeSandwichOnSquare) {
  const auto m = solve_sc_parameters(square());
  const auto c = build_curve(square(), 256);
  for (const auto& f : {poly({0, 1}), poly({0, 0, 1}), pole(3.0)})
    for (double s : {0.25, 0.5, 0.75}) {
      const double pb = 2.0 * pullback_energy(m, [&](cplx z) { return f.derivative(z); }, s).value;
      const double dir = direct_weighted_energy(c, [&](cplx z) { return f.value(z); }, s, 256).value;
      // 1e-3 covers quadrature error where the bound is 1
      const double bound = std::pow(4.0, std::abs(1.0 - 2.0 * s)) * (1.0 + 1e-3);
      EXPECT_LE(pb / dir, bound);
      EXPECT_GE(pb / dir, 1.0 / bound);
    }
}

TEST(Sobolev, HardyExamples) {
  const auto id = RiemannMap::identity();
  EXPECT_NEAR(hardy_norm_e2(id, [](cplx z) { return z; }).value, 0.999 * 0.999, 1e-9);
  EXPECT_NEAR(hardy_norm_e2(id, [](cplx) { return cplx(2.0); }).value, 4.0, 1e-9);
  // Perimeter over 2 pi, approached like (1 - r)^{1/2} at the corners.
  const double h = hardy_norm_e2(solve_sc_parameters(square()), [](cplx) { return cplx(1.0); }).value;
  EXPECT_LT(h, 8.0 / two_pi);
  EXPECT_GT(h, 0.97 * 8.0 / two_pi);
}

// Hardy norm against |F(anchor)|^2 + pullback energy at s = 0, one constant for the family.
TEST(Sobolev, HardyComparableToPullbackAtZero) {
  const auto m = solve_sc_parameters(square());
  double lo = 1e300, hi = 0.0;
  for (const auto& f : {poly({1, 1}), poly({0, 0, 1}), pole(3.0), poly({0.5, 0, 0, 1})}) {
    const double e2 = hardy_norm_e2(m, [&](cplx z) { return f.value(z); }).value;
    const double a0 = std::norm(f.value(m.eval(0.0))) + pullback_energy(m, [&](cplx z) { return f.derivative(z); }, 0.0).value;
    lo = std::min(lo, e2 / a0), hi = std::max(hi, e2 / a0);
  }
  EXPECT_LT(hi / lo, 10.0);
}

TEST(Sobolev, GradientDecayBelowMeanValueConstant) {
  const auto c = build_curve(unit_circle(), 256);
  std::vector<cplx> probes;
  for (int i = 0; i < 1000; ++i) probes.push_back(std::polar(0.999 * std::sqrt((i + 0.5) / 1000.0), 2.399963 * i));
  auto u = [](cplx z) { return cplx(std::pow(z, 5).real()); };
  const double energy = direct_weighted_energy(c, u, 0.75, 512).value;
  const auto r = gradient_decay_check(u, c, 0.75, probes, energy);
  EXPECT_LT(r.max_ratio, mean_value_constant(0.75));
  const auto z = gradient_decay_check([](cplx) { return cplx(1.0); }, c, 0.75, probes, 0.0);
  EXPECT_EQ(z.max_ratio, 0.0);
}
