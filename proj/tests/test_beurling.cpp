#include "common.hpp"

using namespace plemelj;
using namespace plemelj::testing;

namespace {
FourierSeries circle_modes(std::initializer_list<std::pair<int, cplx>> m) {
  FourierSeries f(16);
  for (auto [n, c] : m) f.at(n) = c;
  return f;
}
}  // namespace

TEST(Beurling, DbarExamples) {
  const auto c = build_curve(unit_circle(), 256);
  const auto b = make_grid_box(c, 64);
  const auto re = dbar_field(c, [](cplx z) { return cplx(z.real()); }, Side::interior, b);
  const auto hol = dbar_field(c, [](cplx z) { return z * z; }, Side::interior, b);
  const auto anti = dbar_field(c, [](cplx z) { return std::conj(z); }, Side::interior, b);
  for (std::size_t k = 0; k < b.cells(); ++k) {
    if (!re.inside_mask[k] || re.values[k] == cplx{}) continue;
    EXPECT_NEAR(std::abs(re.values[k] - 0.5), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(hol.values[k]), 0.0, 1e-6);
    EXPECT_NEAR(std::abs(anti.values[k] - 1.0), 0.0, 1e-9);
  }
}

TEST(Beurling, GaussianCalibration) {
  const auto r = calibrate_beurling(1024);
  EXPECT_LT(r.relative_error, 1e-4);
  EXPECT_LT(r.isometry_error, 1e-6);
}

TEST(Beurling, GridRejectsNonPowerOfTwo) {
  EXPECT_ERROR_KIND(make_grid_box(build_curve(unit_circle(), 64), 100), ErrorKind::InvalidInput);
}

// conj z on the circle: the exterior part is -1/z, so its derivative is 1/z^2. The periodic
// images of the box add about 3 z^4 G4 / (2 half_width)^4 relative error, 1% at |z| = 2.
TEST(Beurling, CircleConjugateExteriorDerivative) {
  const auto c = build_curve(unit_circle(), 512);
  const auto ui = circle_harmonic_extension(circle_modes({{-1, 1.0}}), 1.0, 0.0, Side::interior);
  const auto b = make_grid_box(c, 1024);
  const auto di = dbar_field(c, ui, Side::interior, b);
  auto Fe = beurling_transform(di);
  for (auto& v : Fe.values) v = -v;
  double worst = 0.0, inside = 0.0;
  for (int iy = 0; iy < b.n; iy += 8)
    for (int ix = 0; ix < b.n; ix += 8) {
      const cplx z = b.cell(ix, iy);
      const double r = std::abs(z);
      if (r > 1.2 && r < 2.0) worst = std::max(worst, std::abs(Fe.at(ix, iy) * z * z - 1.0));
      if (r < 0.8) inside = std::max(inside, std::abs(Fe.at(ix, iy)));
    }
  EXPECT_LT(worst, 0.02);
  EXPECT_LT(inside, 0.02);
  EXPECT_FALSE(Fe.periodization_warning);
}

TEST(Beurling, ConstantDataGivesZeroFields) {
  const auto c = build_curve(square(), 256);
  auto one = [](cplx) { return cplx(1.0); };
  const auto r = dirichlet_split_grid(c, one, one, 0.5, 128);
  EXPECT_EQ(r.fi_weighted, 0.0);
  EXPECT_EQ(r.fe_weighted, 0.0);
  EXPECT_EQ(r.ratio_interior, 0.0);
  EXPECT_EQ(r.ratio_exterior, 0.0);
}

TEST(Beurling, SplitRatiosBoundedAcrossS) {
  const auto c = build_curve(unit_circle(), 512);
  const auto f = circle_modes({{1, 0.5}, {-1, 0.5}, {2, 0.3}});
  const auto ui = circle_harmonic_extension(f, 1.0, 0.0, Side::interior);
  const auto ue = circle_harmonic_extension(f, 1.0, 0.0, Side::exterior);
  for (double s : {0.25, 0.5, 0.75}) {
    const auto r = dirichlet_split_grid(c, ui, ue, s, 512);
    EXPECT_LE(r.ratio_interior, 2.0) << s;
    EXPECT_LE(r.ratio_exterior, 2.0) << s;
    EXPECT_GT(r.ratio_exterior, 0.0) << s;
    EXPECT_FALSE(r.weight_ill_conditioned);
  }
  EXPECT_ERROR_KIND(dirichlet_split_grid(c, ui, ue, 1.0, 64), ErrorKind::InvalidParameter);
}

// At s = 1/2 the weight is flat and B is an L2 isometry, so the output cannot exceed the input
// by more than the mass B pushes outside the box.
TEST(Beurling, IsometryBoundAtHalf) {
  const auto c = build_curve(ellipse21(), 512);
  auto u = [](cplx z) { return std::exp(-std::norm(z - cplx(0.3, 0.1))); };
  const auto r = dirichlet_split_grid(c, u, u, 0.5, 512);
  EXPECT_LE(std::sqrt(r.fe_weighted), std::sqrt(r.input_interior) * (1.0 + 1e-6));
  EXPECT_LE(std::sqrt(r.fi_weighted), std::sqrt(r.input_exterior) + r.tail + 1e-9);
}

TEST(Beurling, MaskHashStable) {
  const auto c = build_curve(square(), 256);
  const auto b = make_grid_box(c, 128);
  const auto a = inside_mask(c, b), d = inside_mask(c, b);
  EXPECT_EQ(mask_hash(a), mask_hash(d));
  auto flipped = a;
  flipped[flipped.size() / 2] ^= 1;
  EXPECT_NE(mask_hash(flipped), mask_hash(a));
}
