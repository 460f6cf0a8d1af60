#include "common.hpp"

using namespace plemelj;
using namespace plemelj::testing;

namespace {
std::vector<cplx> samples(int N, const std::function<cplx(double)>& f) {
  std::vector<cplx> v(N);
  for (int k = 0; k < N; ++k) v[k] = f(two_pi * k / N);
  return v;
}
}  // namespace

TEST(Spectral, AnalyzeBasicSignals) {
  auto e1 = analyze(samples(8, [](double t) { return std::polar(1.0, t); }));
  for (int n = -4; n < 4; ++n) EXPECT_NEAR(std::abs(e1[n] - (n == 1 ? 1.0 : 0.0)), 0.0, 1e-14);
  auto one = analyze(samples(8, [](double) { return cplx(1.0); }));
  EXPECT_NEAR(std::abs(one[0] - 1.0), 0.0, 1e-14);
  auto c = analyze(samples(8, [](double t) { return cplx(std::cos(t)); }));
  EXPECT_NEAR(std::abs(c[1] - 0.5), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(c[-1] - 0.5), 0.0, 1e-14);
}

TEST(Spectral, OddLengthRejected) {
  EXPECT_ERROR_KIND(analyze(std::vector<cplx>(7, 1.0)), ErrorKind::InvalidInput);
}

TEST(Spectral, FourierSeminorm) {
  FourierSeries f(16);
  f.at(1) = 1.0;
  for (double s : {0.0, 0.3, 1.0}) EXPECT_DOUBLE_EQ(hs_norm_fourier(f, s), 1.0);
  FourierSeries g(16);
  g.at(3) = 1.0;
  EXPECT_NEAR(hs_norm_fourier(g, 0.5), 3.0, 1e-14);
  FourierSeries h(16);
  h.at(1) = 1.0, h.at(2) = 1.0;
  EXPECT_NEAR(hs_norm_fourier(h, 0.25), 1.0 + std::sqrt(2.0), 1e-14);
  EXPECT_ERROR_KIND(hs_norm_fourier(f, 1.5), ErrorKind::InvalidParameter);
}

TEST(Spectral, ConjugateFunction) {
  auto H = hilbert_transform(analyze(samples(32, [](double t) { return cplx(std::cos(t)); })));
  const auto v = H.synthesize();
  for (int k = 0; k < 32; ++k) EXPECT_NEAR(std::abs(v[k] - std::sin(two_pi * k / 32)), 0.0, 1e-14);
  FourierSeries c(16);
  c.at(0) = 3.0;
  EXPECT_EQ(hilbert_transform(c).l2_norm2(), 0.0);
  FourierSeries e5(16);
  e5.at(5) = 1.0;
  EXPECT_NEAR(std::abs(hilbert_transform(e5)[5] + I), 0.0, 1e-15);
}

TEST(Spectral, ConjugateIsIsometryAndSquaresToMinusOne) {
  FourierSeries f(32);
  for (int n = -8; n <= 8; ++n)
    if (n) f.at(n) = cplx(std::cos(1.3 * n), std::sin(0.7 * n)) / (1.0 + n * n);
  const auto H = hilbert_transform(f), HH = hilbert_transform(H);
  for (double s : {0.0, 0.25, 0.5, 1.0}) EXPECT_DOUBLE_EQ(hs_norm_fourier(H, s), hs_norm_fourier(f, s));
  for (int n = -16; n < 16; ++n) EXPECT_EQ(HH[n], -f[n]);
}

TEST(Spectral, PoissonExamples) {
  FourierSeries f(8);
  f.at(1) = 1.0;
  EXPECT_NEAR(std::abs(poisson_eval(f, 0.5, 0.0, Side::interior) - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(poisson_eval(f, 2.0, 0.0, Side::exterior) - 0.5), 0.0, 1e-15);
  FourierSeries one(8);
  one.at(0) = 1.0;
  EXPECT_NEAR(std::abs(poisson_eval(one, 0.3, 1.0, Side::interior) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(poisson_eval(one, 7.0, 1.0, Side::exterior) - 1.0), 0.0, 1e-15);
  EXPECT_ERROR_KIND(poisson_eval(f, 1.5, 0.0, Side::interior), ErrorKind::InvalidParameter);
}

// [DERIVED] values from tools/oracle_values.py (mpmath quadrature, 30 digits).
TEST(Spectral, DouglasWeightsMatchOracle) {
  struct Row {
    int n;
    double s, W;
  };
  const Row rows[] = {{1, 0.25, 6.7777046783518327}, {2, 0.25, 10.844327485362932}, {3, 0.25, 14.007256335260454},
                      {5, 0.25, 19.045043462699041}, {1, 0.75, 7.4162987092054876}, {2, 0.75, 19.7767965578813},
                      {3, 0.75, 35.668865220464488}, {5, 0.75, 75.736141363704525}};
  for (const auto& r : rows) EXPECT_NEAR(douglas_weight(r.n, r.s), r.W, 1e-9 * r.W) << r.n << " " << r.s;
}

// Fejer kernel: W(n, 1/2) = 2 pi n.
TEST(Spectral, DouglasWeightAtHalfIsFejer) {
  for (int n : {1, 3, 7, 20}) EXPECT_NEAR(douglas_weight(n, 0.5), two_pi * n, 1e-8 * n);
  EXPECT_EQ(douglas_weight(0, 0.3), 0.0);
  EXPECT_ERROR_KIND(douglas_weight(1, 1.0), ErrorKind::InvalidParameter);
}

TEST(Spectral, DiskWeightsMatchOracle) {
  const auto w = disk_energy_weights(5, 0.5);
  EXPECT_NEAR(w.disk_interior_w[1], two_pi, 1e-12);
  EXPECT_NEAR(w.disk_exterior_w[1], two_pi, 1e-12);
  EXPECT_EQ(w.disk_interior_w[0], 0.0);
  EXPECT_NEAR(disk_energy_weights(5, 0.25).disk_interior_w[2], 6.7020643276582256, 1e-10);
  EXPECT_NEAR(disk_energy_weights(5, 0.75).disk_interior_w[5], 127.65836814587096, 1e-8);
}

TEST(Spectral, ExteriorWeightDivergesAtZero) {
  const auto w = disk_energy_weights(3, 0.0);
  EXPECT_TRUE(w.exterior_divergent[1]);
  EXPECT_FALSE(w.exterior_divergent[2]);
  FourierSeries f(8);
  f.at(-1) = 1.0;
  EXPECT_ERROR_KIND(exterior_disk_energy(f, 0.0), ErrorKind::DivergentWeight);
}

// Both sides at s = 1/2 give 2 pi |n| each while W = 2 pi |n|.
TEST(Spectral, DouglasOverDiskRatioAtHalf) {
  for (int n = 1; n <= 16; ++n) {
    const auto w = disk_energy_weights(n, 0.5);
    EXPECT_NEAR(douglas_weight(n, 0.5) / (w.disk_interior_w[n] + w.disk_exterior_w[n]), 0.5, 1e-8);
  }
}

TEST(Spectral, DouglasComparableToMultiplier) {
  for (double s : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    double lo = 1e300, hi = 0.0;
    for (int n = 1; n <= 64; ++n) {
      const double r = douglas_weight(n, s) / std::pow(n, 2.0 * s);
      lo = std::min(lo, r), hi = std::max(hi, r);
    }
    EXPECT_LT(hi / lo, 4.0) << s;
  }
}

TEST(Spectral, SeminormIncreasesInS) {
  FourierSeries f(16);
  f.at(3) = 1.0;
  double prev = 0.0;
  for (double s = 0.1; s < 1.0; s += 0.1) {
    const double v = hs_norm_fourier(f, s);
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(Spectral, GFunctionExamples) {
  FourierSeries z(16);
  z.at(1) = 1.0;
  EXPECT_NEAR(g_function(z, 0.4), std::sqrt(0.5), 1e-6);
  FourierSeries z2(16);
  z2.at(2) = 1.0;
  EXPECT_NEAR(g_function(z2, 0.0), std::sqrt(1.0 / 3.0), 1e-6);
  FourierSeries c(16);
  c.at(0) = 2.0;
  EXPECT_EQ(g_function(c, 1.0), 0.0);
}

TEST(Spectral, WeightsCsvHasHeader) {
  const auto path = std::filesystem::temp_directory_path() / "plemelj_weights_test.csv";
  write_weights_csv(path.string(), spectral_weights(4, 0.5));
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header.substr(0, 1), "n");
  std::filesystem::remove(path);
}
