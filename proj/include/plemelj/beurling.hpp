#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "plemelj/core.hpp"
#include "plemelj/fft.hpp"
#include "plemelj/geometry.hpp"
#include "plemelj/parallel.hpp"
#include "plemelj/spectral.hpp"

namespace plemelj {

// Square box split into n x n cells; values live at cell centers, row-major (iy, ix).
struct GridBox {
  cplx center{};
  double half_width = 1.0;
  int n = 256;

  double spacing() const { return 2.0 * half_width / n; }
  cplx cell(int ix, int iy) const {
    const double h = spacing();
    return center + cplx(-half_width + (ix + 0.5) * h, -half_width + (iy + 0.5) * h);
  }
  std::size_t cells() const { return static_cast<std::size_t>(n) * n; }
};

struct GridField {
  GridBox box;
  std::vector<cplx> values;
  std::vector<std::uint8_t> inside_mask;  // 1 for cell centers in the interior domain
  double excluded_band = 0.0;             // area of cells zeroed next to the curve
  double tail_bound = 0.0;                // L2 mass estimate outside the box
  double boundary_ring_sup = 0.0;
  bool periodization_warning = false;

  cplx at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * box.n + ix]; }
  double l2_norm() const {
    std::vector<double> r(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) r[k] = std::norm(values[k]);
    return std::sqrt(pairwise_sum(r) * sqr(box.spacing()));
  }
};

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Box of half-width 3 * diameter around the curve's bounding-box center.
inline GridBox make_grid_box(const SampledCurve& c, int n) {
  if (!is_power_of_two(n) || n < 16) fail(ErrorKind::InvalidInput, "grid resolution must be a power of two >= 16");
  double xl = 1e300, xh = -1e300, yl = 1e300, yh = -1e300;
  for (auto z : c.nodes) xl = std::min(xl, z.real()), xh = std::max(xh, z.real()), yl = std::min(yl, z.imag()), yh = std::max(yh, z.imag());
  GridBox b;
  b.center = cplx(0.5 * (xl + xh), 0.5 * (yl + yh));
  b.half_width = 3.0 * curve_diameter(c);
  b.n = n;
  return b;
}

inline std::vector<std::uint8_t> inside_mask(const SampledCurve& c, const GridBox& b) {
  std::vector<std::uint8_t> m(b.cells());
  parallel_for(static_cast<std::size_t>(b.n), [&](std::size_t iy) {
    for (int ix = 0; ix < b.n; ++ix) m[iy * b.n + ix] = c.inside(b.cell(ix, static_cast<int>(iy))) ? 1 : 0;
  }, 4);
  return m;
}

inline GridField make_field(const SampledCurve& c, const GridBox& b) {
  GridField f;
  f.box = b;
  f.values.assign(b.cells(), cplx{});
  f.inside_mask = inside_mask(c, b);
  return f;
}

// Harmonic extensions of f = sum c_n e^{in theta} from a circle, both sides.
inline ComplexFn circle_harmonic_extension(const FourierSeries& f, double radius, cplx center, Side side) {
  std::vector<std::pair<int, cplx>> modes;
  for (int n = f.min_mode(); n <= f.max_mode(); ++n)
    if (std::abs(f[n]) > 1e-14) modes.emplace_back(n, f[n]);
  return [modes, radius, center, side](cplx z) {
    const cplx w = (z - center) / radius;
    // Interior: w^n for n >= 0, conj(w)^|n| for n < 0. Exterior: conj(1/w)^n and (1/w)^|n|.
    const cplx a = side == Side::interior ? w : std::conj(1.0 / w);
    const cplx b = side == Side::interior ? std::conj(w) : 1.0 / w;
    cplx acc{};
    for (auto [n, c] : modes) acc += c * (n >= 0 ? std::pow(a, n) : std::pow(b, -n));
    return acc;
  };
}

// dbar u = (u_x + i u_y) / 2 by central differences on the requested side. The step shrinks
// to half the distance to the curve; cells closer than h/8 are zeroed and counted.
inline GridField dbar_field(const SampledCurve& c, const ComplexFn& u, Side side, const GridBox& b) {
  GridField g = make_field(c, b);
  const double h = b.spacing();
  const std::uint8_t want = side == Side::interior ? 1 : 0;
  std::vector<double> excluded(static_cast<std::size_t>(b.n), 0.0);
  parallel_for(static_cast<std::size_t>(b.n), [&](std::size_t iy) {
    for (int ix = 0; ix < b.n; ++ix) {
      const std::size_t k = iy * b.n + ix;
      if (g.inside_mask[k] != want) continue;
      const cplx z = b.cell(ix, static_cast<int>(iy));
      const double d = c.distance(z);
      if (d < h / 8.0) {
        excluded[iy] += h * h;
        continue;
      }
      const double e = std::min(h, 0.5 * d);
      const cplx ux = (u(z + e) - u(z - e)) / (2.0 * e);
      const cplx uy = (u(z + I * e) - u(z - I * e)) / (2.0 * e);
      g.values[k] = 0.5 * (ux + I * uy);
    }
  }, 4);
  for (double v : excluded) g.excluded_band += v;
  if (side == Side::exterior) {
    // |dbar u| <= C / |z|^2 fitted on the outer ring bounds the L2 mass beyond the box.
    double C = 0.0;
    for (int iy = 0; iy < b.n; ++iy)
      for (int ix = 0; ix < b.n; ++ix) {
        if (ix > 1 && ix < b.n - 2 && iy > 1 && iy < b.n - 2) continue;
        C = std::max(C, std::abs(g.at(ix, iy)) * std::norm(b.cell(ix, iy) - b.center));
      }
    g.tail_bound = C * std::sqrt(pi) / b.half_width;
  }
  return g;
}

inline double boundary_ring_sup(const GridField& f, int width = 2) {
  double s = 0.0;
  const int n = f.box.n;
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix)
      if (ix < width || iy < width || ix >= n - width || iy >= n - width) s = std::max(s, std::abs(f.at(ix, iy)));
  return s;
}

// Multiplier conj(xi)/xi on the periodized grid, zero at the origin. With FFTW's e^{-i x xi}
// forward sign this maps dbar g to d g.
inline GridField beurling_transform(const GridField& in) {
  GridField out = in;
  const int n = in.box.n;
  out.values = in.values;
  fft2(out.values, n, n);
  const int h = n / 2;
  const double scale = 1.0 / (static_cast<double>(n) * n);
  for (int ky = 0; ky < n; ++ky)
    for (int kx = 0; kx < n; ++kx) {
      const int fx = kx < h ? kx : kx - n, fy = ky < h ? ky : ky - n;
      cplx& v = out.values[static_cast<std::size_t>(ky) * n + kx];
      if (fx == 0 && fy == 0) {
        v = 0.0;
        continue;
      }
      const cplx xi(fx, fy);
      v *= std::conj(xi) / xi * scale;
    }
  fft2(out.values, n, n, true);
  double mx = 0.0;
  for (auto v : in.values) mx = std::max(mx, std::abs(v));
  out.boundary_ring_sup = boundary_ring_sup(in);
  out.periodization_warning = out.boundary_ring_sup > 1e-3 * mx;
  out.excluded_band = 0.0;
  out.tail_bound = 0.0;
  return out;
}

struct CalibrationResult {
  double relative_error = 0.0;  // ||B(dbar g) - d g|| / ||d g||
  double isometry_error = 0.0;  // | ||B v|| - ||v|| | / ||v|| for the mean-zero input
};

// Gaussian g = exp(-|z|^2 / w^2) on [-L, L]^2: dbar g = -z g / w^2, d g = -conj(z) g / w^2.
inline CalibrationResult calibrate_beurling(int n = 1024, double width = 0.5, double L = 6.0) {
  GridBox b;
  b.half_width = L;
  b.n = n;
  GridField f;
  f.box = b;
  f.values.resize(b.cells());
  std::vector<cplx> want(b.cells());
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      const cplx z = b.cell(ix, iy);
      const double g = std::exp(-std::norm(z) / (width * width));
      f.values[static_cast<std::size_t>(iy) * n + ix] = -z * g / (width * width);
      want[static_cast<std::size_t>(iy) * n + ix] = -std::conj(z) * g / (width * width);
    }
  const auto Bf = beurling_transform(f);
  std::vector<double> e(b.cells()), r(b.cells());
  for (std::size_t k = 0; k < b.cells(); ++k) e[k] = std::norm(Bf.values[k] - want[k]), r[k] = std::norm(want[k]);
  CalibrationResult out;
  out.relative_error = std::sqrt(pairwise_sum(e) / pairwise_sum(r));
  const double a = f.l2_norm(), c = Bf.l2_norm();
  out.isometry_error = std::abs(c - a) / a;
  return out;
}

// Max over dyadic blocks of mean(w) * mean(1/w); blocks up to a quarter of the box.
inline double grid_a2_constant(const GridBox& b, const std::function<double(cplx)>& w) {
  const int n = b.n;
  std::vector<double> W(b.cells()), Wi(b.cells());
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      const double v = w(b.cell(ix, iy));
      W[static_cast<std::size_t>(iy) * n + ix] = v;
      Wi[static_cast<std::size_t>(iy) * n + ix] = v > 0.0 ? 1.0 / v : std::numeric_limits<double>::infinity();
    }
  // Summed-area tables.
  auto table = [n](const std::vector<double>& v) {
    std::vector<double> S(static_cast<std::size_t>(n + 1) * (n + 1), 0.0);
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x)
        S[(y + 1) * (n + 1) + x + 1] = v[static_cast<std::size_t>(y) * n + x] + S[y * (n + 1) + x + 1] + S[(y + 1) * (n + 1) + x] - S[y * (n + 1) + x];
    return S;
  };
  const auto S = table(W), Si = table(Wi);
  auto box_sum = [n](const std::vector<double>& T, int x, int y, int m) {
    return T[(y + m) * (n + 1) + x + m] - T[y * (n + 1) + x + m] - T[(y + m) * (n + 1) + x] + T[y * (n + 1) + x];
  };
  double best = 1.0;
  for (int m = 2; m <= n / 4; m *= 2)
    for (int y = 0; y + m <= n; y += m / 2)
      for (int x = 0; x + m <= n; x += m / 2) {
        const double area = static_cast<double>(m) * m;
        best = std::max(best, box_sum(S, x, y, m) / area * box_sum(Si, x, y, m) / area);
      }
  return best;
}

struct SplitGridResult {
  GridField Fi_prime, Fe_prime;
  double s = 0.5;
  double fi_weighted = 0.0, fe_weighted = 0.0;        // integral |F'|^2 d^{1-2s} over own side
  double input_exterior = 0.0, input_interior = 0.0;  // integral |dbar u|^2 d^{1-2s} over the source side
  double ratio_interior = 0.0, ratio_exterior = 0.0;  // sqrt of output over input
  double tail = 0.0;
  double a2_ratio = 0.0;
  bool weight_ill_conditioned = false;
};

// Fi' = B(dbar u_e chi_e) and Fe' = -B(dbar u_i chi_i), with distance-weighted norms.
inline SplitGridResult dirichlet_split_grid(const SampledCurve& c, const ComplexFn& ui, const ComplexFn& ue, double s, int n) {
  if (!(s > 0.0 && s < 1.0)) fail(ErrorKind::InvalidParameter, "s must lie in (0, 1)");
  const GridBox b = make_grid_box(c, n);
  SplitGridResult r;
  r.s = s;
  const GridField di = dbar_field(c, ui, Side::interior, b);
  const GridField de = dbar_field(c, ue, Side::exterior, b);
  r.Fi_prime = beurling_transform(de);
  r.Fe_prime = beurling_transform(di);
  for (auto& v : r.Fe_prime.values) v = -v;
  r.tail = de.tail_bound;
  const double q = 1.0 - 2.0 * s, h2 = sqr(b.spacing());
  std::vector<double> d(b.cells());
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t iy) {
    for (int ix = 0; ix < n; ++ix) d[iy * n + ix] = c.distance(b.cell(ix, static_cast<int>(iy)));
  }, 4);
  std::vector<double> a(b.cells()), e(b.cells()), ii(b.cells()), ie(b.cells());
  for (std::size_t k = 0; k < b.cells(); ++k) {
    if (!(d[k] > 0.0)) continue;
    const double w = std::pow(d[k], q) * h2;
    if (di.inside_mask[k]) {
      a[k] = std::norm(r.Fi_prime.values[k]) * w;
      ii[k] = std::norm(di.values[k]) * w;
    } else {
      e[k] = std::norm(r.Fe_prime.values[k]) * w;
      ie[k] = std::norm(de.values[k]) * w;
    }
  }
  r.fi_weighted = pairwise_sum(a);
  r.fe_weighted = pairwise_sum(e);
  r.input_interior = pairwise_sum(ii);
  r.input_exterior = pairwise_sum(ie);
  r.ratio_interior = r.input_exterior > 0.0 ? std::sqrt(r.fi_weighted / r.input_exterior) : 0.0;
  r.ratio_exterior = r.input_interior > 0.0 ? std::sqrt(r.fe_weighted / r.input_interior) : 0.0;
  r.a2_ratio = grid_a2_constant(b, [&](cplx z) { return std::pow(std::max(c.distance(z), 1e-300), q); });
  r.weight_ill_conditioned = r.a2_ratio > 1e6;
  return r;
}

inline std::uint64_t mask_hash(const std::vector<std::uint8_t>& m) {
  return fnv1a64(std::string_view(reinterpret_cast<const char*>(m.data()), m.size()));
}

// Flat complex128 row-major values plus a JSON sidecar at path + ".json".
inline void write_grid_field(const std::string& path, const GridField& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::InvalidInput, "cannot open " + path);
  out.write(reinterpret_cast<const char*>(f.values.data()), static_cast<std::streamsize>(sizeof(cplx) * f.values.size()));
  nlohmann::json j;
  j["box"] = {{"center", {f.box.center.real(), f.box.center.imag()}}, {"half_width", f.box.half_width}};
  j["resolution"] = f.box.n;
  j["mask_hash"] = mask_hash(f.inside_mask);
  j["excluded_band"] = f.excluded_band;
  j["tail_bound"] = f.tail_bound;
  j["periodization_warning"] = f.periodization_warning;
  std::ofstream side(path + ".json");
  side << j.dump(2) << "\n";
}

}  // namespace plemelj
