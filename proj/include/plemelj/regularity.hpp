#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "plemelj/core.hpp"
#include "plemelj/geometry.hpp"
#include "plemelj/parallel.hpp"

namespace plemelj {

// Polyline stand-in for a curve: exact for straight-sided curves, dense nodes otherwise.
struct Polyline {
  std::vector<cplx> v;
  double diameter = 0.0;
  double length = 0.0;
  double feature = 0.0;  // scale below which the polyline stops resembling the curve's geometry
  std::shared_ptr<const SegmentTree> tree;
};

inline Polyline curve_polyline(const SampledCurve& c) {
  Polyline p;
  p.diameter = curve_diameter(c);
  p.length = c.total_length;
  if (c.straight_sided()) {
    p.v = c.vertices();
    double e = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.v.size(); ++i) e = std::min(e, std::abs(p.v[(i + 1) % p.v.size()] - p.v[i]));
    p.feature = std::min(e, p.diameter / 256.0);
  } else {
    const std::size_t N = std::max<std::size_t>(c.size(), 4096);
    p.v = N == c.size() ? c.nodes : resample(c, N).nodes;
    p.feature = std::max(p.diameter / 256.0, 4.0 * c.total_length / static_cast<double>(N));
  }
  p.tree = std::make_shared<SegmentTree>(p.v, true);
  return p;
}

// Pieces of the polyline inside the closed disk D(z, R), as endpoint pairs.
inline std::vector<cplx> clip_to_disk(const Polyline& p, cplx z, double R) {
  std::vector<cplx> out;
  const std::size_t n = p.v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const cplx a = p.v[i], d = p.v[(i + 1) % n] - a;
    // |a + t d - z|^2 = R^2
    const cplx w = a - z;
    const double A = std::norm(d), B = 2.0 * std::real(std::conj(d) * w), C = std::norm(w) - R * R;
    const double disc = B * B - 4.0 * A * C;
    if (A == 0.0 || disc <= 0.0) continue;
    const double sq = std::sqrt(disc);
    const double t0 = std::max(0.0, (-B - sq) / (2.0 * A)), t1 = std::min(1.0, (-B + sq) / (2.0 * A));
    if (t1 <= t0) continue;
    out.push_back(a + t0 * d);
    out.push_back(a + t1 * d);
  }
  return out;
}

struct DilationArea {
  double area = 0.0;
  double pixel = 0.0;
  double pixel_error = 0.0;  // perimeter of the dilation times pixel size
};

// |E + B(0,t)| by counting pixel centers within t of E. Cells that are certainly full or
// certainly empty are settled without visiting their pixels.
inline DilationArea dilation_area(const SegmentTree& E, double t, double pixel) {
  DilationArea out;
  out.pixel = pixel;
  const auto& pts = E.points();
  if (pts.empty()) return out;
  double xl = 1e300, xh = -1e300, yl = 1e300, yh = -1e300;
  for (auto q : pts) xl = std::min(xl, q.real()), xh = std::max(xh, q.real()), yl = std::min(yl, q.imag()), yh = std::max(yh, q.imag());
  const double ox = std::floor((xl - t) / pixel) * pixel, oy = std::floor((yl - t) / pixel) * pixel;
  const double span = std::max(xh + t - ox, yh + t - oy);
  int m = 0;
  while (pixel * std::ldexp(1.0, m) < span) ++m;
  if (m > 40) fail(ErrorKind::GridTooFine, "dilation bitmap too fine for the requested pixel");
  struct Cell {
    double x, y;  // lower-left corner
    int level;
  };
  std::vector<Cell> stack{{ox, oy, m}};
  std::uint64_t count = 0;
  while (!stack.empty()) {
    const Cell c = stack.back();
    stack.pop_back();
    const double size = pixel * std::ldexp(1.0, c.level);
    const cplx mid(c.x + 0.5 * size, c.y + 0.5 * size);
    const double d = E.nearest(mid).distance;
    if (c.level == 0) {
      if (d <= t) ++count;
      continue;
    }
    const double hd = size * std::sqrt(0.5);
    if (d + hd <= t) {
      count += std::uint64_t{1} << (2 * c.level);
      continue;
    }
    if (d - hd > t) continue;
    const double h = 0.5 * size;
    stack.push_back({c.x, c.y, c.level - 1});
    stack.push_back({c.x + h, c.y, c.level - 1});
    stack.push_back({c.x, c.y + h, c.level - 1});
    stack.push_back({c.x + h, c.y + h, c.level - 1});
  }
  out.area = static_cast<double>(count) * pixel * pixel;
  double len = 0.0;
  for (std::size_t i = 0; i < E.segment_count(); ++i) len += std::abs(E.seg_b(i) - E.seg_a(i));
  out.pixel_error = (2.0 * len + two_pi * t) * pixel;
  return out;
}

struct MinkowskiResult {
  double delta = 1.0;
  double sup = 0.0;
  std::vector<double> t, M;
  double pixel = 0.0;
  double pixel_error = 0.0;  // largest per-rung error bound, in units of M
};

// sup over t_j = diam 2^{-j}, j = 0..J, of |E + B(0,t)| / t^{2-delta}; one pixel size t_J / 8.
inline MinkowskiResult minkowski_content(const SampledCurve& c, double delta, int J = 8) {
  if (!(delta >= 1.0 && delta <= 2.0)) fail(ErrorKind::InvalidParameter, "delta must lie in [1, 2]");
  if (J < 0 || J > 12) fail(ErrorKind::InvalidParameter, "ladder depth must lie in [0, 12]");
  const Polyline p = curve_polyline(c);
  MinkowskiResult r;
  r.delta = delta;
  r.pixel = p.diameter * std::ldexp(1.0, -J) / 8.0;
  r.t.resize(J + 1);
  r.M.resize(J + 1);
  std::vector<double> err(J + 1);
  parallel_for(static_cast<std::size_t>(J + 1), [&](std::size_t j) {
    const double t = p.diameter * std::ldexp(1.0, -static_cast<int>(j));
    const auto a = dilation_area(*p.tree, t, r.pixel);
    r.t[j] = t;
    r.M[j] = a.area / std::pow(t, 2.0 - delta);
    err[j] = a.pixel_error / std::pow(t, 2.0 - delta);
  }, 1);
  r.sup = *std::max_element(r.M.begin(), r.M.end());
  r.pixel_error = *std::max_element(err.begin(), err.end());
  return r;
}

namespace detail {

inline std::vector<double> seeded_arclengths(double L, int K, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, L);
  std::vector<double> s(K);
  for (auto& v : s) v = u(rng);
  return s;
}

inline cplx polyline_point(const Polyline& p, double s) {
  const std::size_t n = p.v.size();
  s = std::fmod(s, p.length);
  if (s < 0) s += p.length;
  for (std::size_t i = 0; i < n; ++i) {
    const cplx a = p.v[i], b = p.v[(i + 1) % n];
    const double l = std::abs(b - a);
    if (s <= l) return a + (l > 0 ? s / l : 0.0) * (b - a);
    s -= l;
  }
  return p.v.back();
}

// log |E + B(0,t)| / t on a ladder t = t_hi 2^{-j} down to t_lo, pixel t / 16 per rung.
struct LocalLadder {
  std::vector<double> log_t, log_M1;
  double R = 0.0;
};

inline LocalLadder local_ladder(const Polyline& p, cplx z, double R, double t_lo, double t_hi) {
  LocalLadder L;
  L.R = R;
  const auto pieces = clip_to_disk(p, z, R);
  if (pieces.empty()) return L;
  const SegmentTree E = SegmentTree::from_pairs(pieces);
  for (double t = t_hi; t >= t_lo * (1.0 - 1e-12); t *= 0.5) {
    const auto a = dilation_area(E, t, t / 16.0);
    L.log_t.push_back(std::log(t));
    L.log_M1.push_back(std::log(a.area / t));
  }
  return L;
}

}  // namespace detail

struct RegularityConstant {
  double delta = 1.0;
  std::vector<double> radii, constants;  // max over centers of h_delta(E) / R^delta per radius
  double value = 0.0;
};

// h_delta(Gamma cap D(z,R)) / R^delta, maximized over K seeded centers on the curve.
// The t-ladder for each local set runs from diam(E) down to t_min (default R / 64), pixel t / 16.
inline RegularityConstant delta_regularity_constant(const SampledCurve& c, double delta, int K = 64, std::uint64_t seed = 1,
                                                    std::vector<double> radii = {}, double t_min = 0.0) {
  if (!(delta >= 1.0 && delta <= 2.0)) fail(ErrorKind::InvalidParameter, "delta must lie in [1, 2]");
  if (K < 64) fail(ErrorKind::InvalidParameter, "at least 64 disk samples are required");
  const Polyline p = curve_polyline(c);
  if (radii.empty())
    for (int k = 1; k <= 6; ++k) radii.push_back(p.diameter * std::ldexp(1.0, -k));
  const auto s = detail::seeded_arclengths(p.length, K, seed);
  RegularityConstant r;
  r.delta = delta;
  r.radii = radii;
  r.constants.assign(radii.size(), 0.0);
  std::vector<double> vals(radii.size() * K, 0.0);
  parallel_for(vals.size(), [&](std::size_t idx) {
    const std::size_t ri = idx / K, k = idx % K;
    const double R = radii[ri];
    const cplx z = detail::polyline_point(p, s[k]);
    const auto pieces = clip_to_disk(p, z, R);
    if (pieces.empty()) return;
    const double dE = diameter(pieces);
    const double tl = t_min > 0.0 ? t_min : R / 64.0;
    const SegmentTree E = SegmentTree::from_pairs(pieces);
    double best = 0.0;
    for (double t = dE; t >= tl * (1.0 - 1e-12); t *= 0.5)
      best = std::max(best, dilation_area(E, t, t / 16.0).area / std::pow(t, 2.0 - delta));
    vals[idx] = best / std::pow(R, delta);
  }, 1);
  for (std::size_t ri = 0; ri < radii.size(); ++ri)
    for (int k = 0; k < K; ++k) r.constants[ri] = std::max(r.constants[ri], vals[ri * K + k]);
  r.value = *std::max_element(r.constants.begin(), r.constants.end());
  return r;
}

struct HEstimate {
  double h = 1.0;
  double lo = 1.0, hi = 2.0;  // final bisection bracket
  double slope = 0.0;         // pooled d log M_1 / d log t
  double slope_spread = 0.0;  // standard deviation of per-set slopes
  std::size_t sets = 0;
  bool noisy = false;
};

// The predicate "delta-regular in the scale window" is read as: the pooled log-slope of
// M_delta(E, t) over 2 * feature <= t <= R / 8 is nonnegative. Since M_delta = M_1 t^{delta-1} on the
// same bitmap, the slope is monotone in delta and bisection brackets its zero.
struct HOptions {
  int samples = 64;
  std::uint64_t seed = 1;
  int steps = 8;
  double t_lo_features = 2.0;  // smallest t in feature sizes
  double t_hi_fraction = 0.125;  // largest t as a fraction of R; near R the disk cutoff dominates
};

inline HEstimate estimate_h(const SampledCurve& c, const HOptions& o = {}) {
  const int K = o.samples;
  const std::uint64_t seed = o.seed;
  const int steps = o.steps;
  const Polyline p = curve_polyline(c);
  const double f = p.feature;
  std::vector<double> radii;
  const double need = 4.0 * o.t_lo_features / o.t_hi_fraction;
  for (double R = p.diameter / 2.0; R >= need * f && radii.size() < 6; R *= 0.5) radii.push_back(R);
  if (radii.empty()) radii.push_back(p.diameter / 2.0);
  const auto s = detail::seeded_arclengths(p.length, K, seed);
  std::vector<detail::LocalLadder> ladders(radii.size() * K);
  parallel_for(ladders.size(), [&](std::size_t idx) {
    const double R = radii[idx / K];
    const cplx z = detail::polyline_point(p, s[idx % K]);
    ladders[idx] = detail::local_ladder(p, z, R, std::max(o.t_lo_features * f, R / 256.0), o.t_hi_fraction * R);
  }, 1);
  // Within-set regression: each (z, R) keeps its own intercept.
  double sxy = 0.0, sxx = 0.0;
  std::vector<double> per;
  for (const auto& L : ladders) {
    const std::size_t n = L.log_t.size();
    if (n < 2) continue;
    double mx = 0.0, my = 0.0;
    for (std::size_t j = 0; j < n; ++j) mx += L.log_t[j], my += L.log_M1[j];
    mx /= n, my /= n;
    double a = 0.0, b = 0.0;
    for (std::size_t j = 0; j < n; ++j) a += (L.log_t[j] - mx) * (L.log_M1[j] - my), b += sqr(L.log_t[j] - mx);
    sxy += a, sxx += b;
    per.push_back(a / b);
  }
  HEstimate out;
  if (sxx == 0.0) fail(ErrorKind::QuadratureFailure, "no usable local sets for the regularity estimate");
  out.slope = sxy / sxx;
  out.sets = per.size();
  double m = 0.0, v = 0.0;
  for (double x : per) m += x;
  m /= per.size();
  for (double x : per) v += sqr(x - m);
  out.slope_spread = std::sqrt(v / per.size());
  out.noisy = out.slope_spread > 0.25;
  auto regular = [&](double delta) { return out.slope + (delta - 1.0) >= 0.0; };
  double lo = 1.0, hi = 2.0;
  if (regular(lo)) {
    hi = lo;
  } else if (!regular(hi)) {
    lo = hi;
  } else {
    for (int i = 0; i < steps; ++i) {
      const double mid = 0.5 * (lo + hi);
      (regular(mid) ? hi : lo) = mid;
    }
  }
  out.lo = lo;
  out.hi = hi;
  out.h = 0.5 * (lo + hi);
  return out;
}

// ---------------------------------------------------------------------------
// Porosity

struct PorosityResult {
  double c = 1.0;
  cplx worst_center{};
  double worst_radius = 0.0;
};

// min over seeded (z on the curve, r) of the largest empty disk inside D(z, r), over r.
// A sampled lower bound, not a certificate.
inline PorosityResult porosity_constant(const SampledCurve& c, int K = 64, std::uint64_t seed = 2) {
  const Polyline p = curve_polyline(c);
  std::vector<double> radii;
  for (double r = p.diameter; r >= 4.0 * p.feature && radii.size() < 6; r *= 0.5) radii.push_back(r);
  const auto s = detail::seeded_arclengths(p.length, K, seed);
  std::vector<double> ratio(radii.size() * K);
  parallel_for(ratio.size(), [&](std::size_t idx) {
    const double r = radii[idx / K];
    const cplx z = detail::polyline_point(p, s[idx % K]);
    auto g = [&](cplx q) { return std::min(p.tree->nearest(q).distance, r - std::abs(q - z)); };
    constexpr int G = 24;
    cplx best = z;
    double bv = 0.0;
    for (int i = 0; i < G; ++i)
      for (int j = 0; j < G; ++j) {
        const cplx q = z + r * cplx(-1.0 + (2.0 * i + 1.0) / G, -1.0 + (2.0 * j + 1.0) / G);
        if (std::abs(q - z) >= r) continue;
        const double v = g(q);
        if (v > bv) bv = v, best = q;
      }
    // Pattern search refinement.
    double step = r / G;
    while (step > 1e-4 * r) {
      bool moved = false;
      for (cplx d : {cplx(1, 0), cplx(-1, 0), cplx(0, 1), cplx(0, -1)}) {
        const cplx q = best + step * d;
        const double v = g(q);
        if (v > bv) bv = v, best = q, moved = true;
      }
      if (!moved) step *= 0.5;
    }
    ratio[idx] = bv / r;
  }, 1);
  PorosityResult out;
  for (std::size_t idx = 0; idx < ratio.size(); ++idx)
    if (ratio[idx] < out.c) {
      out.c = ratio[idx];
      out.worst_radius = radii[idx / K];
      out.worst_center = detail::polyline_point(p, s[idx % K]);
    }
  return out;
}

// ---------------------------------------------------------------------------
// Muckenhoupt constants

struct ApOptions {
  int centers = 32;
  int points = 4096;
  std::uint64_t seed = 3;
  double cutoff = 0.0;        // distances below this are clamped; 0 keeps the raw weight
  double band_fraction = 1.0 / 64.0;
  std::vector<double> radii;  // default diam * 2^{-k}, k = 1..6
};

struct ApResult {
  double value = 0.0;
  std::vector<double> radii, per_radius;
  bool divergent = false;  // a band integral was infinite
};

namespace detail {
// Mean of max(y, eps)^beta over y uniform in [0, b].
inline double band_mean(double beta, double b, double eps) {
  if (eps >= b) return std::pow(eps, beta);
  if (eps <= 0.0 && beta <= -1.0) return std::numeric_limits<double>::infinity();
  const double head = eps > 0.0 ? eps * std::pow(eps, beta) : 0.0;
  const double body = beta == -1.0 ? std::log(b / eps) : (std::pow(b, beta + 1.0) - std::pow(eps, beta + 1.0)) / (beta + 1.0);
  return (head + body) / b;
}
}  // namespace detail

// Weight d(z, curve)^{alpha-1}. Per-disk Monte Carlo; points closer to the curve than
// band_fraction * r are replaced by the flat-band integral so the local singularity is exact.
// p = 1 uses the 1% quantile for the infimum.
inline ApResult ap_constant_plane(const SampledCurve& c, double alpha, int p, const ApOptions& o = {}) {
  if (p != 1 && p != 2) fail(ErrorKind::InvalidParameter, "p must be 1 or 2");
  const Polyline P = curve_polyline(c);
  std::vector<double> radii = o.radii;
  if (radii.empty())
    for (int k = 1; k <= 6; ++k) radii.push_back(P.diameter * std::ldexp(1.0, -k));
  const double beta = alpha - 1.0;
  const auto s = detail::seeded_arclengths(P.length, o.centers, o.seed);
  ApResult out;
  out.radii = radii;
  out.per_radius.assign(radii.size(), 0.0);
  std::vector<double> val(radii.size() * o.centers);
  std::vector<std::uint8_t> div(val.size(), 0);
  parallel_for(val.size(), [&](std::size_t idx) {
    const double r = radii[idx / o.centers];
    const std::size_t k = idx % o.centers;
    std::mt19937_64 rng(o.seed ^ (0x9e3779b97f4a7c15ULL * (idx + 1)));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    // Even samples are centered on the curve, odd ones half a radius off it.
    cplx z = detail::polyline_point(P, s[k]);
    if (k % 2 == 1) z += 0.5 * r * std::polar(1.0, two_pi * u(rng));
    const double b = o.band_fraction * r;
    double sw = 0.0, swi = 0.0;
    std::size_t nb = 0;
    std::vector<double> w;
    w.reserve(o.points);
    for (int i = 0; i < o.points; ++i) {
      const double rr = r * std::sqrt(u(rng)), th = two_pi * u(rng);
      const double d = P.tree->nearest(z + std::polar(rr, th)).distance;
      const double de = std::max(d, o.cutoff);
      if (p == 1) {
        w.push_back(std::pow(std::max(de, 1e-300), beta));
        continue;
      }
      if (d < b) {
        ++nb;
        continue;
      }
      sw += std::pow(de, beta);
      swi += std::pow(de, -beta);
    }
    if (p == 1) {
      std::sort(w.begin(), w.end());
      double m = 0.0;
      for (double x : w) m += x;
      m /= w.size();
      val[idx] = m / w[w.size() / 100];
      return;
    }
    const double bm = detail::band_mean(beta, b, o.cutoff), bmi = detail::band_mean(-beta, b, o.cutoff);
    if (nb > 0 && (!std::isfinite(bm) || !std::isfinite(bmi))) {
      div[idx] = 1;
      val[idx] = std::numeric_limits<double>::infinity();
      return;
    }
    const double n = o.points;
    val[idx] = (sw + nb * bm) / n * ((swi + nb * bmi) / n);
  }, 1);
  for (std::size_t idx = 0; idx < val.size(); ++idx) {
    const std::size_t ri = idx / o.centers;
    out.per_radius[ri] = std::max(out.per_radius[ri], val[idx]);
    if (div[idx]) out.divergent = true;
  }
  out.value = *std::max_element(out.per_radius.begin(), out.per_radius.end());
  return out;
}

// max over dyadic and half-shifted arcs of mean(w) * mean(1/w), for samples on a uniform grid of T.
inline double a2_circle_constant(const std::vector<double>& w) {
  const std::size_t M = w.size();
  if (M < 2) fail(ErrorKind::InvalidInput, "need at least two weight samples");
  for (double x : w)
    if (!(x > 0.0) || !std::isfinite(x)) fail(ErrorKind::InvalidWeight, "weight samples must be positive and finite");
  std::vector<double> S(2 * M + 1, 0.0), Si(2 * M + 1, 0.0);
  for (std::size_t k = 0; k < 2 * M; ++k) S[k + 1] = S[k] + w[k % M], Si[k + 1] = Si[k] + 1.0 / w[k % M];
  double best = 1.0;
  for (std::size_t m = M / 2; m >= 1; m /= 2) {
    const std::size_t stride = m >= 2 ? m / 2 : 1;
    for (std::size_t a = 0; a < M; a += stride) {
      const double mean = (S[a + m] - S[a]) / m, mi = (Si[a + m] - Si[a]) / m;
      best = std::max(best, mean * mi);
    }
    if (m == 1) break;
  }
  return best;
}

inline std::pair<double, double> solvable_interval(double h) {
  if (!(h >= 1.0)) fail(ErrorKind::InvalidParameter, "h must be at least 1");
  if (h >= 2.0) fail(ErrorKind::EmptyInterval, "no admissible s for h >= 2");
  return {(h - 1.0) / 2.0, (3.0 - h) / 2.0};
}

// ---------------------------------------------------------------------------
// Report

struct RegularityReport {
  struct Row {
    double delta, sup_M, regularity_constant;
  };
  std::vector<Row> h_delta_table;
  HEstimate h;
  PorosityResult porosity;
  std::map<std::string, double> ap_constants;  // key "p=2,s=0.25"
  std::pair<double, double> solvable{0.0, 1.0};
  bool solvable_empty = false;
  std::uint64_t seed = 1;
};

inline RegularityReport regularity_report(const SampledCurve& c, const std::vector<double>& s_grid, std::uint64_t seed = 1) {
  RegularityReport r;
  r.seed = seed;
  for (double d : {1.0, 1.25, 1.5, 2.0}) {
    const auto m = minkowski_content(c, d, 8);
    const auto k = delta_regularity_constant(c, d, 64, seed);
    r.h_delta_table.push_back({d, m.sup, k.value});
  }
  HOptions ho;
  ho.seed = seed;
  r.h = estimate_h(c, ho);
  r.porosity = porosity_constant(c, 64, seed + 1);
  ApOptions o;
  o.seed = seed + 2;
  for (double s : s_grid)
    for (int p : {1, 2}) {
      char key[64];
      std::snprintf(key, sizeof key, "p=%d,s=%g", p, s);
      r.ap_constants[key] = ap_constant_plane(c, 2.0 - 2.0 * s, p, o).value;
    }
  try {
    r.solvable = solvable_interval(r.h.h);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::EmptyInterval) throw;
    r.solvable_empty = true;
  }
  return r;
}

inline nlohmann::json to_json(const RegularityReport& r) {
  nlohmann::json j;
  for (const auto& row : r.h_delta_table)
    j["h_delta_table"].push_back({{"delta", row.delta}, {"sup_M", row.sup_M}, {"regularity_constant", row.regularity_constant}});
  j["h_estimate"] = r.h.h;
  j["h_bracket"] = {r.h.lo, r.h.hi};
  j["h_slope"] = r.h.slope;
  j["h_noisy"] = r.h.noisy;
  j["porosity_c"] = r.porosity.c;
  j["porosity_is_sampled_lower_bound"] = true;
  for (const auto& [k, v] : r.ap_constants) j["ap_constants"][k] = std::isfinite(v) ? nlohmann::json(v) : nlohmann::json("inf");
  if (r.solvable_empty)
    j["solvable_interval"] = nullptr;
  else
    j["solvable_interval"] = {r.solvable.first, r.solvable.second};
  j["seed"] = r.seed;
  return j;
}

// Bitmap of the t-dilation as a plain PBM.
inline void write_dilation_pbm(const std::string& path, const SampledCurve& c, double t, int n = 512) {
  const Polyline p = curve_polyline(c);
  double xl = 1e300, xh = -1e300, yl = 1e300, yh = -1e300;
  for (auto q : p.v) xl = std::min(xl, q.real()), xh = std::max(xh, q.real()), yl = std::min(yl, q.imag()), yh = std::max(yh, q.imag());
  const double side = std::max(xh - xl, yh - yl) + 2.0 * t, h = side / n;
  std::ofstream out(path);
  if (!out) fail(ErrorKind::InvalidInput, "cannot open " + path);
  out << "P1\n" << n << " " << n << "\n";
  for (int iy = n - 1; iy >= 0; --iy) {
    for (int ix = 0; ix < n; ++ix) {
      const cplx q(xl - t + (ix + 0.5) * h, yl - t + (iy + 0.5) * h);
      out << (p.tree->within(q, t) ? '1' : '0') << (ix + 1 < n ? " " : "");
    }
    out << "\n";
  }
}

}  // namespace plemelj
