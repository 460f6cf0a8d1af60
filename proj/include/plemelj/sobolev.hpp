#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "plemelj/conformal.hpp"
#include "plemelj/core.hpp"
#include "plemelj/fft.hpp"
#include "plemelj/geometry.hpp"
#include "plemelj/parallel.hpp"
#include "plemelj/quadrature.hpp"
#include "plemelj/spectral.hpp"

namespace plemelj {

struct BoundaryFunction {
  std::vector<cplx> values;
  std::string descriptor;
};

struct EnergyReport {
  double s = 0.5;
  double douglas = 0.0;
  double band_correction = 0.0;
  double pullback_interior = 0.0;
  std::optional<double> pullback_exterior;
  std::optional<double> direct_grid;
  std::optional<double> hardy_e2;
};

inline std::vector<cplx> mean_centered(const SampledCurve& c, std::span<const cplx> f) {
  if (f.size() != c.size()) fail(ErrorKind::InvalidInput, "function must be sampled at the curve nodes");
  cplx m{};
  double w = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) m += c.node_weights[k] * f[k], w += c.node_weights[k];
  m /= w;
  std::vector<cplx> g(f.begin(), f.end());
  for (auto& v : g) v -= m;
  return g;
}

// ---------------------------------------------------------------------------
// Douglas norm

struct DouglasResult {
  double value = 0.0;  // includes the band term
  double band = 0.0;
};

// Off-band pairs |k - j| >= 2 by the tensor trapezoid rule; the strip |t - tau| < 1.5 h is
// replaced by |f'|^2 |t - tau|^{1-2s} integrated exactly.
inline DouglasResult douglas_norm(const SampledCurve& c, std::span<const cplx> f_in, double s) {
  if (!(s > 0.0 && s < 1.0)) fail(ErrorKind::InvalidParameter, "s must lie in (0, 1)");
  const auto f = mean_centered(c, f_in);
  const std::size_t N = c.size();
  const double ex = 0.5 + s;  // |z|^{1+2s} = (|z|^2)^{1/2+s}
  std::vector<double> row(N, 0.0), band(N, 0.0);
  const double h = c.spacing();
  const double strip = 2.0 * std::pow(1.5 * h, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);
  parallel_for(N, [&](std::size_t k) {
    double acc = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
      const std::size_t d = j > k ? j - k : k - j;
      if (std::min(d, N - d) < 2) continue;
      acc += c.node_weights[j] * std::norm(f[j] - f[k]) / std::pow(std::norm(c.nodes[j] - c.nodes[k]), ex);
    }
    row[k] = c.node_weights[k] * acc;
    const cplx df = (f[(k + 1) % N] - f[(k + N - 1) % N]) / (2.0 * h);
    band[k] = c.node_weights[k] * std::norm(df) * strip;
  });
  DouglasResult r;
  r.band = pairwise_sum(band);
  r.value = pairwise_sum(row) + r.band;
  return r;
}

// ---------------------------------------------------------------------------
// Tensor rules on the disk

struct DiskRule {
  std::vector<double> r, wr;  // radial nodes in (0, 1), weights in dr
  std::vector<double> t, wt;  // angular nodes, weights in dt
};

// Radial: one panel on [0, 1/2] then geometric panels toward r = 1.
inline void radial_rule(DiskRule& R, int order, int levels) {
  std::vector<double> br{0.0, 0.5};
  for (int j = 2; j <= levels; ++j) br.push_back(1.0 - std::ldexp(1.0, -j));
  br.push_back(1.0);
  for (std::size_t p = 0; p + 1 < br.size(); ++p) {
    auto m = mapped_legendre(order, br[p], br[p + 1]);
    R.r.insert(R.r.end(), m.x.begin(), m.x.end());
    R.wr.insert(R.wr.end(), m.w.begin(), m.w.end());
  }
}

// Angular: panels between the given break angles, graded geometrically toward each break.
inline void angular_rule(DiskRule& R, std::vector<double> breaks, int order, int levels) {
  if (breaks.empty()) {
    for (int k = 0; k < 32; ++k) breaks.push_back(two_pi * k / 32.0), levels = 0;
  }
  std::sort(breaks.begin(), breaks.end());
  const std::size_t n = breaks.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double a = breaks[k], b = k + 1 < n ? breaks[k + 1] : breaks[0] + two_pi;
    const double w = b - a;
    std::vector<double> cuts{a};
    for (int j = levels; j >= 1; --j) cuts.push_back(a + w * std::ldexp(1.0, -j - 1));
    for (int j = 1; j <= levels; ++j) cuts.push_back(b - w * std::ldexp(1.0, -j - 1));
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
      auto m = mapped_legendre(order, cuts[p], cuts[p + 1]);
      R.t.insert(R.t.end(), m.x.begin(), m.x.end());
      R.wt.insert(R.wt.end(), m.w.begin(), m.w.end());
    }
  }
}

// Map values on a tensor grid; for SC maps phi is marched outward along each ray.
struct PullbackGrid {
  std::vector<cplx> phi, dphi;
  std::vector<double> w;            // r dr dt
  std::vector<double> one_minus_r;
  std::size_t size() const { return w.size(); }
};

inline PullbackGrid make_pullback_grid(const RiemannMap& m, int order, int radial_levels, int angular_levels) {
  DiskRule R;
  radial_rule(R, order, radial_levels);
  angular_rule(R, m.singular_angles(), order, angular_levels);
  const std::size_t nr = R.r.size(), nt = R.t.size();
  PullbackGrid g;
  g.phi.resize(nr * nt);
  g.dphi.resize(nr * nt);
  g.w.resize(nr * nt);
  g.one_minus_r.resize(nr * nt);
  parallel_for(nt, [&](std::size_t j) {
    const cplx e = std::polar(1.0, R.t[j]);
    cplx prev = 0.0, val = m.center();
    for (std::size_t i = 0; i < nr; ++i) {
      const cplx z = R.r[i] * e;
      const std::size_t id = j * nr + i;
      if (m.kind() == MapKind::schwarz_christoffel) {
        val += m.sc()->C * detail::sc_segment(*m.sc(), prev, z, -1, -1, 0, 8);
        prev = z;
        g.phi[id] = val;
      } else {
        g.phi[id] = m.eval(z);
      }
      g.dphi[id] = m.derivative(z);
      g.w[id] = R.wr[i] * R.wt[j] * R.r[i];
      g.one_minus_r[id] = 1.0 - R.r[i];
    }
  });
  return g;
}

struct PullbackResult {
  double value = 0.0;
  double rel_change = 0.0;  // fine-vs-coarse estimate
};

// integral over D of |(F o phi)'|^2 |phi'|^{1-2s} (1-|z|)^{1-2s}, F' supplied.
inline double pullback_sum(const PullbackGrid& g, const ComplexFn& dF, double s) {
  const double q = 1.0 - 2.0 * s;
  std::vector<double> v(g.size());
  parallel_for(g.size(), [&](std::size_t k) {
    const double a = std::abs(g.dphi[k]);
    v[k] = g.w[k] * std::pow(g.one_minus_r[k] * a, q) * std::norm(dF(g.phi[k]) * g.dphi[k]);
  }, 1024);
  return pairwise_sum(v);
}

class PullbackIntegrator {
 public:
  explicit PullbackIntegrator(const RiemannMap& m, int order = 10, int radial_levels = 30, int angular_levels = 16)
      : fine_(make_pullback_grid(m, order, radial_levels, angular_levels)),
        coarse_(make_pullback_grid(m, order - 4, radial_levels - 6, angular_levels - 4)) {}

  PullbackResult holomorphic(const ComplexFn& dF, double s) const {
    if (!(s >= 0.0 && s < 1.0)) fail(ErrorKind::InvalidParameter, "s must lie in [0, 1)");
    PullbackResult r;
    r.value = pullback_sum(fine_, dF, s);
    const double c = pullback_sum(coarse_, dF, s);
    r.rel_change = std::abs(r.value - c) / std::max(std::abs(r.value), 1e-300);
    return r;
  }

 private:
  PullbackGrid fine_, coarse_;
};

// Holomorphic data: energy with |F'|^2 (so F = z on the unit disk at s = 1/2 gives pi).
inline PullbackResult pullback_energy(const RiemannMap& m, const ComplexFn& dF, double s) {
  PullbackResult r = PullbackIntegrator(m).holomorphic(dF, s);
  if (r.rel_change > 0.02) fail(ErrorKind::QuadratureFailure, "pullback quadrature not converged", r.rel_change);
  return r;
}

namespace detail {

inline double trace_energy(const RiemannMap& m, std::span<const cplx> g, double t0, double s, int radial_levels,
                           int order) {
  const std::size_t M = g.size();
  auto G = analyze(g);
  const int top = static_cast<int>(M / 2) - 1;
  std::vector<cplx> cpos(top + 1), cneg(top + 1);
  for (int n = 1; n <= top; ++n) {
    cpos[n] = G[n] * std::polar(1.0, -n * t0);
    cneg[n] = G[-n] * std::polar(1.0, n * t0);
  }
  DiskRule R;
  radial_rule(R, order, radial_levels);
  const double q = 1.0 - 2.0 * s;
  // |phi'| on the same uniform angular grid t_j = 2 pi j / M.
  std::vector<cplx> logb;
  std::size_t P = M;
  if (m.kind() == MapKind::theodorsen) {
    const auto& b = m.theodorsen()->b;
    while (P < 2 * b.size()) P *= 2;
  }
  std::vector<double> per_r(R.r.size());
  parallel_for(R.r.size(), [&](std::size_t i) {
    const double r = R.r[i];
    std::vector<cplx> A(M, 0.0), B(M, 0.0);
    double rp = 1.0;
    for (int n = 1; n <= top; ++n) {
      A[n - 1] = static_cast<double>(n) * cpos[n] * rp;
      B[(M - (n - 1)) % M] = static_cast<double>(n) * cneg[n] * rp;
      rp *= r;
      if (rp < 1e-300) break;
    }
    fft(A, true);
    fft(B, true);
    std::vector<double> speed(M);
    if (m.kind() == MapKind::theodorsen) {
      const auto& b = m.theodorsen()->b;
      std::vector<cplx> L(P, 0.0);
      double rb = 1.0;
      for (std::size_t n = 0; n < b.size(); ++n, rb *= r) L[n] = b[n] * rb;
      fft(L, true);
      for (std::size_t j = 0; j < M; ++j) speed[j] = std::exp(L[j * (P / M)].real());
    } else {
      for (std::size_t j = 0; j < M; ++j) speed[j] = std::abs(m.derivative(std::polar(r, two_pi * j / M)));
    }
    double acc = 0.0;
    for (std::size_t j = 0; j < M; ++j)
      acc += 2.0 * (std::norm(A[j]) + std::norm(B[j])) * std::pow((1.0 - r) * speed[j], q);
    per_r[i] = R.wr[i] * r * acc * two_pi / static_cast<double>(M);
  });
  return pairwise_sum(per_r);
}

}  // namespace detail

// General boundary data g(t_j), t_j = t0 + 2 pi j / M, of a function on Gamma pulled back
// to T. Energy of the harmonic extension U with |grad U|^2 = 2(|U_z|^2 + |U_zbar|^2).
inline PullbackResult pullback_energy_trace(const RiemannMap& m, std::span<const cplx> g, double t0, double s,
                                            int radial_levels = 30, int order = 10) {
  if (!(s >= 0.0 && s < 1.0)) fail(ErrorKind::InvalidParameter, "s must lie in [0, 1)");
  const std::size_t M = g.size();
  if (M < 16 || M % 4 != 0) fail(ErrorKind::InvalidInput, "trace grid must be a multiple of 4, at least 16");
  PullbackResult r;
  r.value = detail::trace_energy(m, g, t0, s, radial_levels, order);
  std::vector<cplx> half(M / 2);
  for (std::size_t j = 0; j < M / 2; ++j) half[j] = g[2 * j];
  const double c = detail::trace_energy(m, half, t0, s, radial_levels, order);
  r.rel_change = std::abs(r.value - c) / std::max(std::abs(r.value), 1e-300);
  return r;
}

// Samples of f o phi on the shifted boundary grid; f given pointwise on Gamma.
inline std::vector<cplx> boundary_samples(const RiemannMap& m, const ComplexFn& f, std::size_t M, double t0) {
  std::vector<cplx> g(M);
  parallel_for(M, [&](std::size_t j) { g[j] = f(m.boundary_point(t0 + two_pi * static_cast<double>(j) / M)); });
  return g;
}

// Exterior energy of the bounded harmonic extension for a circle of radius R:
// sum |c_n|^2 4 pi n^2 B(2|n| - q, q + 1) R^q with q = 1 - 2s, weight (|z| - R)^q.
inline double circle_exterior_energy(const FourierSeries& c, double s, double R = 1.0) {
  const double q = 1.0 - 2.0 * s;
  double acc = 0.0;
  for (int n = c.min_mode() + 1; n <= c.max_mode(); ++n)
    if (n != 0) acc += std::norm(c[n]) * 4.0 * pi * n * n * beta_function(2.0 * std::abs(n) - q, q + 1.0);
  return acc * std::pow(R, q);
}

inline double circle_interior_energy(const FourierSeries& c, double s, double R = 1.0) {
  const double q = 1.0 - 2.0 * s;
  double acc = 0.0;
  for (int n = c.min_mode() + 1; n <= c.max_mode(); ++n)
    if (n != 0) acc += std::norm(c[n]) * 4.0 * pi * n * n * beta_function(2.0 * std::abs(n), q + 1.0);
  return acc * std::pow(R, q);
}

// ---------------------------------------------------------------------------
// Direct quadtree evaluation of the weighted energy

enum class WeightKind { distance, circle_defect };

struct DirectEnergyResult {
  double value = 0.0;
  double band_share = 0.0;  // share from leaves stopped by the depth cap
  std::size_t leaves = 0, capped_leaves = 0;
  bool partial = false;
};

namespace detail {

// E[(d + a U1 + b U2)_+^q] for independent uniforms on [-1/2, 1/2].
inline double linear_weight_mean(double d, double a, double b, double q) {
  auto G1 = [q](double x) { return x > 0.0 ? std::pow(x, q + 1.0) / (q + 1.0) : 0.0; };
  auto G2 = [q](double x) { return x > 0.0 ? std::pow(x, q + 2.0) / ((q + 1.0) * (q + 2.0)) : 0.0; };
  if (a < b) std::swap(a, b);
  const double scale = std::max(std::abs(d), a);
  if (a <= 1e-9 * scale) return d > 0.0 ? std::pow(d, q) : 0.0;
  if (b <= 1e-6 * a) return (G1(d + 0.5 * a) - G1(d - 0.5 * a)) / a;
  return (G2(d + 0.5 * a + 0.5 * b) - G2(d + 0.5 * a - 0.5 * b) - G2(d - 0.5 * a + 0.5 * b) +
          G2(d - 0.5 * a - 0.5 * b)) /
         (a * b);
}

inline double grad_sq(const ComplexFn& u, cplx p, double h) {
  const cplx ux = (u(p + h) - u(p - h)) / (2.0 * h);
  const cplx uy = (u(p + I * h) - u(p - I * h)) / (2.0 * h);
  return std::norm(ux) + std::norm(uy);
}

inline cplx nearest_foot(const SampledCurve& c, cplx z) {
  if (c.spec && c.spec->is_circle()) {
    const auto& cs = std::get<CircleSpec>(c.spec->kind);
    const cplx v = z - cs.center;
    return cs.center + (std::abs(v) > 0 ? cs.radius * v / std::abs(v) : cplx{cs.radius, 0.0});
  }
  return c.tree->nearest(z).foot;
}

}  // namespace detail

inline DirectEnergyResult direct_weighted_energy(const SampledCurve& c, const ComplexFn& u, double s,
                                                 int resolution = 512, WeightKind wk = WeightKind::distance,
                                                 Side side = Side::interior) {
  if (!(s >= 0.0 && s < 1.0)) fail(ErrorKind::InvalidParameter, "s must lie in [0, 1)");
  if (resolution < 16) fail(ErrorKind::InvalidParameter, "resolution must be at least 16");
  double R = 0.0;
  if (wk == WeightKind::circle_defect) {
    if (!(c.spec && c.spec->is_circle())) fail(ErrorKind::InvalidInput, "circle_defect weight needs a circle");
    R = std::get<CircleSpec>(c.spec->kind).radius;
  }
  if (side == Side::exterior) fail(ErrorKind::InvalidInput, "direct quadtree energy is interior-only");
  const double q = 1.0 - 2.0 * s;
  double x0 = c.nodes[0].real(), x1 = x0, y0 = c.nodes[0].imag(), y1 = y0;
  for (auto z : c.nodes) {
    x0 = std::min(x0, z.real()), x1 = std::max(x1, z.real());
    y0 = std::min(y0, z.imag()), y1 = std::max(y1, z.imag());
  }
  const double S = 1.02 * std::max(x1 - x0, y1 - y0);
  const cplx center{0.5 * (x0 + x1), 0.5 * (y0 + y1)};
  const int cap = static_cast<int>(std::lround(std::log2(static_cast<double>(resolution))));
  const int floor_depth = std::max(0, cap - 2);

  struct Leaf {
    cplx c;
    double h, d;
    bool capped;
  };
  std::vector<Leaf> leaves;
  std::vector<std::pair<cplx, int>> stack{{center, 0}};
  while (!stack.empty()) {
    auto [z, depth] = stack.back();
    stack.pop_back();
    const double h = S * std::ldexp(1.0, -depth);
    const double d = c.signed_distance(z);
    if (d < -0.7072 * h) continue;
    const bool coarse = h > std::abs(d) / 4.0 || depth < floor_depth;
    if (coarse && depth < cap) {
      const double o = 0.25 * h;
      for (cplx off : {cplx{-o, -o}, cplx{o, -o}, cplx{-o, o}, cplx{o, o}}) stack.push_back({z + off, depth + 1});
      continue;
    }
    leaves.push_back({z, h, d, h > std::abs(d) / 4.0});
  }
  std::vector<double> e(leaves.size()), band(leaves.size());
  parallel_for(leaves.size(), [&](std::size_t k) {
    const Leaf& L = leaves[k];
    // Inward unit normal from the nearest boundary point; far cells only need a direction.
    cplx n = 1.0;
    if (L.d < 2.0 * L.h) {
      const cplx v = L.c - detail::nearest_foot(c, L.c);
      if (std::abs(v) > 0) n = (L.d >= 0 ? v : -v) / std::abs(v);
    }
    double wmean = detail::linear_weight_mean(L.d, std::abs(n.real()) * L.h, std::abs(n.imag()) * L.h, q);
    if (wk == WeightKind::circle_defect) wmean *= std::pow((2.0 * R - L.d) / R, q);
    // Gradient point pushed inward so the difference stencil stays in the domain.
    const double step = L.h / 8.0;
    const cplx p = L.d < 2.0 * step ? L.c + n * (2.0 * step - L.d) : L.c;
    const double g2 = detail::grad_sq(u, p, step);
    e[k] = L.h * L.h * wmean * g2;
    band[k] = L.capped ? e[k] : 0.0;
  });
  DirectEnergyResult r;
  r.value = pairwise_sum(e);
  r.leaves = leaves.size();
  for (const auto& L : leaves) r.capped_leaves += L.capped ? 1 : 0;
  r.band_share = r.value > 0 ? pairwise_sum(band) / r.value : 0.0;
  r.partial = r.band_share > 0.01;
  return r;
}

// ---------------------------------------------------------------------------
// Hardy norm

struct HardyResult {
  double value = 0.0;
  std::vector<double> radii, per_radius;
};

// sup over r of (1/2pi) integral |F(phi(r e^{it}))|^2 |phi'(r e^{it})| dt.
inline HardyResult hardy_norm_e2(const RiemannMap& m, const ComplexFn& F) {
  HardyResult h;
  h.radii = {0.9, 0.99, 0.999};
  DiskRule R;
  angular_rule(R, m.singular_angles(), 16, 16);
  for (double r : h.radii) {
    std::vector<double> v(R.t.size());
    parallel_for(R.t.size(), [&](std::size_t j) {
      const cplx z = std::polar(r, R.t[j]);
      v[j] = R.wt[j] * std::norm(F(m.eval(z))) * std::abs(m.derivative(z));
    });
    h.per_radius.push_back(pairwise_sum(v) / two_pi);
  }
  h.value = *std::max_element(h.per_radius.begin(), h.per_radius.end());
  return h;
}

// ---------------------------------------------------------------------------
// The operators V_s, T_s and S along the segment [0, z]

namespace detail {

struct PathRule {
  std::vector<cplx> u;
  std::vector<cplx> du;  // quadrature weight times the path direction
};

inline PathRule segment_path(cplx z, int order = 20) {
  PathRule p;
  const double rz = std::abs(z);
  std::vector<double> br{0.0};
  const double gap = std::max(1.0 - rz, 1e-12);
  for (int j = 1; j < 60; ++j) {
    const double t = 1.0 - std::ldexp(1.0, -j);
    if ((1.0 - t) * rz < 0.5 * gap) break;
    br.push_back(t);
  }
  br.push_back(1.0);
  for (std::size_t k = 0; k + 1 < br.size(); ++k) {
    auto m = mapped_legendre(order, br[k], br[k + 1]);
    for (int i = 0; i < order; ++i) {
      p.u.push_back(m.x[i] * z);
      p.du.push_back(m.w[i] * z);
    }
  }
  return p;
}

// phi along the path, marched for SC maps.
inline std::vector<cplx> path_images(const RiemannMap& m, const PathRule& p) {
  std::vector<cplx> out(p.u.size());
  if (m.kind() != MapKind::schwarz_christoffel) {
    for (std::size_t i = 0; i < p.u.size(); ++i) out[i] = m.eval(p.u[i]);
    return out;
  }
  cplx prev = 0.0, val = m.center();
  for (std::size_t i = 0; i < p.u.size(); ++i) {
    val += m.sc()->C * sc_segment(*m.sc(), prev, p.u[i], -1, -1);
    prev = p.u[i];
    out[i] = val;
  }
  return out;
}

inline std::vector<cplx> path_log_derivative(const RiemannMap& m, const PathRule& p) {
  std::vector<cplx> L(p.u.size());
  double last = m.log_derivative(0.0).imag();
  for (std::size_t i = 0; i < p.u.size(); ++i) {
    L[i] = m.log_derivative(p.u[i]);
    if (std::abs(L[i].imag() - last) > 0.5 * pi) fail(ErrorKind::BranchError, "log phi' jumped along the path");
    last = L[i].imag();
  }
  return L;
}

}  // namespace detail

// V_s(F)(z) = integral_0^z F'(phi(u)) phi'(u)^{3/2 - s} du
inline cplx vs_transform(const RiemannMap& m, const ComplexFn& dF, double s, cplx z) {
  if (std::abs(z) >= 1.0) fail(ErrorKind::InvalidParameter, "V_s needs |z| < 1");
  const auto p = detail::segment_path(z);
  const auto w = detail::path_images(m, p);
  const auto L = detail::path_log_derivative(m, p);
  cplx acc{};
  for (std::size_t i = 0; i < p.u.size(); ++i) acc += p.du[i] * dF(w[i]) * std::exp((1.5 - s) * L[i]);
  return acc;
}

// Derivative form (F o phi)'(z) phi'(z)^{1/2 - s}.
inline cplx vs_derivative(const RiemannMap& m, const ComplexFn& dF, double s, cplx z) {
  const cplx L = m.log_derivative(z);
  return dF(m.eval(z)) * std::exp((1.5 - s) * L);
}

// T_s F = (F o phi) phi'^{1/2 - s}
inline cplx ts_transform(const RiemannMap& m, const ComplexFn& F, double s, cplx z) {
  return F(m.eval(z)) * std::exp((0.5 - s) * m.log_derivative(z));
}

// S G(z) = integral_0^z G(u) phi''/phi'(u) du for G = T_s F.
inline cplx s_operator_ts(const RiemannMap& m, const ComplexFn& F, double s, cplx z) {
  if (std::abs(z) >= 1.0) fail(ErrorKind::InvalidParameter, "S needs |z| < 1");
  const auto p = detail::segment_path(z);
  const auto w = detail::path_images(m, p);
  const auto L = detail::path_log_derivative(m, p);
  cplx acc{};
  for (std::size_t i = 0; i < p.u.size(); ++i)
    acc += p.du[i] * F(w[i]) * std::exp((0.5 - s) * L[i]) * m.second_over_first(p.u[i]);
  return acc;
}

// ---------------------------------------------------------------------------
// Gradient decay probe

struct DecayReport {
  double max_ratio = 0.0;
  double c_mv = 0.0;
  bool below = true;
};

// Mean-value constant from the disk D(z, d/2) argument: 2 (3/2)^{|s-1/2|} / sqrt(pi) * 2.
inline double mean_value_constant(double s) { return 2.0 * std::pow(1.5, std::abs(s - 0.5)) / std::sqrt(pi) * 2.0; }

inline DecayReport gradient_decay_check(const ComplexFn& u, const SampledCurve& c, double s, std::span<const cplx> probes,
                                        double energy) {
  DecayReport r;
  r.c_mv = mean_value_constant(s);
  if (!(energy > 0.0)) return r;
  for (cplx z : probes) {
    const double d = c.distance(z);
    const double g = std::sqrt(detail::grad_sq(u, z, 1e-3 * d));
    r.max_ratio = std::max(r.max_ratio, g * std::pow(d, 1.5 - s) / std::sqrt(energy));
  }
  r.below = r.max_ratio < r.c_mv;
  return r;
}

}  // namespace plemelj
