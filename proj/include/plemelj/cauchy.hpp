#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "plemelj/core.hpp"
#include "plemelj/fft.hpp"
#include "plemelj/functions.hpp"
#include "plemelj/geometry.hpp"
#include "plemelj/interpolation.hpp"
#include "plemelj/parallel.hpp"
#include "plemelj/quadrature.hpp"

namespace plemelj {

enum class Discretization { uniform, panel };

inline const char* to_string(Discretization d) { return d == Discretization::uniform ? "uniform" : "panel"; }

struct SioOptions {
  // Smooth curves use the arclength trapezoid rule; corners need graded panels.
  bool force_panels = false;
  int panel_order = 16;
  double grade_ratio = 0.5;
  int grade_depth = 6;
  std::size_t max_nodes = 8192;
};

// Quadrature nodes on the curve. In panel mode nodes are grouped by panel, `order` per panel.
struct CurveRule {
  std::vector<cplx> z, tau;
  std::vector<double> w, s;
  std::vector<double> panel_lo, panel_hi;  // arclength ends, panel mode only
  int order = 0;
  std::size_t size() const { return z.size(); }
};

// Discrete T acting on values at the rule's nodes.
struct NystromOperator {
  Eigen::MatrixXcd matrix;
  Eigen::MatrixXcd diff;  // d/ds
  CurveRule rule;
  Discretization mode = Discretization::uniform;
  double mesh = 0.0;  // L / N for the requested N
  std::shared_ptr<const SampledCurve> curve;

  std::size_t size() const { return rule.size(); }

  std::vector<cplx> apply(std::span<const cplx> f) const {
    if (f.size() != size()) fail(ErrorKind::InvalidInput, "vector length does not match the operator");
    Eigen::Map<const Eigen::VectorXcd> x(f.data(), static_cast<Eigen::Index>(f.size()));
    Eigen::VectorXcd y = matrix * x;
    return {y.data(), y.data() + y.size()};
  }

  std::vector<cplx> sample(const FunctionSpec& fn) const {
    std::vector<cplx> v(size());
    for (std::size_t k = 0; k < size(); ++k)
      v[k] = fn.kind == FunctionSpec::Kind::fourier ? fn.at_arclength(rule.s[k], curve->total_length) : fn.value(rule.z[k]);
    return v;
  }
};

namespace detail {

// Spectral d/ds on N uniform nodes over length L; mode -N/2 kept with its own sign.
inline Eigen::MatrixXcd spectral_diff(std::size_t N, double L) {
  std::vector<cplx> sym(N);
  const int h = static_cast<int>(N / 2);
  for (int k = 0; k < static_cast<int>(N); ++k) {
    const int n = k < h ? k : k - static_cast<int>(N);
    sym[k] = I * (two_pi * n / L) / static_cast<double>(N);
  }
  fft(sym, true);  // column 0 of the circulant
  Eigen::MatrixXcd D(N, N);
  for (std::size_t j = 0; j < N; ++j)
    for (std::size_t k = 0; k < N; ++k) D(k, j) = sym[(k + N - j) % N];
  return D;
}

inline Eigen::MatrixXd lagrange_diff(const std::vector<double>& x) {
  const auto bw = barycentric_weights(x);
  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double diag = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      D(i, j) = (bw[j] / bw[i]) / (x[i] - x[j]);
      diag -= D(i, j);
    }
    D(i, i) = diag;
  }
  return D;
}

inline CurveRule uniform_rule(const SampledCurve& c) {
  CurveRule r;
  r.z = c.nodes;
  r.tau = c.tangents;
  r.w = c.node_weights;
  r.s.resize(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) r.s[k] = c.arclength(k);
  return r;
}

// Panels of length order * L / N between corners, halved `depth` times toward each corner.
inline std::vector<std::pair<double, double>> graded_panels(const SampledCurve& c, const SioOptions& o) {
  const double L = c.total_length;
  const double base = o.panel_order * L / static_cast<double>(c.size());
  std::vector<double> corners = c.corner_arclengths;
  if (corners.empty()) corners.push_back(0.0);
  std::sort(corners.begin(), corners.end());
  std::vector<std::pair<double, double>> out;
  for (std::size_t k = 0; k < corners.size(); ++k) {
    const double a = corners[k], b = k + 1 < corners.size() ? corners[k + 1] : corners[0] + L;
    const int nb = std::max(1, static_cast<int>(std::lround((b - a) / base)));
    const double pw = (b - a) / nb;
    std::vector<double> cuts;
    for (int j = 0; j <= nb; ++j) cuts.push_back(a + j * pw);
    if (!c.corner_arclengths.empty()) {
      double g = 1.0;
      for (int d = 1; d <= o.grade_depth; ++d) {
        g *= o.grade_ratio;
        cuts.push_back(a + std::min(pw, 0.5 * (b - a)) * g);
        cuts.push_back(b - std::min(pw, 0.5 * (b - a)) * g);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(), [](double x, double y) { return std::abs(x - y) < 1e-14; }), cuts.end());
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) out.emplace_back(cuts[p], cuts[p + 1]);
  }
  return out;
}

inline CurveRule panel_rule(const SampledCurve& c, const std::vector<std::pair<double, double>>& panels, int order) {
  CurveRule r;
  r.order = order;
  const auto& gl = gauss_legendre(order);
  const std::size_t n = panels.size() * static_cast<std::size_t>(order);
  r.z.resize(n);
  r.tau.resize(n);
  r.w.resize(n);
  r.s.resize(n);
  for (const auto& [a, b] : panels) r.panel_lo.push_back(a), r.panel_hi.push_back(b);
  parallel_for(panels.size(), [&](std::size_t p) {
    const auto [a, b] = panels[p];
    for (int i = 0; i < order; ++i) {
      const std::size_t k = p * order + i;
      const double h = 0.5 * (b - a);
      // Nodes sit strictly inside the panel; an exact vertex would get the wrong tangent.
      r.s[k] = a + h * (gl.x[i] + 1.0);
      r.w[k] = h * gl.w[i];
      r.z[k] = c.geometry->point(r.s[k]);
      r.tau[k] = c.geometry->tangent(r.s[k]);
    }
  });
  return r;
}

}  // namespace detail

inline NystromOperator build_sio(const SampledCurve& curve, const SioOptions& opt = {}) {
  if (curve.size() < 32) fail(ErrorKind::InvalidInput, "at least 32 nodes are required");
  NystromOperator op;
  op.curve = std::make_shared<SampledCurve>(curve);
  op.mesh = curve.spacing();
  const bool panels = opt.force_panels || !curve.corner_arclengths.empty();
  if (!panels) {
    op.mode = Discretization::uniform;
    op.rule = detail::uniform_rule(curve);
    op.diff = detail::spectral_diff(curve.size(), curve.total_length);
  } else {
    op.mode = Discretization::panel;
    const auto pan = detail::graded_panels(curve, opt);
    if (pan.size() * static_cast<std::size_t>(opt.panel_order) > opt.max_nodes)
      fail(ErrorKind::GridTooFine, "graded panel mesh needs " + std::to_string(pan.size() * opt.panel_order) +
                                       " nodes, above the cap of " + std::to_string(opt.max_nodes));
    op.rule = detail::panel_rule(curve, pan, opt.panel_order);
    const std::size_t n = op.rule.size();
    op.diff = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t p = 0; p < pan.size(); ++p) {
      std::vector<double> x(op.rule.s.begin() + p * opt.panel_order, op.rule.s.begin() + (p + 1) * opt.panel_order);
      const Eigen::Index o = static_cast<Eigen::Index>(p * opt.panel_order);
      op.diff.block(o, o, opt.panel_order, opt.panel_order) = detail::lagrange_diff(x).cast<cplx>();
    }
  }
  const auto& r = op.rule;
  const std::size_t n = r.size();
  for (std::size_t k = 0; k < n; ++k)
    if (std::abs(r.z[(k + 1) % n] - r.z[k]) == 0.0) fail(ErrorKind::InvalidCurve, "coincident nodes");
  op.matrix.resize(n, n);
  const cplx c = 1.0 / (two_pi * I);
  // Row k: (1/2 pi i) sum_{j != k} w_j (f_j - f_k) tau_j / (z_j - z_k) + w_k f'_k / (2 pi i) + f_k / 2.
  parallel_for(n, [&](std::size_t k) {
    cplx rowsum{};
    for (std::size_t j = 0; j < n; ++j) {
      if (j == k) continue;
      const cplx v = r.w[j] * r.tau[j] / (r.z[j] - r.z[k]);
      op.matrix(k, j) = c * v;
      rowsum += v;
    }
    op.matrix(k, k) = -c * rowsum + 0.5;
    for (std::size_t j = 0; j < n; ++j) op.matrix(k, j) += c * r.w[k] * op.diff(k, j);
  }, 8);
  return op;
}

// Arclength derivative of f on uniform arclength nodes, spectrally.
inline std::vector<cplx> h1_derivative(const SampledCurve& c, std::span<const cplx> f) {
  if (f.size() != c.size()) fail(ErrorKind::InvalidInput, "function must be sampled at the curve nodes");
  const std::size_t N = c.size();
  std::vector<cplx> v(f.begin(), f.end());
  fft(v);
  const int h = static_cast<int>(N / 2);
  for (int k = 0; k < static_cast<int>(N); ++k) {
    const int n = k < h ? k : k - static_cast<int>(N);
    v[k] *= I * (two_pi * n / c.total_length) / static_cast<double>(N);
  }
  fft(v, true);
  return v;
}

// ---------------------------------------------------------------------------
// Off-curve evaluation

class CauchyIntegral {
 public:
  CauchyIntegral() = default;
  CauchyIntegral(const NystromOperator& op, std::vector<cplx> f) : curve_(op.curve), mesh_(op.mesh) {
    if (f.size() != op.size()) fail(ErrorKind::InvalidInput, "vector length does not match the operator");
    coarse_ = op.rule;
    fc_ = std::move(f);
    constexpr int up = 8;
    const auto& g = *curve_->geometry;
    if (op.mode == Discretization::uniform) {
      const std::size_t N = coarse_.size(), M = up * N;
      const double L = curve_->total_length;
      std::vector<cplx> spec(fc_);
      fft(spec);
      std::vector<cplx> pad(M);
      const std::size_t h = N / 2;
      for (std::size_t k = 0; k < h; ++k) pad[k] = spec[k];
      for (std::size_t k = h + 1; k < N; ++k) pad[M - N + k] = spec[k];
      pad[h] = 0.5 * spec[h];
      pad[M - h] = 0.5 * spec[h];
      fft(pad, true);
      fine_.z.resize(M);
      fine_.tau.resize(M);
      fine_.w.assign(M, L / static_cast<double>(M));
      fine_.s.resize(M);
      ff_.resize(M);
      parallel_for(M, [&](std::size_t k) {
        fine_.s[k] = L * static_cast<double>(k) / static_cast<double>(M);
        fine_.z[k] = g.point(fine_.s[k]);
        fine_.tau[k] = g.tangent(fine_.s[k]);
        ff_[k] = pad[k] / static_cast<double>(N);
      });
    } else {
      const int p = coarse_.order;
      const auto& gl = gauss_legendre(p);
      const std::size_t P = coarse_.panel_lo.size();
      const std::size_t M = P * up * p;
      fine_.z.resize(M);
      fine_.tau.resize(M);
      fine_.w.resize(M);
      fine_.s.resize(M);
      ff_.resize(M);
      parallel_for(P, [&](std::size_t q) {
        std::vector<double> x(coarse_.s.begin() + q * p, coarse_.s.begin() + (q + 1) * p);
        std::vector<cplx> y(fc_.begin() + q * p, fc_.begin() + (q + 1) * p);
        const auto bw = barycentric_weights(x);
        const double a = coarse_.panel_lo[q], b = coarse_.panel_hi[q], sub = (b - a) / up;
        for (int u = 0; u < up; ++u)
          for (int i = 0; i < p; ++i) {
            const std::size_t k = (q * up + u) * p + i;
            fine_.s[k] = a + sub * (u + 0.5 * (gl.x[i] + 1.0));
            fine_.w[k] = 0.5 * sub * gl.w[i];
            fine_.z[k] = g.point(fine_.s[k]);
            fine_.tau[k] = g.tangent(fine_.s[k]);
            ff_[k] = barycentric_eval(x, bw, y, fine_.s[k]);
          }
      });
    }
  }

  // (1/2 pi i) int f(zeta) / (zeta - z) dzeta, z off the curve.
  cplx operator()(cplx z) const {
    const double d = curve_->distance(z);
    const bool near = d < 5.0 * mesh_;
    const CurveRule& r = near ? fine_ : coarse_;
    const std::vector<cplx>& f = near ? ff_ : fc_;
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < r.size(); ++j) {
      const double e = std::norm(r.z[j] - z);
      if (e < bd) bd = e, best = j;
    }
    if (bd == 0.0 || d == 0.0) fail(ErrorKind::OnCurvePoint, "evaluation point lies on the curve");
    // Subtracting the nearest value keeps the near-singular part small.
    const cplx fs = f[best];
    cplx acc{};
    for (std::size_t j = 0; j < r.size(); ++j) acc += r.w[j] * (f[j] - fs) * r.tau[j] / (r.z[j] - z);
    return acc / (two_pi * I) + (curve_->inside(z) ? fs : cplx{});
  }

  bool inside(cplx z) const { return curve_->inside(z); }

 private:
  std::shared_ptr<const SampledCurve> curve_;
  double mesh_ = 0.0;
  CurveRule coarse_, fine_;
  std::vector<cplx> fc_, ff_;
};

inline cplx cauchy_offcurve_eval(const NystromOperator& op, std::span<const cplx> f, cplx z) {
  return CauchyIntegral(op, std::vector<cplx>(f.begin(), f.end()))(z);
}

// ---------------------------------------------------------------------------
// Plemelj split

struct PlemeljSplit {
  std::vector<cplx> Fi_trace, Fe_trace;
  CauchyIntegral cauchy;
  double jump_residual = 0.0;
  std::size_t jump_nodes = 0;  // nodes used for the residual

  cplx Fi_eval(cplx z) const {
    if (!cauchy.inside(z)) fail(ErrorKind::InvalidParameter, "interior evaluator called outside the curve");
    return cauchy(z);
  }
  cplx Fe_eval(cplx z) const {
    if (cauchy.inside(z)) fail(ErrorKind::InvalidParameter, "exterior evaluator called inside the curve");
    return cauchy(z);
  }
};

// The residual compares each trace with the limit of the off-curve integral along the normal,
// extrapolated from offsets m * mesh / 2, m = 1..6. Nodes within 4 mesh widths of a corner
// are skipped since the normal segment may leave the side's neighborhood there.
inline PlemeljSplit plemelj_split(const NystromOperator& op, std::span<const cplx> f, std::size_t max_probe = 1024) {
  const std::size_t n = op.size();
  PlemeljSplit out;
  const auto Tf = op.apply(f);
  out.Fi_trace.resize(n);
  out.Fe_trace.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.Fi_trace[k] = Tf[k] + 0.5 * f[k];
    out.Fe_trace[k] = Tf[k] - 0.5 * f[k];
  }
  out.cauchy = CauchyIntegral(op, std::vector<cplx>(f.begin(), f.end()));

  const double L = op.curve->total_length;
  std::vector<std::size_t> probe;
  for (std::size_t k = 0; k < n; ++k) {
    bool ok = true;
    for (double a : op.curve->corner_arclengths) {
      double d = std::abs(op.rule.s[k] - a);
      d = std::min(d, L - d);
      if (d < 4.0 * op.mesh) ok = false;
    }
    if (ok) probe.push_back(k);
  }
  if (probe.size() > max_probe) {
    std::vector<std::size_t> thin;
    const double step = static_cast<double>(probe.size()) / max_probe;
    for (std::size_t i = 0; i < max_probe; ++i) thin.push_back(probe[static_cast<std::size_t>(i * step)]);
    probe.swap(thin);
  }
  constexpr int m = 6;
  double lw[m];
  for (int a = 1; a <= m; ++a) {
    double l = 1.0;
    for (int b = 1; b <= m; ++b)
      if (b != a) l *= static_cast<double>(b) / (b - a);
    lw[a - 1] = l;
  }
  std::vector<double> res(probe.size());
  parallel_for(probe.size(), [&](std::size_t i) {
    const std::size_t k = probe[i];
    const cplx nin = I * op.rule.tau[k];
    cplx fi{}, fe{};
    for (int a = 1; a <= m; ++a) {
      const double d = 0.5 * a * op.mesh;
      fi += lw[a - 1] * out.cauchy(op.rule.z[k] + d * nin);
      fe += lw[a - 1] * out.cauchy(op.rule.z[k] - d * nin);
    }
    res[i] = std::max(std::abs(fi - out.Fi_trace[k]), std::abs(fe - out.Fe_trace[k]));
  }, 4);
  out.jump_nodes = probe.size();
  for (double r : res) out.jump_residual = std::max(out.jump_residual, r);
  return out;
}

// ---------------------------------------------------------------------------
// Operator norms

enum class NormSpace { L2, H1, Hs };

struct SpaceSpec {
  NormSpace kind = NormSpace::L2;
  double s = 0.5;
  std::string label() const {
    switch (kind) {
      case NormSpace::L2: return "L2";
      case NormSpace::H1: return "H1";
      case NormSpace::Hs: {
        char buf[32];
        std::snprintf(buf, sizeof buf, "Hs(%g)", s);
        return buf;
      }
    }
    return "?";
  }
};

// Gram matrix of the space's seminorm on node values.
inline Eigen::MatrixXcd gram_matrix(const NystromOperator& op, const SpaceSpec& sp) {
  const std::size_t n = op.size();
  const auto& w = op.rule.w;
  if (sp.kind == NormSpace::L2) {
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t k = 0; k < n; ++k) G(k, k) = w[k];
    return G;
  }
  if (op.mode != Discretization::uniform)
    fail(ErrorKind::InvalidInput, "H1 and Hs norms need the uniform discretization of a smooth curve");
  if (sp.kind == NormSpace::H1) {
    Eigen::VectorXd wv = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(n));
    return op.diff.adjoint() * wv.cast<cplx>().asDiagonal() * op.diff;
  }
  const double s = sp.s;
  if (!(s > 0.0 && s < 1.0)) fail(ErrorKind::InvalidParameter, "s must lie in (0, 1)");
  // Same quadrature as douglas_norm: off-band pairs plus a central-difference strip term.
  const double ex = 0.5 + s, h = op.curve->spacing();
  const double strip = 2.0 * std::pow(1.5 * h, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  parallel_for(n, [&](std::size_t k) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t d = j > k ? j - k : k - j;
      if (std::min(d, n - d) < 2) continue;
      A(k, j) = w[j] * w[k] / std::pow(std::norm(op.rule.z[j] - op.rule.z[k]), ex);
    }
  });
  Eigen::MatrixXd G = -2.0 * A;
  for (std::size_t k = 0; k < n; ++k) G(k, k) += 2.0 * A.row(k).sum();
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    C(k, (k + 1) % n) += 0.5 / h;
    C(k, (k + n - 1) % n) -= 0.5 / h;
  }
  for (std::size_t k = 0; k < n; ++k) C.row(k) *= std::sqrt(w[k] * strip);
  G += C.transpose() * C;
  return G.cast<cplx>();
}

struct OperatorNormResult {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  bool gram_regularized = false;  // a 1e-12 ridge was needed for the factorization
  std::string space;
};

struct PowerOptions {
  double tol = 1e-8;
  int min_iter = 10;
  int max_iter = 2000;
  std::uint64_t seed = 12345;
};

// Largest generalized singular value of T on the mean-zero subspace.
inline OperatorNormResult operator_norm(const NystromOperator& op, const SpaceSpec& sp, const PowerOptions& po = {}) {
  const Eigen::Index n = static_cast<Eigen::Index>(op.size());
  OperatorNormResult out;
  out.space = sp.label();
  Eigen::MatrixXcd G = gram_matrix(op, sp);
  Eigen::VectorXcd w(n);
  double W = 0.0, w2 = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) w(k) = op.rule.w[k], W += op.rule.w[k], w2 += sqr(op.rule.w[k]);
  // Constants are invisible to the seminorms; a rank-one term makes G definite without
  // touching mean-zero vectors.
  const double c = G.real().trace() / w2;
  G += c * w * w.transpose();
  Eigen::LLT<Eigen::MatrixXcd> llt(G);
  if (llt.info() != Eigen::Success) {
    G += Eigen::MatrixXcd::Identity(n, n) * (1e-12 * G.real().trace() / static_cast<double>(n));
    llt.compute(G);
    out.gram_regularized = true;
    if (llt.info() != Eigen::Success) fail(ErrorKind::IllConditioned, "Gram matrix is not positive definite");
  }
  const Eigen::MatrixXcd U = llt.matrixU();  // G = U^H U
  auto project = [&](Eigen::VectorXcd& v) {
    const cplx m = w.dot(v) / W;  // w real, so dot conjugates harmlessly
    v.array() -= m;
  };
  auto apply_M = [&](const Eigen::VectorXcd& y) {
    Eigen::VectorXcd x = U.triangularView<Eigen::Upper>().solve(y);
    project(x);
    x = op.matrix * x;
    project(x);
    return Eigen::VectorXcd(U * x);
  };
  auto project_adj = [&](Eigen::VectorXcd& v) {
    const cplx m = v.sum() / W;
    v -= m * w;
  };
  auto apply_MH = [&](const Eigen::VectorXcd& y) {
    Eigen::VectorXcd x = U.adjoint() * y;
    project_adj(x);
    x = op.matrix.adjoint() * x;
    project_adj(x);
    return Eigen::VectorXcd(U.adjoint().triangularView<Eigen::Lower>().solve(x));
  };
  std::mt19937_64 rng(po.seed);
  std::normal_distribution<double> nd;
  Eigen::VectorXcd y(n);
  for (Eigen::Index k = 0; k < n; ++k) y(k) = cplx(nd(rng), nd(rng));
  y.normalize();
  double sigma = 0.0;
  for (int it = 1; it <= po.max_iter; ++it) {
    Eigen::VectorXcd My = apply_M(y);
    const double next = My.norm();
    Eigen::VectorXcd z = apply_MH(My);
    const double zn = z.norm();
    if (zn == 0.0) break;
    y = z / zn;
    out.iterations = it;
    const bool settled = std::abs(next - sigma) <= po.tol * next;
    sigma = next;
    if (it >= po.min_iter && settled) {
      out.converged = true;
      break;
    }
  }
  out.value = sigma;
  return out;
}

// Column-major dump: "PLEMELJ1", u32 N, u32 dtype (1 = complex128), then N*N pairs.
inline void write_operator_binary(const std::string& path, const NystromOperator& op) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::InvalidInput, "cannot open " + path);
  out.write("PLEMELJ1", 8);
  const std::uint32_t N = static_cast<std::uint32_t>(op.size()), dtype = 1;
  out.write(reinterpret_cast<const char*>(&N), 4);
  out.write(reinterpret_cast<const char*>(&dtype), 4);
  out.write(reinterpret_cast<const char*>(op.matrix.data()), static_cast<std::streamsize>(sizeof(cplx) * N * N));
}

inline Eigen::MatrixXcd read_operator_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  char magic[8];
  std::uint32_t N = 0, dtype = 0;
  if (!in.read(magic, 8) || std::memcmp(magic, "PLEMELJ1", 8) != 0) fail(ErrorKind::InvalidInput, "bad operator file header");
  in.read(reinterpret_cast<char*>(&N), 4);
  in.read(reinterpret_cast<char*>(&dtype), 4);
  if (dtype != 1) fail(ErrorKind::InvalidInput, "unsupported operator dtype");
  Eigen::MatrixXcd M(N, N);
  if (!in.read(reinterpret_cast<char*>(M.data()), static_cast<std::streamsize>(sizeof(cplx) * N * N)))
    fail(ErrorKind::InvalidInput, "truncated operator file");
  return M;
}

}  // namespace plemelj
