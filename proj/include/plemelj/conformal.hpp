#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "plemelj/core.hpp"
#include "plemelj/geometry.hpp"
#include "plemelj/interpolation.hpp"
#include "plemelj/parallel.hpp"
#include "plemelj/quadrature.hpp"
#include "plemelj/spectral.hpp"

namespace plemelj {

enum class MapKind { identity_disk, schwarz_christoffel, theodorsen };

inline const char* to_string(MapKind k) {
  switch (k) {
    case MapKind::identity_disk: return "identity_disk";
    case MapKind::schwarz_christoffel: return "schwarz_christoffel";
    case MapKind::theodorsen: return "theodorsen";
  }
  return "?";
}

// phi(z) = center + C * integral_0^z prod_k (1 - w/z_k)^{beta_k} dw
struct SCData {
  std::vector<double> theta;      // prevertex arguments, strictly increasing, span < 2 pi
  std::vector<cplx> prevertices;  // e^{i theta_k}
  std::vector<double> alpha;      // interior angles / pi
  std::vector<double> beta;       // alpha - 1
  std::vector<cplx> vertices;     // target polygon, counterclockwise
  std::vector<cplx> images;       // computed vertex images
  cplx C{1.0, 0.0};
  cplx center{};
  double residual = 0.0;       // max vertex mismatch / diameter
  double side_residual = 0.0;  // max side-length ratio mismatch
  int iterations = 0;
};

// Map of a star-like domain r(theta) e^{i theta} from the boundary angle function Theta(t).
struct TheodorsenData {
  std::function<double(double)> r, dr;
  std::shared_ptr<const SmoothArc> arc;
  FourierSeries theta_dev;     // Theta(t) - t
  std::vector<double> theta;   // Theta on t_j = 2 pi j / M
  std::vector<cplx> a;         // log(phi(z)/z) = sum a_n z^n
  std::vector<cplx> b;         // log phi'(z) = sum b_n z^n
  double contraction = 0.0;    // max |r'/r|
  double negative_leak = 0.0;  // size of negative-frequency content in the boundary log phi'
  int iterations = 0;
  std::optional<PolarLipschitzSpec> spec;
};

namespace detail {

inline constexpr int kScOrder = 20;

inline cplx sc_log_integrand(const SCData& d, cplx w, int skip = -1) {
  cplx acc{};
  for (std::size_t k = 0; k < d.prevertices.size(); ++k)
    if (static_cast<int>(k) != skip) acc += d.beta[k] * std::log(1.0 - w / d.prevertices[k]);
  return acc;
}

inline double distance_to_prevertices(const SCData& d, cplx a, cplx b, int skip = -1) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < d.prevertices.size(); ++k) {
    if (static_cast<int>(k) == skip) continue;
    double t;
    cplx f;
    m = std::min(m, SegmentTree::point_segment(d.prevertices[k], a, b, t, f));
  }
  return m;
}

// integral of prod (1-w/z_k)^{beta_k} along the segment a -> b; ka / kb name a prevertex
// sitting at that endpoint (or -1).
inline cplx sc_segment(const SCData& d, cplx a, cplx b, int ka, int kb, int depth = 0, int order = kScOrder) {
  if (a == b) return 0.0;
  if (ka >= 0 && kb >= 0) {
    const cplx m = 0.5 * (a + b);
    return sc_segment(d, a, m, ka, -1, depth, order) + sc_segment(d, m, b, -1, kb, depth, order);
  }
  if (kb >= 0) return -sc_segment(d, b, a, kb, -1, depth, order);
  const double L = std::abs(b - a);
  if (ka >= 0) {
    double sep = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < d.prevertices.size(); ++j)
      if (static_cast<int>(j) != ka) sep = std::min(sep, std::abs(d.prevertices[j] - a));
    const double R = 0.5 * sep;
    if (!(R > 1e-13)) fail(ErrorKind::SCNoConvergence, "prevertices coalesced");
    cplx tail{};
    if (L > R) {
      const cplx m = a + (b - a) * (R / L);
      tail = sc_segment(d, m, b, -1, -1, depth, order);
      b = m;
    }
    const double be = d.beta[ka];
    const auto& gj = gauss_jacobi(kScOrder, 0.0, be);
    const cplx q = -(b - a) / d.prevertices[ka];
    cplx acc{};
    for (std::size_t i = 0; i < gj.size(); ++i) {
      const cplx w = a + 0.5 * (gj.x[i] + 1.0) * (b - a);
      acc += gj.w[i] * std::exp(sc_log_integrand(d, w, ka));
    }
    return 0.5 * (b - a) * std::pow(0.5, be) * std::exp(be * std::log(q)) * acc + tail;
  }
  const double dist = distance_to_prevertices(d, a, b);
  if (L > dist && depth < 60) {
    const cplx m = 0.5 * (a + b);
    return sc_segment(d, a, m, -1, -1, depth + 1, order) + sc_segment(d, m, b, -1, -1, depth + 1, order);
  }
  const auto& gl = gauss_legendre(order);
  cplx acc{};
  for (std::size_t i = 0; i < gl.size(); ++i) {
    const cplx w = a + 0.5 * (gl.x[i] + 1.0) * (b - a);
    acc += gl.w[i] * std::exp(sc_log_integrand(d, w));
  }
  return 0.5 * (b - a) * acc;
}

inline int nearest_prevertex(const SCData& d, cplx z) {
  int best = 0;
  for (std::size_t k = 1; k < d.prevertices.size(); ++k)
    if (std::abs(z - d.prevertices[k]) < std::abs(z - d.prevertices[best])) best = static_cast<int>(k);
  return best;
}

inline cplx sc_eval(const SCData& d, cplx z) {
  if (std::abs(z) > 1.0 + 1e-12) fail(ErrorKind::InvalidParameter, "map evaluated outside the closed disk");
  const int k = nearest_prevertex(d, z);
  if (std::abs(z - d.prevertices[k]) < 1e-14) fail(ErrorKind::SingularPoint, "evaluation at a prevertex");
  if (std::abs(z) < 0.5) return d.center + d.C * sc_segment(d, 0.0, z, -1, -1);
  return d.images[k] + d.C * sc_segment(d, d.prevertices[k], z, k, -1);
}

inline cplx power_series(const std::vector<cplx>& c, cplx z) {
  cplx acc{};
  for (std::size_t n = c.size(); n-- > 0;) acc = acc * z + c[n];
  return acc;
}

inline cplx power_series_derivative(const std::vector<cplx>& c, cplx z) {
  cplx acc{};
  for (std::size_t n = c.size(); n-- > 1;) acc = acc * z + static_cast<double>(n) * c[n];
  return acc;
}

}  // namespace detail

class RiemannMap {
 public:
  static RiemannMap identity(cplx center = 0.0, double radius = 1.0) {
    RiemannMap m;
    m.kind_ = MapKind::identity_disk;
    m.center_ = center;
    m.scale_ = radius;
    return m;
  }
  static RiemannMap from_sc(SCData d) {
    RiemannMap m;
    m.kind_ = MapKind::schwarz_christoffel;
    m.sc_ = std::make_shared<const SCData>(std::move(d));
    m.center_ = m.sc_->center;
    return m;
  }
  static RiemannMap from_theodorsen(TheodorsenData d) {
    RiemannMap m;
    m.kind_ = MapKind::theodorsen;
    m.th_ = std::make_shared<const TheodorsenData>(std::move(d));
    return m;
  }

  MapKind kind() const { return kind_; }
  const SCData* sc() const { return sc_.get(); }
  const TheodorsenData* theodorsen() const { return th_.get(); }
  cplx center() const { return center_; }

  cplx eval(cplx z) const {
    switch (kind_) {
      case MapKind::identity_disk: return center_ + scale_ * z;
      case MapKind::schwarz_christoffel: return detail::sc_eval(*sc_, z);
      case MapKind::theodorsen: return z * std::exp(detail::power_series(th_->a, z));
    }
    return {};
  }

  cplx derivative(cplx z) const { return std::exp(log_derivative(z)); }

  // Continuous branch of log phi', equal to log phi'(0) (real) at the origin.
  cplx log_derivative(cplx z) const {
    switch (kind_) {
      case MapKind::identity_disk: return std::log(scale_);
      case MapKind::schwarz_christoffel: {
        const int k = detail::nearest_prevertex(*sc_, z);
        if (std::abs(z - sc_->prevertices[k]) < 1e-14) fail(ErrorKind::SingularPoint, "derivative at a prevertex");
        return std::log(sc_->C) + detail::sc_log_integrand(*sc_, z);
      }
      case MapKind::theodorsen: return detail::power_series(th_->b, z);
    }
    return {};
  }

  // phi''/phi'
  cplx second_over_first(cplx z) const {
    switch (kind_) {
      case MapKind::identity_disk: return 0.0;
      case MapKind::schwarz_christoffel: {
        cplx acc{};
        for (std::size_t k = 0; k < sc_->prevertices.size(); ++k) acc += sc_->beta[k] / (z - sc_->prevertices[k]);
        return acc;
      }
      case MapKind::theodorsen: return detail::power_series_derivative(th_->b, z);
    }
    return {};
  }

  // Boundary angles where phi' degenerates (SC prevertices).
  std::vector<double> singular_angles() const {
    if (kind_ != MapKind::schwarz_christoffel) return {};
    std::vector<double> a;
    for (double t : sc_->theta) a.push_back(wrap_angle(t));
    std::sort(a.begin(), a.end());
    return a;
  }

  // Boundary angle function Theta(t) of a Theodorsen map.
  double boundary_theta(double t) const { return t + th_->theta_dev.eval(t).real(); }
  double boundary_theta_prime(double t) const {
    cplx acc{};
    const auto& s = th_->theta_dev;
    for (int n = s.min_mode() + 1; n <= s.max_mode(); ++n) acc += I * static_cast<double>(n) * s[n] * std::polar(1.0, n * t);
    return 1.0 + acc.real();
  }

  cplx boundary_point(double t) const {
    switch (kind_) {
      case MapKind::identity_disk: return center_ + scale_ * std::polar(1.0, t);
      case MapKind::schwarz_christoffel: return detail::sc_eval(*sc_, std::polar(1.0, t));
      case MapKind::theodorsen: {
        const double th = boundary_theta(t);
        return th_->r(th) * std::polar(1.0, th);
      }
    }
    return {};
  }

  // |phi'(e^{it})|
  double boundary_speed(double t) const {
    switch (kind_) {
      case MapKind::identity_disk: return scale_;
      case MapKind::schwarz_christoffel: {
        double acc = std::log(std::abs(sc_->C));
        for (std::size_t k = 0; k < sc_->theta.size(); ++k)
          acc += sc_->beta[k] * std::log(std::abs(2.0 * std::sin(0.5 * (t - sc_->theta[k]))));
        return std::exp(acc);
      }
      case MapKind::theodorsen: {
        const double th = boundary_theta(t);
        return boundary_theta_prime(t) * std::hypot(th_->r(th), th_->dr(th));
      }
    }
    return 0.0;
  }

  // integral over T of |phi'(e^{it})| dt, with Jacobi-matched panels at prevertices.
  double boundary_length() const {
    if (kind_ == MapKind::identity_disk) return two_pi * scale_;
    if (kind_ == MapKind::theodorsen) {
      const int M = 4096;
      double acc = 0.0;
      for (int j = 0; j < M; ++j) acc += boundary_speed(two_pi * j / M);
      return acc * two_pi / M;
    }
    const auto& th = sc_->theta;
    const std::size_t n = th.size();
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double lo = th[k], hi = (k + 1 < n) ? th[k + 1] : th[0] + two_pi;
      const double bl = sc_->beta[k], br = sc_->beta[(k + 1) % n];
      const auto& gj = gauss_jacobi(40, br, bl);
      const double h = 0.5 * (hi - lo);
      for (std::size_t i = 0; i < gj.size(); ++i) {
        const double t = lo + h * (gj.x[i] + 1.0);
        const double smooth = boundary_speed(t) / (std::pow(t - lo, bl) * std::pow(hi - t, br));
        total += gj.w[i] * smooth * std::pow(h, bl + br + 1.0);
      }
    }
    return total;
  }

 private:
  MapKind kind_ = MapKind::identity_disk;
  cplx center_{};
  double scale_ = 1.0;
  std::shared_ptr<const SCData> sc_;
  std::shared_ptr<const TheodorsenData> th_;
};

// ---------------------------------------------------------------------------
// Schwarz-Christoffel parameter problem

namespace detail {

inline void sc_set_prevertices(SCData& d, const std::vector<double>& theta) {
  d.theta = theta;
  d.prevertices.resize(theta.size());
  for (std::size_t k = 0; k < theta.size(); ++k) d.prevertices[k] = std::polar(1.0, theta[k]);
}

inline std::vector<double> sc_theta_from_logs(const Eigen::VectorXd& y) {
  const std::size_t n = static_cast<std::size_t>(y.size()) + 1;
  std::vector<double> g(n);
  double mx = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) mx = std::max(mx, y(static_cast<Eigen::Index>(k)));
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    g[k] = std::exp((k + 1 < n ? y(static_cast<Eigen::Index>(k)) : 0.0) - mx);
    sum += g[k];
  }
  std::vector<double> theta(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) theta[k] = theta[k - 1] + two_pi * g[k - 1] / sum;
  return theta;
}

// Vertex integrals I_k, least-squares constant C, scaled residual vector.
inline Eigen::VectorXd sc_residual(SCData& d, const Eigen::VectorXd& y, double diam) {
  const auto theta = sc_theta_from_logs(y);
  const std::size_t n = theta.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double gap = (k + 1 < n ? theta[k + 1] : two_pi) - theta[k];
    if (!(gap > 1e-10)) return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(2 * n), 1e10);
  }
  sc_set_prevertices(d, theta);
  std::vector<cplx> Ik(n);
  for (std::size_t k = 0; k < n; ++k) Ik[k] = -sc_segment(d, d.prevertices[k], 0.0, static_cast<int>(k), -1);
  cplx num{};
  double den = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    num += std::conj(Ik[k]) * (d.vertices[k] - d.center);
    den += std::norm(Ik[k]);
  }
  d.C = num / den;
  d.images.resize(n);
  Eigen::VectorXd r(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    d.images[k] = d.center + d.C * Ik[k];
    const cplx e = (d.images[k] - d.vertices[k]) / diam;
    r(2 * k) = e.real();
    r(2 * k + 1) = e.imag();
  }
  return r;
}

}  // namespace detail

inline RiemannMap solve_sc_parameters(const CurveSpec& polygon, double tol = 1e-10) {
  if (!polygon.is_polygon()) fail(ErrorKind::InvalidCurve, "Schwarz-Christoffel needs a polygon");
  validate(polygon);
  SCData d;
  d.vertices = oriented_vertices(polygon);
  const std::size_t n = d.vertices.size();
  if (n > 24) fail(ErrorKind::InvalidInput, "Schwarz-Christoffel solver takes at most 24 vertices");
  d.alpha.resize(n);
  d.beta.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const cplx prev = d.vertices[(k + n - 1) % n], cur = d.vertices[k], next = d.vertices[(k + 1) % n];
    const double turn = std::arg((next - cur) / (cur - prev));
    d.alpha[k] = 1.0 - turn / pi;
    d.beta[k] = d.alpha[k] - 1.0;
    if (d.alpha[k] < 0.05 || d.alpha[k] > 1.95)
      fail(ErrorKind::IllConditioned, "interior angle too close to 0 or 2 pi at vertex " + std::to_string(k), d.alpha[k]);
  }
  const double diam = diameter(d.vertices);
  d.center = detail::interior_anchor(SegmentTree(d.vertices, true));

  // Initial gaps from the angular position of vertices seen from the anchor.
  Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n - 1));
  {
    std::vector<double> gaps(n);
    bool ok = true;
    for (std::size_t k = 0; k < n; ++k) {
      gaps[k] = wrap_angle(std::arg(d.vertices[(k + 1) % n] - d.center) - std::arg(d.vertices[k] - d.center));
      if (!(gaps[k] > 1e-3)) ok = false;
    }
    double sum = 0.0;
    for (double g : gaps) sum += g;
    if (ok && std::abs(sum - two_pi) < 1e-6)
      for (std::size_t k = 0; k + 1 < n; ++k) y(static_cast<Eigen::Index>(k)) = std::log(gaps[k] / gaps[n - 1]);
  }

  // Levenberg-Marquardt with a forward-difference Jacobian.
  Eigen::VectorXd r = detail::sc_residual(d, y, diam);
  double cost = r.squaredNorm();
  double mu = 1e-3;
  int it = 0;
  for (; it < 300 && r.lpNorm<Eigen::Infinity>() > 1e-2 * tol; ++it) {
    const Eigen::Index m = y.size();
    Eigen::MatrixXd J(r.size(), m);
    for (Eigen::Index j = 0; j < m; ++j) {
      Eigen::VectorXd yp = y;
      const double step = 1e-7 * (1.0 + std::abs(y(j)));
      yp(j) += step;
      J.col(j) = (detail::sc_residual(d, yp, diam) - r) / step;
    }
    const Eigen::MatrixXd A = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    bool accepted = false;
    for (int inner = 0; inner < 30; ++inner) {
      Eigen::MatrixXd Am = A;
      for (Eigen::Index j = 0; j < m; ++j) Am(j, j) += mu * std::max(A(j, j), 1e-12);
      const Eigen::VectorXd dy = Am.ldlt().solve(-g);
      const Eigen::VectorXd yn = y + dy;
      const Eigen::VectorXd rn = detail::sc_residual(d, yn, diam);
      const double cn = rn.squaredNorm();
      if (std::isfinite(cn) && cn < cost) {
        y = yn;
        r = rn;
        cost = cn;
        mu = std::max(mu / 3.0, 1e-12);
        accepted = true;
        break;
      }
      mu *= 4.0;
    }
    if (!accepted) break;
  }
  r = detail::sc_residual(d, y, diam);
  d.residual = r.lpNorm<Eigen::Infinity>() * std::sqrt(2.0);
  d.iterations = it;
  if (!(d.residual <= tol)) fail(ErrorKind::SCNoConvergence, "Schwarz-Christoffel solve stagnated", d.residual);

  // Rotate so that phi'(0) = C > 0.
  const double psi = std::arg(d.C);
  std::vector<double> theta = d.theta;
  for (auto& t : theta) t += psi;
  const double shift = std::floor(theta[0] / two_pi) * two_pi;
  for (auto& t : theta) t -= shift;
  detail::sc_set_prevertices(d, theta);
  d.C = std::abs(d.C);

  const double l0 = std::abs(d.vertices[1] - d.vertices[0]), m0 = std::abs(d.images[1] - d.images[0]);
  for (std::size_t k = 0; k < n; ++k) {
    const double lk = std::abs(d.vertices[(k + 1) % n] - d.vertices[k]);
    const double mk = std::abs(d.images[(k + 1) % n] - d.images[k]);
    d.side_residual = std::max(d.side_residual, std::abs(mk / m0 - lk / l0));
  }
  return RiemannMap::from_sc(std::move(d));
}

// ---------------------------------------------------------------------------
// Theodorsen iteration for star-like curves r(theta) e^{i theta}

inline RiemannMap theodorsen_solve(std::function<double(double)> r, std::function<double(double)> dr,
                                   std::shared_ptr<const SmoothArc> arc, std::size_t N = 1024, double tol = 1e-12) {
  if (N < 16 || N % 2 != 0) fail(ErrorKind::InvalidInput, "Theodorsen grid must be even and at least 16");
  TheodorsenData d;
  d.r = r;
  d.dr = dr;
  d.arc = std::move(arc);
  for (int j = 0; j < 8192; ++j) {
    const double th = two_pi * j / 8192.0;
    const double rv = r(th);
    if (!(rv > 0.0)) fail(ErrorKind::InvalidCurve, "radius must stay positive");
    d.contraction = std::max(d.contraction, std::abs(dr(th) / rv));
  }
  if (d.contraction >= 1.0)
    fail(ErrorKind::TheodorsenDiverged, "max |r'/r| >= 1, iteration is not a contraction", d.contraction);

  const std::size_t M = N;
  std::vector<double> t(M), theta(M);
  for (std::size_t j = 0; j < M; ++j) t[j] = theta[j] = two_pi * static_cast<double>(j) / M;
  std::vector<cplx> buf(M);
  double change = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < 2000 && change > tol; ++it) {
    for (std::size_t j = 0; j < M; ++j) buf[j] = std::log(r(theta[j]));
    auto H = hilbert_transform(analyze(buf)).synthesize();
    change = 0.0;
    for (std::size_t j = 0; j < M; ++j) {
      const double next = t[j] + H[j].real();
      change = std::max(change, std::abs(next - theta[j]));
      theta[j] = next;
    }
    if (!std::isfinite(change)) fail(ErrorKind::TheodorsenDiverged, "iteration produced non-finite angles");
  }
  if (change > tol) fail(ErrorKind::TheodorsenDiverged, "iteration did not reach tolerance", change);
  d.iterations = it;
  d.theta = theta;
  for (std::size_t j = 0; j < M; ++j) buf[j] = theta[j] - t[j];
  d.theta_dev = analyze(buf);
  // Drop the Nyquist mode so the interpolant is real.
  d.theta_dev.at(d.theta_dev.min_mode()) = 0.0;

  std::vector<double> dtheta(M);
  {
    FourierSeries ds(M);
    for (int n = d.theta_dev.min_mode() + 1; n <= d.theta_dev.max_mode(); ++n)
      ds.at(n) = I * static_cast<double>(n) * d.theta_dev[n];
    auto v = ds.synthesize();
    for (std::size_t j = 0; j < M; ++j) {
      dtheta[j] = 1.0 + v[j].real();
      if (!(dtheta[j] > 0.0)) fail(ErrorKind::TheodorsenDiverged, "boundary angle map is not monotone");
    }
  }
  std::vector<cplx> logphi(M), logdphi(M);
  for (std::size_t j = 0; j < M; ++j) {
    const double rv = r(theta[j]), drv = dr(theta[j]);
    logphi[j] = cplx{std::log(rv), theta[j] - t[j]};
    logdphi[j] = cplx{std::log(dtheta[j] * std::hypot(rv, drv)), theta[j] - t[j] - std::atan(drv / rv)};
  }
  const auto A = analyze(logphi), B = analyze(logdphi);
  d.a.resize(M / 2);
  d.b.resize(M / 2);
  for (std::size_t n = 0; n < M / 2; ++n) {
    d.a[n] = A[static_cast<int>(n)];
    d.b[n] = B[static_cast<int>(n)];
  }
  d.a[0] = d.a[0].real();
  d.b[0] = d.b[0].real();
  for (int n = B.min_mode() + 1; n < 0; ++n) d.negative_leak = std::max(d.negative_leak, std::abs(B[n]));
  return RiemannMap::from_theodorsen(std::move(d));
}

inline RiemannMap theodorsen_solve(const CurveSpec& spec, std::size_t N = 1024, double tol = 1e-12) {
  if (const auto* p = std::get_if<PolarLipschitzSpec>(&spec.kind)) {
    validate(spec);
    const PolarLipschitzSpec q = *p;
    auto arc = std::dynamic_pointer_cast<const SmoothArc>(make_geometry(spec));
    auto m = theodorsen_solve([q](double t) { return q.radius(t); }, [q](double t) { return q.radius_derivative(t); },
                              arc, N, tol);
    const_cast<TheodorsenData*>(m.theodorsen())->spec = q;
    return m;
  }
  if (const auto* e = std::get_if<EllipseSpec>(&spec.kind)) {
    // An ellipse is star-like about its center: r = ab / sqrt(b^2 cos^2 + a^2 sin^2).
    const double a = e->a, b = e->b;
    auto r = [a, b](double t) { return a * b / std::sqrt(sqr(b * std::cos(t)) + sqr(a * std::sin(t))); };
    auto dr = [a, b](double t) {
      const double q = sqr(b * std::cos(t)) + sqr(a * std::sin(t));
      return -a * b * 0.5 * std::pow(q, -1.5) * (a * a - b * b) * std::sin(2.0 * t);
    };
    auto arc = std::make_shared<SmoothArc>([r](double t) { return r(t) * std::polar(1.0, t); },
                                           [r, dr](double t) { return cplx{dr(t), r(t)} * std::polar(1.0, t); });
    return theodorsen_solve(r, dr, arc, N, tol);
  }
  fail(ErrorKind::InvalidCurve, "Theodorsen solver needs a polar_lipschitz or ellipse curve");
}

// Map matched to a sampled curve: identity for circles, SC for polygons, Theodorsen for
// polar graphs and ellipses.
inline RiemannMap riemann_map_for(const CurveSpec& spec, std::size_t theodorsen_grid = 1024) {
  if (const auto* c = std::get_if<CircleSpec>(&spec.kind)) return RiemannMap::identity(c->center, c->radius);
  if (spec.is_polygon()) return solve_sc_parameters(spec);
  if (spec.is_polar() || std::holds_alternative<EllipseSpec>(spec.kind)) return theodorsen_solve(spec, theodorsen_grid);
  fail(ErrorKind::InvalidCurve, "no Riemann map available for this curve kind");
}

// ---------------------------------------------------------------------------
// Boundary correspondence h = lambda^{-1} o phi on T

struct BoundaryCorrespondence {
  std::vector<double> t;            // t_j = t0 + 2 pi j / M
  std::vector<double> h_values;     // arclength position, strictly increasing, unwrapped
  std::vector<double> h_prime_abs;  // |phi'(e^{i t_j})|
  double t0 = 0.0;
  double length = 0.0;        // curve length
  double max_mismatch = 0.0;  // largest distance of phi(e^{it_j}) from the curve
  std::size_t size() const { return t.size(); }
};

namespace detail {

// Arclength of phi(e^{it}) on the polygon, measured from the nearer end of its side.
inline double sc_boundary_arclength(const SCData& d, const std::vector<double>& vertex_s, double L, double t) {
  const std::size_t n = d.theta.size();
  double tt = d.theta[0] + wrap_angle(t - d.theta[0]);
  std::size_t k = n - 1;
  for (std::size_t j = 0; j + 1 < n; ++j)
    if (tt >= d.theta[j] && tt < d.theta[j + 1]) k = j;
  const std::size_t k1 = (k + 1) % n;
  const double lo = d.theta[k], hi = (k + 1 < n) ? d.theta[k + 1] : d.theta[0] + two_pi;
  const cplx z = std::polar(1.0, tt);
  const cplx dir = (d.vertices[k1] - d.vertices[k]) / std::abs(d.vertices[k1] - d.vertices[k]);
  const double side = std::abs(d.vertices[k1] - d.vertices[k]);
  double along;
  if (tt - lo <= hi - tt) {
    const cplx p = d.images[k] + d.C * sc_segment(d, d.prevertices[k], z, static_cast<int>(k), -1);
    along = std::real((p - d.images[k]) * std::conj(dir));
  } else {
    const cplx p = d.images[k1] + d.C * sc_segment(d, d.prevertices[k1], z, static_cast<int>(k1), -1);
    along = side - std::real((d.images[k1] - p) * std::conj(dir));
  }
  double s = vertex_s[k] + along;
  s = std::fmod(s, L);
  return s < 0.0 ? s + L : s;
}

}  // namespace detail

// Arclength position in [0, L) of phi(e^{it}) on the curve.
inline double boundary_arclength(const RiemannMap& map, const SampledCurve& curve, double t) {
  const double L = curve.total_length;
  double s = 0.0;
  switch (map.kind()) {
    case MapKind::identity_disk: {
      const double R = std::abs(map.boundary_point(0.0) - map.center());
      s = R * wrap_angle(std::arg(map.boundary_point(t) - map.center()));
      break;
    }
    case MapKind::schwarz_christoffel:
      return detail::sc_boundary_arclength(*map.sc(), curve.geometry->vertex_arclengths(), L, t);
    case MapKind::theodorsen:
      s = map.theodorsen()->arc->s_of_theta(map.boundary_theta(t));
      break;
  }
  s = std::fmod(s, L);
  return s < 0.0 ? s + L : s;
}

inline BoundaryCorrespondence boundary_correspondence(const RiemannMap& map, const SampledCurve& curve, std::size_t M = 0) {
  if (M == 0) M = 4 * curve.size();
  if (M % 2 != 0) ++M;
  BoundaryCorrespondence bc;
  bc.length = curve.total_length;
  bc.t0 = pi / static_cast<double>(M);  // half-shifted: never lands on a prevertex
  bc.t.resize(M);
  bc.h_values.resize(M);
  bc.h_prime_abs.resize(M);
  const double L = curve.total_length;
  std::vector<double> raw(M);
  std::vector<double> mismatch(M, 0.0);

  // Theodorsen maps carry their own polar arc; its arclength origin (theta = 0) matches
  // the curve's for polar graphs and ellipses.
  const SmoothArc* arc = map.kind() == MapKind::theodorsen ? map.theodorsen()->arc.get() : nullptr;
  if (arc && std::abs(arc->length() - curve.total_length) > 1e-9 * curve.total_length)
    fail(ErrorKind::CurveMapMismatch, "Theodorsen map and curve differ in length");
  if (map.kind() == MapKind::schwarz_christoffel) {
    const auto& cv = curve.vertices();
    const auto& mv = map.sc()->vertices;
    bool same = cv.size() == mv.size();
    for (std::size_t k = 0; same && k < cv.size(); ++k) same = std::abs(cv[k] - mv[k]) <= 1e-12 * (1.0 + std::abs(mv[k]));
    if (!same) fail(ErrorKind::CurveMapMismatch, "polygon map and curve have different vertices");
  }
  parallel_for(M, [&](std::size_t j) {
    const double t = bc.t0 + two_pi * static_cast<double>(j) / M;
    bc.t[j] = t;
    bc.h_prime_abs[j] = map.boundary_speed(t);
    raw[j] = boundary_arclength(map, curve, t);
    const cplx p = map.boundary_point(t);
    mismatch[j] = map.kind() == MapKind::schwarz_christoffel ? std::abs(p - curve.geometry->point(raw[j])) : curve.distance(p);
  });
  bc.max_mismatch = *std::max_element(mismatch.begin(), mismatch.end());
  const double tolerance = 0.05 * curve.spacing() + 1e-9 * L;
  if (bc.max_mismatch > tolerance) fail(ErrorKind::CurveMapMismatch, "map boundary leaves the curve", bc.max_mismatch);

  // Unwrap to a strictly increasing sequence starting in [0, L).
  double base = std::fmod(raw[0], L);
  if (base < 0) base += L;
  bc.h_values[0] = base;
  for (std::size_t j = 1; j < M; ++j) {
    double v = raw[j];
    const double prev = bc.h_values[j - 1];
    v += std::round((prev - v) / L) * L;
    if (v < prev - 0.5 * L) v += L;
    bc.h_values[j] = v;
  }
  for (std::size_t j = 1; j < M; ++j)
    if (!(bc.h_values[j] > bc.h_values[j - 1]))
      fail(ErrorKind::CorrespondenceDegenerate, "boundary correspondence is not strictly increasing");
  if (!(bc.h_values[M - 1] < bc.h_values[0] + L))
    fail(ErrorKind::CorrespondenceDegenerate, "boundary correspondence wraps more than once");
  return bc;
}

namespace detail {
// Local Lagrange interpolation of node samples at arclength x, using only nodes on the
// smooth piece containing x (pieces end at corners, which are nodes).
inline cplx piecewise_lagrange(const SampledCurve& c, const std::vector<double>& s, const std::vector<cplx>& f,
                               double x, int p = 8) {
  const std::size_t N = c.size();
  const double L = c.total_length, h = c.spacing();
  x -= std::floor(x / L) * L;
  // Nearest node index at or below x, and distance to the piece ends in nodes.
  long k0 = static_cast<long>(std::floor(x / h));
  long left = -static_cast<long>(N), right = static_cast<long>(N);
  for (std::size_t ci : c.corner_indices) {
    long d = static_cast<long>(ci) - k0;
    d -= static_cast<long>(std::floor(static_cast<double>(d) / N)) * static_cast<long>(N);  // d in [0, N)
    if (d > 0 && d < right) right = d;
    long e = k0 - static_cast<long>(ci);
    e -= static_cast<long>(std::floor(static_cast<double>(e) / N)) * static_cast<long>(N);
    if (e < -left) left = -e;
    if (d == 0) left = 0;
  }
  if (c.corner_indices.empty()) left = -p, right = p;
  if (right - left + 1 < 2) return f[static_cast<std::size_t>(k0) % N];
  long lo = k0 - (p / 2 - 1), hi = lo + p - 1;
  if (lo < k0 + left) lo = k0 + left, hi = std::min(lo + p - 1, k0 + right);
  if (hi > k0 + right) hi = k0 + right, lo = std::max(hi - p + 1, k0 + left);
  std::vector<double> xs;
  std::vector<cplx> ys;
  for (long j = lo; j <= hi; ++j) {
    const std::size_t idx = static_cast<std::size_t>(((j % static_cast<long>(N)) + static_cast<long>(N)) % static_cast<long>(N));
    xs.push_back(static_cast<double>(j) * h);
    ys.push_back(f[idx]);
  }
  (void)s;
  return barycentric_eval(xs, barycentric_weights(xs), ys, x);
}
}  // namespace detail

// t = h^{-1}(sigma): bracket from the correspondence grid, then safeguarded Newton.
inline double inverse_correspondence(const RiemannMap& map, const SampledCurve& curve, const BoundaryCorrespondence& bc,
                                     double sigma) {
  const double L = curve.total_length;
  const std::size_t M = bc.size();
  double x = sigma - std::floor((sigma - bc.h_values[0]) / L) * L;  // x in [h_0, h_0 + L)
  std::size_t j = static_cast<std::size_t>(std::upper_bound(bc.h_values.begin(), bc.h_values.end(), x) - bc.h_values.begin());
  double lo_t, hi_t, lo_s, hi_s;
  if (j == 0) fail(ErrorKind::CorrespondenceDegenerate, "arclength below the correspondence grid");
  lo_t = bc.t[j - 1], lo_s = bc.h_values[j - 1];
  if (j < M) {
    hi_t = bc.t[j], hi_s = bc.h_values[j];
  } else {
    hi_t = bc.t[0] + two_pi, hi_s = bc.h_values[0] + L;
  }
  // Unwrapped arclength near x.
  auto s_at = [&](double t) {
    double v = boundary_arclength(map, curve, t);
    return v + std::round((x - v) / L) * L;
  };
  double t = lo_t + (hi_t - lo_t) * (x - lo_s) / (hi_s - lo_s);
  for (int it = 0; it < 100; ++it) {
    const double f = s_at(t) - x;
    if (std::abs(f) <= 1e-14 * L) break;
    if (f > 0) hi_t = t; else lo_t = t;
    const double sp = map.boundary_speed(t);
    double next = (std::isfinite(sp) && sp > 0) ? t - f / sp : 0.5 * (lo_t + hi_t);
    if (!(next > lo_t && next < hi_t)) next = 0.5 * (lo_t + hi_t);
    if (hi_t - lo_t < 1e-15) break;
    t = next;
  }
  return t;
}

enum class ConjugationMethod {
  automatic,     // curve quadrature for polygon maps, Fourier resampling otherwise
  fft_resample,  // resample f o lambda o h on a uniform grid of T, FFT Hilbert transform, map back
  curve_quadrature,
};

// Conjugation on the curve: (V_h^{-1} H V_h) applied to f o lambda.
inline std::vector<cplx> conjugate_on_curve(const std::vector<cplx>& f, const SampledCurve& curve,
                                            const BoundaryCorrespondence& bc, const RiemannMap* map = nullptr,
                                            ConjugationMethod method = ConjugationMethod::automatic) {
  const std::size_t N = curve.size(), M = bc.size();
  if (f.size() != N) fail(ErrorKind::InvalidInput, "function must be sampled at the curve nodes");
  for (std::size_t j = 1; j < M; ++j)
    if (!(bc.h_values[j] > bc.h_values[j - 1])) fail(ErrorKind::CorrespondenceDegenerate, "h not strictly increasing");
  if (method == ConjugationMethod::automatic)
    method = map && map->kind() == MapKind::schwarz_christoffel ? ConjugationMethod::curve_quadrature
                                                                  : ConjugationMethod::fft_resample;
  const double L = curve.total_length;
  std::vector<double> s(N);
  for (std::size_t k = 0; k < N; ++k) s[k] = curve.arclength(k);
  std::vector<cplx> out(N);

  if (method == ConjugationMethod::curve_quadrature) {
    // Hg(t) = (1/2pi) int (g(tau) - g(t)) cot((t - tau)/2) dtau on Gauss panels in tau,
    // graded toward the prevertices where g = f o h has algebraic cusps.
    if (!map) fail(ErrorKind::InvalidInput, "curve quadrature conjugation needs the map");
    std::vector<double> breaks = map->singular_angles();
    if (breaks.empty()) breaks = {0.0};
    std::sort(breaks.begin(), breaks.end());
    std::vector<double> tq, wq;
    const int order = 16, levels = 24;
    for (std::size_t k = 0; k < breaks.size(); ++k) {
      const double lo = breaks[k], hi = k + 1 < breaks.size() ? breaks[k + 1] : breaks[0] + two_pi;
      const int nb = std::max(2, static_cast<int>(std::ceil(N * (hi - lo) / two_pi / 8.0)));
      const double pw = (hi - lo) / nb;
      std::vector<double> cuts;
      for (int j = 0; j <= nb; ++j) cuts.push_back(lo + j * pw);
      for (int j = 1; j <= levels; ++j) {
        cuts.push_back(lo + pw * std::ldexp(1.0, -j));
        cuts.push_back(hi - pw * std::ldexp(1.0, -j));
      }
      std::sort(cuts.begin(), cuts.end());
      for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
        auto m = mapped_legendre(order, cuts[p], cuts[p + 1]);
        tq.insert(tq.end(), m.x.begin(), m.x.end());
        wq.insert(wq.end(), m.w.begin(), m.w.end());
      }
    }
    const std::size_t Q = tq.size();
    std::vector<cplx> gq(Q);
    parallel_for(Q, [&](std::size_t q) {
      gq[q] = detail::piecewise_lagrange(curve, s, f, boundary_arclength(*map, curve, tq[q]));
    }, 64);
    parallel_for(N, [&](std::size_t i) {
      const double ti = inverse_correspondence(*map, curve, bc, s[i]);
      cplx acc{};
      for (std::size_t q = 0; q < Q; ++q) {
        const double d = 0.5 * (ti - tq[q]);
        const double sn = std::sin(d);
        if (std::abs(sn) < 1e-300) continue;
        acc += wq[q] * (gq[q] - f[i]) * (std::cos(d) / sn);
      }
      out[i] = acc / two_pi;
    }, 4);
    return out;
  }

  PeriodicPchipComplex fi(s, f, L);
  std::vector<cplx> g(M);
  for (std::size_t j = 0; j < M; ++j) g[j] = fi(bc.h_values[j]);
  FourierSeries G = analyze(g);
  FourierSeries Hg(M);
  for (int n = G.min_mode() + 1; n <= G.max_mode(); ++n)
    if (n != 0) Hg.at(n) = (n > 0 ? -I : I) * G[n] * std::polar(1.0, -n * bc.t0);
  PeriodicPchip hinv(bc.h_values, bc.t, L, two_pi);
  parallel_for(N, [&](std::size_t k) {
    const double t = hinv(s[k]);
    const cplx e = std::polar(1.0, t);
    cplx acc = Hg[0];
    cplx ep = e, em = std::conj(e);
    for (int n = 1; n <= Hg.max_mode(); ++n) {
      acc += Hg[n] * ep + Hg[-n] * em;
      ep *= e;
      em *= std::conj(e);
    }
    out[k] = acc;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Map cache

inline nlohmann::json map_to_json(const RiemannMap& m) {
  using nlohmann::json;
  json j;
  j["kind"] = to_string(m.kind());
  auto pt = [](cplx z) { return json::array({z.real(), z.imag()}); };
  if (m.kind() == MapKind::identity_disk) {
    j["center"] = pt(m.center());
    j["radius"] = std::abs(m.eval(1.0) - m.center());
  } else if (m.kind() == MapKind::schwarz_christoffel) {
    const auto& d = *m.sc();
    j["prevertex_arguments"] = d.theta;
    j["interior_angles"] = d.alpha;
    json v = json::array();
    for (auto z : d.vertices) v.push_back(pt(z));
    j["vertices"] = v;
    json im = json::array();
    for (auto z : d.images) im.push_back(pt(z));
    j["vertex_images"] = im;
    j["constant"] = pt(d.C);
    j["center"] = pt(d.center);
    j["residual"] = d.residual;
    j["side_residual"] = d.side_residual;
  } else {
    const auto& d = *m.theodorsen();
    if (d.spec) j["curve"] = curve_to_json(CurveSpec{*d.spec});
    j["grid"] = d.theta.size();
    j["boundary_theta"] = d.theta;
    j["contraction"] = d.contraction;
  }
  return j;
}

inline RiemannMap map_from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    auto pt = [](const nlohmann::json& p) { return cplx{p.at(0).get<double>(), p.at(1).get<double>()}; };
    if (kind == "identity_disk") return RiemannMap::identity(pt(j.at("center")), j.at("radius").get<double>());
    if (kind == "schwarz_christoffel") {
      SCData d;
      detail::sc_set_prevertices(d, j.at("prevertex_arguments").get<std::vector<double>>());
      d.alpha = j.at("interior_angles").get<std::vector<double>>();
      for (double a : d.alpha) d.beta.push_back(a - 1.0);
      for (const auto& v : j.at("vertices")) d.vertices.push_back(pt(v));
      for (const auto& v : j.at("vertex_images")) d.images.push_back(pt(v));
      d.C = pt(j.at("constant"));
      d.center = pt(j.at("center"));
      d.residual = j.value("residual", 0.0);
      d.side_residual = j.value("side_residual", 0.0);
      if (d.theta.size() != d.alpha.size() || d.vertices.size() != d.alpha.size() || d.images.size() != d.alpha.size())
        fail(ErrorKind::InvalidInput, "map cache arrays disagree in length");
      return RiemannMap::from_sc(std::move(d));
    }
    if (kind == "theodorsen") {
      // Re-solved from the curve; the cached angles serve as a cross-check.
      const CurveSpec spec = curve_from_json(j.at("curve"));
      return theodorsen_solve(spec, j.at("grid").get<std::size_t>());
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidInput, std::string("map cache: ") + e.what());
  }
  fail(ErrorKind::InvalidInput, "map cache: unknown kind");
}

inline void save_map(const std::string& path, const RiemannMap& m) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::InvalidInput, "cannot open " + path);
  out << map_to_json(m).dump(2) << "\n";
}

inline RiemannMap load_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidInput, "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidInput, std::string("map cache: ") + e.what());
  }
  return map_from_json(j);
}

}  // namespace plemelj
