#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "plemelj/core.hpp"
#include "plemelj/fft.hpp"
#include "plemelj/parallel.hpp"

namespace plemelj {

// ---------------------------------------------------------------------------
// Curve specifications

struct CircleSpec {
  double radius = 1.0;
  cplx center{0.0, 0.0};
};

struct EllipseSpec {
  double a = 1.0, b = 1.0;
};

struct PolygonSpec {
  std::vector<cplx> vertices;
};

// r(theta) = sum_{n>=0} c_n cos(n theta) + sum_{n>0} c_{-n} sin(n theta).
struct PolarLipschitzSpec {
  std::map<int, double> coeffs;

  double radius(double th) const {
    double r = 0.0;
    for (auto [n, c] : coeffs) r += n >= 0 ? c * std::cos(n * th) : c * std::sin(-n * th);
    return r;
  }
  double radius_derivative(double th) const {
    double r = 0.0;
    for (auto [n, c] : coeffs) r += n >= 0 ? -c * n * std::sin(n * th) : c * (-n) * std::cos(-n * th);
    return r;
  }
  double radius_second(double th) const {
    double r = 0.0;
    for (auto [n, c] : coeffs) r += n >= 0 ? -c * n * n * std::cos(n * th) : -c * n * n * std::sin(-n * th);
    return r;
  }
};

struct KochSpec {
  int level = 0;
  double side = 1.0;
};

using CurveKind = std::variant<CircleSpec, EllipseSpec, PolygonSpec, PolarLipschitzSpec, KochSpec>;

// Orientation is always positive; polygon input given clockwise is reversed.
struct CurveSpec {
  CurveKind kind;

  bool is_circle() const { return std::holds_alternative<CircleSpec>(kind); }
  bool is_polygon() const { return std::holds_alternative<PolygonSpec>(kind); }
  bool is_polar() const { return std::holds_alternative<PolarLipschitzSpec>(kind); }
  bool is_koch() const { return std::holds_alternative<KochSpec>(kind); }
  bool straight_sided() const { return is_polygon() || is_koch(); }
};

inline double signed_area(std::span<const cplx> p) {
  double a = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const cplx u = p[i], v = p[(i + 1) % p.size()];
    a += u.real() * v.imag() - v.real() * u.imag();
  }
  return 0.5 * a;
}

inline std::vector<cplx> koch_vertices(int level, double side) {
  std::vector<cplx> v{0.0, side, side * std::polar(1.0, pi / 3.0)};
  const cplx bump = std::polar(1.0, -pi / 3.0);
  for (int l = 0; l < level; ++l) {
    std::vector<cplx> w;
    w.reserve(v.size() * 4);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const cplx a = v[i], b = v[(i + 1) % v.size()], d = (b - a) / 3.0;
      w.push_back(a);
      w.push_back(a + d);
      w.push_back(a + d + d * bump);
      w.push_back(a + 2.0 * d);
    }
    v = std::move(w);
  }
  const cplx c = side * (1.0 + std::polar(1.0, pi / 3.0)) / 3.0;
  for (auto& z : v) z -= c;
  return v;
}

namespace detail {

inline double orient(cplx a, cplx b, cplx c) {
  return (b.real() - a.real()) * (c.imag() - a.imag()) - (b.imag() - a.imag()) * (c.real() - a.real());
}

inline bool on_segment(cplx a, cplx b, cplx p) {
  return std::min(a.real(), b.real()) <= p.real() && p.real() <= std::max(a.real(), b.real()) &&
         std::min(a.imag(), b.imag()) <= p.imag() && p.imag() <= std::max(a.imag(), b.imag());
}

inline bool segments_intersect(cplx p1, cplx p2, cplx q1, cplx q2) {
  const double d1 = orient(q1, q2, p1), d2 = orient(q1, q2, p2);
  const double d3 = orient(p1, p2, q1), d4 = orient(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  if (d1 == 0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment(p1, p2, q2)) return true;
  return false;
}

}  // namespace detail

inline bool polygon_is_simple(std::span<const cplx> v) {
  const std::size_t n = v.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const cplx a = v[i], b = v[(i + 1) % n];
    if (a == b) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      const cplx c = v[j], d = v[(j + 1) % n];
      if (adjacent) {
        // adjacent edges may only share their common vertex
        const cplx shared = (j == i + 1) ? b : a;
        const cplx other1 = (j == i + 1) ? a : b;
        const cplx other2 = (j == i + 1) ? d : c;
        if (detail::orient(other1, shared, other2) == 0.0 &&
            std::real((other1 - shared) * std::conj(other2 - shared)) > 0.0)
          return false;
        continue;
      }
      if (detail::segments_intersect(a, b, c, d)) return false;
    }
  }
  return true;
}

inline void validate(const CurveSpec& spec) {
  std::visit(
      [](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, CircleSpec>) {
          if (!(k.radius > 0.0) || !std::isfinite(k.radius)) fail(ErrorKind::InvalidCurve, "circle radius must be positive");
        } else if constexpr (std::is_same_v<K, EllipseSpec>) {
          if (!(k.a > 0.0 && k.b > 0.0)) fail(ErrorKind::InvalidCurve, "ellipse semi-axes must be positive");
        } else if constexpr (std::is_same_v<K, PolygonSpec>) {
          std::vector<cplx> v = k.vertices;
          if (v.size() > 1 && v.front() == v.back()) v.pop_back();
          if (v.size() < 3) fail(ErrorKind::InvalidCurve, "polygon needs at least 3 vertices");
          if (!polygon_is_simple(v)) fail(ErrorKind::InvalidCurve, "polygon is self-intersecting");
        } else if constexpr (std::is_same_v<K, PolarLipschitzSpec>) {
          if (k.coeffs.empty()) fail(ErrorKind::InvalidCurve, "polar radius has no coefficients");
          double rmin = std::numeric_limits<double>::infinity();
          for (int j = 0; j < 4096; ++j) rmin = std::min(rmin, k.radius(two_pi * j / 4096.0));
          if (!(rmin > 0.0)) fail(ErrorKind::InvalidCurve, "polar radius must stay positive");
        } else {
          if (k.level < 0 || k.level > 8) fail(ErrorKind::InvalidCurve, "koch level must lie in [0, 8]");
          if (!(k.side > 0.0)) fail(ErrorKind::InvalidCurve, "koch side must be positive");
        }
      },
      spec.kind);
}

// Polygon vertices after orientation normalization (counterclockwise).
inline std::vector<cplx> oriented_vertices(const CurveSpec& spec) {
  if (const auto* p = std::get_if<PolygonSpec>(&spec.kind)) {
    std::vector<cplx> v = p->vertices;
    if (v.size() > 1 && v.front() == v.back()) v.pop_back();
    if (signed_area(v) < 0.0) std::reverse(v.begin() + 1, v.end());
    return v;
  }
  if (const auto* k = std::get_if<KochSpec>(&spec.kind)) return koch_vertices(k->level, k->side);
  fail(ErrorKind::InvalidCurve, "curve has no vertex list");
}

// ---------------------------------------------------------------------------
// JSON

inline CurveSpec curve_from_json(const nlohmann::json& j) {
  auto point = [](const nlohmann::json& p) -> cplx {
    if (!p.is_array() || p.size() != 2) fail(ErrorKind::InvalidCurve, "point must be [x, y]");
    return {p[0].get<double>(), p[1].get<double>()};
  };
  try {
    const std::string kind = j.at("kind").get<std::string>();
    CurveSpec spec;
    if (kind == "circle") {
      CircleSpec c;
      c.radius = j.value("radius", 1.0);
      if (j.contains("center")) c.center = point(j["center"]);
      spec.kind = c;
    } else if (kind == "ellipse") {
      spec.kind = EllipseSpec{j.at("a").get<double>(), j.at("b").get<double>()};
    } else if (kind == "polygon") {
      PolygonSpec p;
      for (const auto& v : j.at("vertices")) p.vertices.push_back(point(v));
      spec.kind = p;
    } else if (kind == "polar_lipschitz") {
      PolarLipschitzSpec p;
      for (auto it = j.at("coeffs").begin(); it != j.at("coeffs").end(); ++it) {
        std::size_t used = 0;
        const int n = std::stoi(it.key(), &used);
        if (used != it.key().size()) fail(ErrorKind::InvalidCurve, "bad coefficient key " + it.key());
        p.coeffs[n] += it.value().get<double>();
      }
      spec.kind = p;
    } else if (kind == "koch" || kind == "koch_prefractal") {
      spec.kind = KochSpec{j.at("level").get<int>(), j.value("side", 1.0)};
    } else {
      fail(ErrorKind::InvalidCurve, "unknown curve kind '" + kind + "'");
    }
    validate(spec);
    return spec;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidCurve, std::string("curve spec: ") + e.what());
  } catch (const std::invalid_argument&) {
    fail(ErrorKind::InvalidCurve, "curve spec: bad number");
  }
}

inline nlohmann::json curve_to_json(const CurveSpec& spec) {
  using nlohmann::json;
  return std::visit(
      [](const auto& k) -> json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, CircleSpec>) {
          json j{{"kind", "circle"}, {"radius", k.radius}};
          if (k.center != cplx{}) j["center"] = {k.center.real(), k.center.imag()};
          return j;
        } else if constexpr (std::is_same_v<K, EllipseSpec>) {
          return {{"kind", "ellipse"}, {"a", k.a}, {"b", k.b}};
        } else if constexpr (std::is_same_v<K, PolygonSpec>) {
          json v = json::array();
          for (auto z : k.vertices) v.push_back({z.real(), z.imag()});
          return {{"kind", "polygon"}, {"vertices", v}};
        } else if constexpr (std::is_same_v<K, PolarLipschitzSpec>) {
          json c = json::object();
          for (auto [n, a] : k.coeffs) c[std::to_string(n)] = a;
          return {{"kind", "polar_lipschitz"}, {"coeffs", c}};
        } else {
          return {{"kind", "koch"}, {"level", k.level}, {"side", k.side}};
        }
      },
      spec.kind);
}

// 64-bit FNV-1a over the canonical JSON text of the spec.
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string curve_id(const CurveSpec& spec) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(curve_to_json(spec).dump())));
  return buf;
}

// ---------------------------------------------------------------------------
// Nearest-segment queries over a polyline (bounding-volume hierarchy).

class SegmentTree {
 public:
  struct Hit {
    double distance = std::numeric_limits<double>::infinity();
    cplx foot{};
    std::size_t segment = 0;
    double param = 0.0;
  };

  SegmentTree() = default;
  SegmentTree(std::vector<cplx> points, bool closed) : p_(std::move(points)), closed_(closed) {
    const std::size_t m = segment_count();
    if (m == 0) return;
    order_.resize(m);
    for (std::size_t i = 0; i < m; ++i) order_[i] = static_cast<std::uint32_t>(i);
    nodes_.reserve(2 * m / kLeaf + 2);
    build(0, static_cast<std::uint32_t>(m));
  }

  // Unconnected segments (p[2i], p[2i+1]).
  static SegmentTree from_pairs(std::vector<cplx> endpoints) {
    SegmentTree t;
    t.p_ = std::move(endpoints);
    t.pairs_ = true;
    t.closed_ = false;
    const std::size_t m = t.segment_count();
    if (m == 0) return t;
    t.order_.resize(m);
    for (std::size_t i = 0; i < m; ++i) t.order_[i] = static_cast<std::uint32_t>(i);
    t.nodes_.reserve(2 * m / kLeaf + 2);
    t.build(0, static_cast<std::uint32_t>(m));
    return t;
  }

  std::size_t segment_count() const {
    if (pairs_) return p_.size() / 2;
    if (p_.size() < 2) return 0;
    return closed_ ? p_.size() : p_.size() - 1;
  }
  const std::vector<cplx>& points() const { return p_; }
  bool closed() const { return closed_; }
  cplx seg_a(std::size_t i) const { return pairs_ ? p_[2 * i] : p_[i]; }
  cplx seg_b(std::size_t i) const { return pairs_ ? p_[2 * i + 1] : p_[(i + 1) % p_.size()]; }

  Hit nearest(cplx z) const {
    Hit best;
    if (nodes_.empty()) return best;
    std::uint32_t stack[64];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
      const Node& nd = nodes_[stack[--top]];
      if (box_distance(nd, z) >= best.distance) continue;
      if (nd.leaf) {
        for (std::uint32_t k = nd.begin; k < nd.end; ++k) {
          const std::uint32_t s = order_[k];
          double t;
          cplx f;
          const double d = point_segment(z, seg_a(s), seg_b(s), t, f);
          if (d < best.distance || (d == best.distance && s < best.segment)) best = Hit{d, f, s, t};
        }
      } else {
        const double dl = box_distance(nodes_[nd.left], z), dr = box_distance(nodes_[nd.right], z);
        if (dl < dr) {
          stack[top++] = nd.right;
          stack[top++] = nd.left;
        } else {
          stack[top++] = nd.left;
          stack[top++] = nd.right;
        }
      }
    }
    return best;
  }

  // True when some segment lies within distance r of z.
  bool within(cplx z, double r) const {
    if (nodes_.empty()) return false;
    std::uint32_t stack[64];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
      const Node& nd = nodes_[stack[--top]];
      if (box_distance(nd, z) > r) continue;
      if (nd.leaf) {
        for (std::uint32_t k = nd.begin; k < nd.end; ++k) {
          double t;
          cplx f;
          if (point_segment(z, seg_a(order_[k]), seg_b(order_[k]), t, f) <= r) return true;
        }
      } else {
        stack[top++] = nd.left;
        stack[top++] = nd.right;
      }
    }
    return false;
  }

  // Positive inside a counterclockwise closed polyline; uses angle-weighted pseudonormals at vertices.
  double signed_distance(cplx z) const {
    const Hit h = nearest(z);
    if (!closed_) return h.distance;
    const std::size_t n = p_.size();
    const cplx a = seg_a(h.segment), b = seg_b(h.segment);
    double side;
    if (h.param > 1e-12 && h.param < 1.0 - 1e-12) {
      side = detail::orient(a, b, z);
    } else {
      const std::size_t v = h.param <= 1e-12 ? h.segment : (h.segment + 1) % n;
      const cplx e_in = p_[v] - p_[(v + n - 1) % n], e_out = p_[(v + 1) % n] - p_[v];
      const cplx normal = I * e_in / std::abs(e_in) + I * e_out / std::abs(e_out);
      side = std::real(std::conj(normal) * (z - p_[v]));
      if (side == 0.0) side = detail::orient(a, b, z);
    }
    return side >= 0.0 ? h.distance : -h.distance;
  }

  static double point_segment(cplx z, cplx a, cplx b, double& t, cplx& foot) {
    const cplx d = b - a;
    const double len2 = std::norm(d);
    t = len2 > 0.0 ? std::clamp(std::real(std::conj(d) * (z - a)) / len2, 0.0, 1.0) : 0.0;
    foot = a + t * d;
    return std::abs(z - foot);
  }

 private:
  static constexpr std::uint32_t kLeaf = 8;
  struct Node {
    double x0, y0, x1, y1;
    std::uint32_t left = 0, right = 0, begin = 0, end = 0;
    bool leaf = false;
  };

  static double box_distance(const Node& nd, cplx z) {
    const double dx = std::max({nd.x0 - z.real(), 0.0, z.real() - nd.x1});
    const double dy = std::max({nd.y0 - z.imag(), 0.0, z.imag() - nd.y1});
    return std::hypot(dx, dy);
  }

  std::uint32_t build(std::uint32_t begin, std::uint32_t end) {
    Node nd;
    nd.x0 = nd.y0 = std::numeric_limits<double>::infinity();
    nd.x1 = nd.y1 = -std::numeric_limits<double>::infinity();
    for (std::uint32_t k = begin; k < end; ++k) {
      for (cplx q : {seg_a(order_[k]), seg_b(order_[k])}) {
        nd.x0 = std::min(nd.x0, q.real());
        nd.x1 = std::max(nd.x1, q.real());
        nd.y0 = std::min(nd.y0, q.imag());
        nd.y1 = std::max(nd.y1, q.imag());
      }
    }
    const std::uint32_t id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(nd);
    if (end - begin <= kLeaf) {
      nodes_[id].leaf = true;
      nodes_[id].begin = begin;
      nodes_[id].end = end;
      return id;
    }
    const bool by_x = (nd.x1 - nd.x0) >= (nd.y1 - nd.y0);
    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::uint32_t u, std::uint32_t v) {
                       const cplx mu = seg_a(u) + seg_b(u), mv = seg_a(v) + seg_b(v);
                       const double a = by_x ? mu.real() : mu.imag(), b = by_x ? mv.real() : mv.imag();
                       return a < b || (a == b && u < v);
                     });
    const std::uint32_t l = build(begin, mid);
    const std::uint32_t r = build(mid, end);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  std::vector<cplx> p_;
  bool closed_ = true;
  bool pairs_ = false;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
};

// ---------------------------------------------------------------------------
// Arc-length geometry

class ArcGeometry {
 public:
  virtual ~ArcGeometry() = default;
  virtual double length() const = 0;
  // Point and unit tangent at arclength s (taken modulo the length).
  virtual cplx point(double s) const = 0;
  virtual cplx tangent(double s) const = 0;
  virtual const std::vector<cplx>& vertices() const { return empty_; }
  virtual const std::vector<double>& vertex_arclengths() const { return empty_s_; }

 protected:
  double reduce(double s) const {
    const double L = length();
    s = std::fmod(s, L);
    return s < 0.0 ? s + L : s;
  }

 private:
  inline static const std::vector<cplx> empty_{};
  inline static const std::vector<double> empty_s_{};
};

class CircleArc : public ArcGeometry {
 public:
  CircleArc(double radius, cplx center) : r_(radius), c_(center) {}
  double length() const override { return two_pi * r_; }
  cplx point(double s) const override { return c_ + r_ * std::polar(1.0, s / r_); }
  cplx tangent(double s) const override { return I * std::polar(1.0, s / r_); }

 private:
  double r_;
  cplx c_;
};

// Smooth 2pi-periodic parametrization; the arclength function is integrated spectrally
// from the speed and inverted by Newton's method.
class SmoothArc : public ArcGeometry {
 public:
  using Param = std::function<cplx(double)>;

  SmoothArc(Param gamma, Param dgamma) : g_(std::move(gamma)), dg_(std::move(dgamma)) {
    for (std::size_t M = 4096;; M *= 2) {
      std::vector<cplx> sp(M);
      for (std::size_t j = 0; j < M; ++j) sp[j] = std::abs(dg_(two_pi * j / M));
      fft(sp);
      for (auto& c : sp) c /= static_cast<double>(M);
      const double c0 = sp[0].real();
      double tail = 0.0;
      for (std::size_t n = M / 4; n < M / 2; ++n) tail = std::max(tail, std::abs(sp[n]));
      if (tail < 1e-15 * c0 || M >= (1u << 18)) {
        c0_ = c0;
        std::size_t K = 0;
        for (std::size_t n = 1; n < M / 2; ++n)
          if (std::abs(sp[n]) > 1e-17 * c0) K = n;
        modes_.assign(sp.begin() + 1, sp.begin() + 1 + K);
        break;
      }
    }
    L_ = two_pi * c0_;
  }

  double length() const override { return L_; }

  // Arclength from theta = 0 to theta, for theta in R.
  double s_of_theta(double th) const {
    double s = c0_ * th;
    const cplx e = std::polar(1.0, th);
    cplx p = e;
    for (std::size_t k = 0; k < modes_.size(); ++k) {
      const double n = static_cast<double>(k + 1);
      s += 2.0 * std::real(modes_[k] / (I * n) * (p - 1.0));
      p *= e;
    }
    return s;
  }

  double theta_of_s(double s) const {
    const double k = std::floor(s / L_);
    const double sr = s - k * L_;
    double th = two_pi * sr / L_;
    for (int it = 0; it < 60; ++it) {
      const double d = (s_of_theta(th) - sr) / std::abs(dg_(th));
      th -= d;
      if (std::abs(d) < 1e-15) break;
    }
    return th + two_pi * k;
  }

  cplx point(double s) const override { return g_(theta_of_s(s)); }
  cplx tangent(double s) const override {
    const cplx d = dg_(theta_of_s(s));
    return d / std::abs(d);
  }
  cplx gamma(double th) const { return g_(th); }
  cplx dgamma(double th) const { return dg_(th); }

 private:
  Param g_, dg_;
  double c0_ = 0.0, L_ = 0.0;
  std::vector<cplx> modes_;
};

// Closed polyline parametrized by arclength from its first vertex.
class PolylineArc : public ArcGeometry {
 public:
  explicit PolylineArc(std::vector<cplx> v) : v_(std::move(v)) {
    cum_.resize(v_.size() + 1, 0.0);
    for (std::size_t i = 0; i < v_.size(); ++i) cum_[i + 1] = cum_[i] + std::abs(v_[(i + 1) % v_.size()] - v_[i]);
    vs_.assign(cum_.begin(), cum_.end() - 1);
  }
  double length() const override { return cum_.back(); }
  cplx point(double s) const override {
    s = reduce(s);
    const std::size_t i = edge(s);
    const double len = cum_[i + 1] - cum_[i];
    const double t = len > 0.0 ? (s - cum_[i]) / len : 0.0;
    return v_[i] + t * (v_[(i + 1) % v_.size()] - v_[i]);
  }
  cplx tangent(double s) const override {
    const std::size_t i = edge(reduce(s));
    const cplx d = v_[(i + 1) % v_.size()] - v_[i];
    return d / std::abs(d);
  }
  const std::vector<cplx>& vertices() const override { return v_; }
  const std::vector<double>& vertex_arclengths() const override { return vs_; }

 private:
  std::size_t edge(double s) const {
    auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
    std::size_t i = static_cast<std::size_t>(it - cum_.begin());
    i = i == 0 ? 0 : i - 1;
    return std::min(i, v_.size() - 1);
  }
  std::vector<cplx> v_;
  std::vector<double> cum_, vs_;
};

// ---------------------------------------------------------------------------
// Sampled curves

struct SampledCurve {
  std::vector<cplx> nodes;
  std::vector<cplx> tangents;
  std::vector<double> node_weights;
  double total_length = 0.0;
  // Node indices that coincide with corners, and the arclength of every corner.
  std::vector<std::size_t> corner_indices;
  std::vector<double> corner_arclengths;
  cplx anchor{};
  std::shared_ptr<const ArcGeometry> geometry;
  std::shared_ptr<const SegmentTree> tree;
  std::optional<CurveSpec> spec;

  std::size_t size() const { return nodes.size(); }
  double spacing() const { return total_length / static_cast<double>(nodes.size()); }
  double arclength(std::size_t k) const { return spacing() * static_cast<double>(k); }
  bool straight_sided() const { return spec && spec->straight_sided(); }
  const std::vector<cplx>& vertices() const { return geometry->vertices(); }

  double distance(cplx z) const {
    if (spec && spec->is_circle()) {
      const auto& c = std::get<CircleSpec>(spec->kind);
      return std::abs(c.radius - std::abs(z - c.center));
    }
    return tree->nearest(z).distance;
  }
  // Positive in the interior domain.
  double signed_distance(cplx z) const {
    if (spec && spec->is_circle()) {
      const auto& c = std::get<CircleSpec>(spec->kind);
      return c.radius - std::abs(z - c.center);
    }
    return tree->signed_distance(z);
  }
  bool inside(cplx z) const { return signed_distance(z) > 0.0; }
};

inline double winding_number(std::span<const cplx> poly, cplx z) {
  double total = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i)
    total += std::arg((poly[(i + 1) % poly.size()] - z) / (poly[i] - z));
  return total / two_pi;
}

namespace detail {

inline cplx polygon_centroid(std::span<const cplx> p) {
  double a = 0.0;
  cplx c{};
  for (std::size_t i = 0; i < p.size(); ++i) {
    const cplx u = p[i], v = p[(i + 1) % p.size()];
    const double cr = u.real() * v.imag() - v.real() * u.imag();
    a += cr;
    c += (u + v) * cr;
  }
  return c / (3.0 * a);
}

// Area centroid when comfortably inside, else the grid point farthest from the curve.
inline cplx interior_anchor(const SegmentTree& tree) {
  const auto& pts = tree.points();
  const cplx c = polygon_centroid(pts);
  double x0 = pts[0].real(), x1 = x0, y0 = pts[0].imag(), y1 = y0;
  for (auto z : pts) {
    x0 = std::min(x0, z.real());
    x1 = std::max(x1, z.real());
    y0 = std::min(y0, z.imag());
    y1 = std::max(y1, z.imag());
  }
  const double ext = std::max(x1 - x0, y1 - y0);
  double best = tree.signed_distance(c);
  if (best > 0.05 * ext) return c;
  cplx arg = c;
  const int G = 64;
  for (int i = 0; i < G; ++i)
    for (int j = 0; j < G; ++j) {
      const cplx z{x0 + (x1 - x0) * (i + 0.5) / G, y0 + (y1 - y0) * (j + 0.5) / G};
      const double d = tree.signed_distance(z);
      if (d > best) best = d, arg = z;
    }
  if (!(best > 0.0)) fail(ErrorKind::InvalidCurve, "no interior point found");
  return arg;
}

inline SampledCurve sample_geometry(std::shared_ptr<const ArcGeometry> g, std::size_t N, std::optional<CurveSpec> spec,
                                    const std::vector<double>& corner_s) {
  if (N < 16 || N % 2 != 0) fail(ErrorKind::InvalidInput, "node count must be even and at least 16");
  SampledCurve c;
  c.total_length = g->length();
  const double h = c.total_length / static_cast<double>(N);
  c.nodes.resize(N);
  c.tangents.resize(N);
  parallel_for(N, [&](std::size_t k) {
    const double s = h * static_cast<double>(k);
    c.nodes[k] = g->point(s);
    c.tangents[k] = g->tangent(s);
  });
  c.node_weights.assign(N, h);
  for (double a : corner_s) {
    c.corner_arclengths.push_back(a);
    const double q = a / h;
    if (std::abs(q - std::round(q)) < 1e-9) c.corner_indices.push_back(static_cast<std::size_t>(std::llround(q)) % N);
  }
  c.geometry = g;
  c.spec = std::move(spec);
  c.tree = std::make_shared<SegmentTree>(g->vertices().empty() ? c.nodes : g->vertices(), true);
  if (c.spec && c.spec->is_circle()) {
    c.anchor = std::get<CircleSpec>(c.spec->kind).center;
  } else if (c.spec && !c.spec->straight_sided()) {
    c.anchor = 0.0;
  } else {
    c.anchor = interior_anchor(*c.tree);
  }
  for (std::size_t k = 0; k < N; ++k) {
    if (std::abs(c.nodes[(k + 1) % N] - c.nodes[k]) > h * 1.05)
      fail(ErrorKind::InvalidCurve, "node spacing exceeds arclength step");
    if (std::abs(std::abs(c.tangents[k]) - 1.0) > 1e-12) fail(ErrorKind::InvalidCurve, "tangent not unit");
  }
  if (std::abs(winding_number(c.nodes, c.anchor) - 1.0) > 1e-6)
    fail(ErrorKind::InvalidCurve, "node polygon does not wind once around the interior");
  return c;
}

}  // namespace detail

inline std::shared_ptr<const ArcGeometry> make_geometry(const CurveSpec& spec) {
  return std::visit(
      [&](const auto& k) -> std::shared_ptr<const ArcGeometry> {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, CircleSpec>) {
          return std::make_shared<CircleArc>(k.radius, k.center);
        } else if constexpr (std::is_same_v<K, EllipseSpec>) {
          const double a = k.a, b = k.b;
          return std::make_shared<SmoothArc>([a, b](double t) { return cplx{a * std::cos(t), b * std::sin(t)}; },
                                             [a, b](double t) { return cplx{-a * std::sin(t), b * std::cos(t)}; });
        } else if constexpr (std::is_same_v<K, PolarLipschitzSpec>) {
          const PolarLipschitzSpec p = k;
          return std::make_shared<SmoothArc>(
              [p](double t) { return p.radius(t) * std::polar(1.0, t); },
              [p](double t) { return cplx{p.radius_derivative(t), p.radius(t)} * std::polar(1.0, t); });
        } else {
          return std::make_shared<PolylineArc>(oriented_vertices(CurveSpec{k}));
        }
      },
      spec.kind);
}

inline SampledCurve build_curve(const CurveSpec& spec, std::size_t N) {
  validate(spec);
  auto g = make_geometry(spec);
  return detail::sample_geometry(g, N, spec, g->vertex_arclengths());
}

// Same curve, different node count.
inline SampledCurve resample(const SampledCurve& c, std::size_t N) {
  return detail::sample_geometry(c.geometry, N, c.spec, c.corner_arclengths);
}

// Uniform arclength nodes from a closed polyline: cumulative chord length inverted
// piecewise linearly. Vertices turning by more than 20 degrees are kept as corners.
inline SampledCurve reparametrize_arclength(std::vector<cplx> samples, std::size_t N = 0) {
  if (samples.size() > 1 && samples.front() == samples.back()) samples.pop_back();
  if (samples.size() < 3) fail(ErrorKind::DegeneratePath, "need at least 3 distinct samples");
  double scale = 0.0;
  for (auto z : samples) scale = std::max(scale, std::abs(z - samples[0]));
  for (std::size_t i = 0; i < samples.size(); ++i)
    if (std::abs(samples[(i + 1) % samples.size()] - samples[i]) <= 1e-14 * scale)
      fail(ErrorKind::DegeneratePath, "repeated consecutive points at index " + std::to_string(i));
  if (signed_area(samples) < 0.0) std::reverse(samples.begin() + 1, samples.end());
  if (N == 0) N = samples.size() + (samples.size() % 2);
  auto g = std::make_shared<PolylineArc>(samples);
  std::vector<double> corners;
  const std::size_t n = samples.size();
  for (std::size_t i = 0; i < n; ++i) {
    const cplx a = samples[(i + n - 1) % n], b = samples[i], c = samples[(i + 1) % n];
    if (std::abs(std::arg((c - b) / (b - a))) > pi / 9.0) corners.push_back(g->vertex_arclengths()[i]);
  }
  return detail::sample_geometry(g, N, std::nullopt, corners);
}

// ---------------------------------------------------------------------------
// Geometric constants

inline double chord_arc_constant(const SampledCurve& c) {
  const std::size_t N = c.size();
  const double h = c.spacing();
  std::vector<double> row(N, 0.0);
  parallel_for(N, [&](std::size_t k) {
    double m = 0.0;
    for (std::size_t j = k + 1; j < N; ++j) {
      const std::size_t d = std::min(j - k, N - (j - k));
      m = std::max(m, h * static_cast<double>(d) / std::abs(c.nodes[j] - c.nodes[k]));
    }
    row[k] = m;
  });
  return std::max(1.0, *std::max_element(row.begin(), row.end()));
}

inline double distance_to_curve(const SampledCurve& c, cplx z) { return c.distance(z); }

inline double diameter(std::span<const cplx> pts) {
  // Convex hull by monotone chain, then brute force on hull points.
  std::vector<cplx> p(pts.begin(), pts.end());
  std::sort(p.begin(), p.end(), [](cplx a, cplx b) { return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag()); });
  std::vector<cplx> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && detail::orient(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && detail::orient(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  h.resize(k > 1 ? k - 1 : k);
  double d = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i)
    for (std::size_t j = i + 1; j < h.size(); ++j) d = std::max(d, std::abs(h[i] - h[j]));
  return d;
}

inline double curve_diameter(const SampledCurve& c) {
  if (c.spec && c.spec->is_circle()) return 2.0 * std::get<CircleSpec>(c.spec->kind).radius;
  if (c.straight_sided()) return diameter(c.vertices());
  return diameter(c.nodes);
}

inline double lipschitz_constant(const CurveSpec& spec) {
  const auto* p = std::get_if<PolarLipschitzSpec>(&spec.kind);
  if (!p) fail(ErrorKind::InvalidCurve, "lipschitz constant needs a polar_lipschitz curve");
  const int G = 4096;
  std::vector<double> v(G);
  for (int j = 0; j < G; ++j) v[j] = std::abs(p->radius_derivative(two_pi * j / G));
  double best = *std::max_element(v.begin(), v.end());
  // Refine every grid local maximum within 1% of the grid max by golden-section search.
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int j = 0; j < G; ++j) {
    if (v[j] < 0.99 * best || v[j] < v[(j + 1) % G] || v[j] < v[(j + G - 1) % G]) continue;
    double a = two_pi * (j - 1) / G, b = two_pi * (j + 1) / G;
    auto f = [&](double t) { return std::abs(p->radius_derivative(t)); };
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a), f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 80; ++it) {
      if (f1 > f2) {
        b = x2, x2 = x1, f2 = f1, x1 = b - gr * (b - a), f1 = f(x1);
      } else {
        a = x1, x1 = x2, f1 = f2, x2 = a + gr * (b - a), f2 = f(x2);
      }
    }
    best = std::max({best, f1, f2});
  }
  return best;
}

struct GeometryConstants {
  double chord_arc_K = 1.0;
  double diameter = 0.0;
  std::optional<double> lipschitz_M;
};

inline GeometryConstants geometry_constants(const SampledCurve& c) {
  GeometryConstants g;
  g.chord_arc_K = chord_arc_constant(c);
  g.diameter = curve_diameter(c);
  if (c.spec && c.spec->is_polar()) g.lipschitz_M = lipschitz_constant(*c.spec);
  return g;
}

}  // namespace plemelj
