#pragma once

#include <gtest/gtest.h>

#include "plemelj/plemelj.hpp"

namespace plemelj::testing {

inline CurveSpec unit_circle() { return CurveSpec{CircleSpec{}}; }
inline CurveSpec square() { return CurveSpec{PolygonSpec{{{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}}}; }
inline CurveSpec ellipse21() { return CurveSpec{EllipseSpec{2.0, 1.0}}; }
inline CurveSpec polar(std::map<int, double> c) { return CurveSpec{PolarLipschitzSpec{std::move(c)}}; }
inline CurveSpec koch(int level) { return CurveSpec{KochSpec{level, 1.0}}; }

inline FunctionSpec poly(std::vector<cplx> c) {
  FunctionSpec f;
  f.kind = FunctionSpec::Kind::poly;
  f.coeffs = std::move(c);
  return f;
}
inline FunctionSpec pole(cplx a) {
  FunctionSpec f;
  f.kind = FunctionSpec::Kind::pole;
  f.point = a;
  return f;
}
inline FunctionSpec bump(cplx c, double w) {
  FunctionSpec f;
  f.kind = FunctionSpec::Kind::bump;
  f.point = c;
  f.width = w;
  return f;
}
inline FunctionSpec mode(int n, cplx c = 1.0) {
  FunctionSpec f;
  f.kind = FunctionSpec::Kind::fourier;
  f.modes[n] = c;
  return f;
}

inline double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

#define EXPECT_ERROR_KIND(stmt, k)                                    \
  do {                                                                \
    try {                                                             \
      stmt;                                                           \
      ADD_FAILURE() << "expected " << ::plemelj::to_string(k);        \
    } catch (const ::plemelj::Error& e) {                             \
      EXPECT_EQ(e.kind(), k) << e.what();                             \
    }                                                                 \
  } while (0)

}  // namespace plemelj::testing
