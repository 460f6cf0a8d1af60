#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "plemelj/core.hpp"
#include "plemelj/geometry.hpp"

namespace plemelj {

// Test functions used by experiments. Fourier modes live on the arclength circle
// (f(lambda(e^{it})) = sum c_n e^{int}); the others are functions of z restricted to the curve.
struct FunctionSpec {
  enum class Kind { fourier, poly, pole, bump };
  Kind kind = Kind::poly;
  std::map<int, cplx> modes;   // fourier
  std::vector<cplx> coeffs;    // poly: sum coeffs[k] z^k
  cplx point{};                // pole location or bump center
  double width = 1.0;          // bump

  std::string label() const {
    switch (kind) {
      case Kind::fourier: return "fourier";
      case Kind::poly: return "poly";
      case Kind::pole: return "pole";
      case Kind::bump: return "bump";
    }
    return "?";
  }

  // Holomorphic in the interior of the curve (poles must sit outside).
  bool holomorphic_inside(const SampledCurve& c) const {
    if (kind == Kind::poly) return true;
    if (kind == Kind::pole) return c.signed_distance(point) < 0.0;
    return false;
  }

  cplx value(cplx z) const {
    switch (kind) {
      case Kind::poly: {
        cplx acc{};
        for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * z + coeffs[k];
        return acc;
      }
      case Kind::pole: return 1.0 / (z - point);
      case Kind::bump: return std::exp(-std::norm(z - point) / (width * width));
      case Kind::fourier: break;
    }
    fail(ErrorKind::InvalidInput, "Fourier test functions are defined through the arclength parameter");
  }

  cplx derivative(cplx z) const {
    switch (kind) {
      case Kind::poly: {
        cplx acc{};
        for (std::size_t k = coeffs.size(); k-- > 1;) acc = acc * z + static_cast<double>(k) * coeffs[k];
        return acc;
      }
      case Kind::pole: return -1.0 / ((z - point) * (z - point));
      default: break;
    }
    fail(ErrorKind::InvalidInput, "complex derivative requested for a non-holomorphic function");
  }

  // Value at arclength s on a curve of length L.
  cplx at_arclength(double s, double L) const {
    cplx acc{};
    for (const auto& [n, c] : modes) acc += c * std::polar(1.0, two_pi * n * s / L);
    return acc;
  }

  std::vector<cplx> on_curve(const SampledCurve& c) const {
    std::vector<cplx> v(c.size());
    for (std::size_t k = 0; k < c.size(); ++k)
      v[k] = kind == Kind::fourier ? at_arclength(c.arclength(k), c.total_length) : value(c.nodes[k]);
    return v;
  }
};

namespace detail {
inline cplx json_complex(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  fail(ErrorKind::InvalidInput, "expected a number or a [re, im] pair");
}
}  // namespace detail

// {"fourier": {"1": 1.0, "-2": [0, 1]}}
// {"entire": "poly", "coeffs": [c0, c1, ...]}
// {"pole": [x, y]}                 F(z) = 1/(z - a)
// {"bump": [x, y], "width": w}     exp(-|z - c|^2 / w^2)
inline FunctionSpec function_from_json(const nlohmann::json& j) {
  FunctionSpec f;
  try {
    if (j.contains("fourier")) {
      f.kind = FunctionSpec::Kind::fourier;
      for (const auto& [k, v] : j.at("fourier").items()) f.modes[std::stoi(k)] = detail::json_complex(v);
      if (f.modes.empty()) fail(ErrorKind::InvalidInput, "fourier function without modes");
    } else if (j.contains("entire")) {
      if (j.at("entire").get<std::string>() != "poly") fail(ErrorKind::InvalidInput, "only polynomial entire functions");
      f.kind = FunctionSpec::Kind::poly;
      for (const auto& c : j.at("coeffs")) f.coeffs.push_back(detail::json_complex(c));
      if (f.coeffs.empty()) fail(ErrorKind::InvalidInput, "polynomial without coefficients");
    } else if (j.contains("pole")) {
      f.kind = FunctionSpec::Kind::pole;
      f.point = detail::json_complex(j.at("pole"));
    } else if (j.contains("bump")) {
      f.kind = FunctionSpec::Kind::bump;
      const auto& b = j.at("bump");
      if (b.is_object()) {
        f.point = detail::json_complex(b.at("center"));
        f.width = b.at("width").get<double>();
      } else {
        f.point = detail::json_complex(b);
        f.width = j.at("width").get<double>();
      }
      if (!(f.width > 0.0)) fail(ErrorKind::InvalidInput, "bump width must be positive");
    } else {
      fail(ErrorKind::InvalidInput, "unknown function spec");
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidInput, std::string("function spec: ") + e.what());
  } catch (const std::invalid_argument&) {
    fail(ErrorKind::InvalidInput, "function spec: bad mode index");
  }
  return f;
}

}  // namespace plemelj
