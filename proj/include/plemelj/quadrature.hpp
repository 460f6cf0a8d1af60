#pragma once

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "plemelj/core.hpp"

namespace plemelj {

struct QuadratureRule {
  std::vector<double> x, w;
  std::size_t size() const { return x.size(); }
};

inline double beta_function(double a, double b) {
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

namespace detail {

inline QuadratureRule make_gauss_legendre(int n) {
  QuadratureRule r;
  r.x.resize(n);
  r.w.resize(n);
  // Legendre value and derivative by the three-term recurrence.
  auto legendre = [n](double x, double& dp) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    return p1;
  };
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double dx = legendre(x, dp) / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(x, dp);
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  if (n % 2 == 1) r.x[n / 2] = 0.0;
  return r;
}

// Golub-Welsch for the weight (1-x)^a (1+x)^b on [-1,1].
inline QuadratureRule make_gauss_jacobi(int n, double a, double b) {
  Eigen::VectorXd diag(n), sub(std::max(n - 1, 1));
  const double ab = a + b;
  for (int k = 0; k < n; ++k) {
    if (k == 0) {
      diag(k) = (b - a) / (ab + 2.0);
    } else {
      const double t = 2.0 * k + ab;
      diag(k) = (b * b - a * a) / (t * (t + 2.0));
    }
  }
  for (int k = 1; k < n; ++k) {
    double beta;
    if (k == 1) {
      beta = 4.0 * (1.0 + a) * (1.0 + b) / (sqr(2.0 + ab) * (3.0 + ab));
    } else {
      const double t = 2.0 * k + ab;
      beta = 4.0 * k * (k + a) * (k + b) * (k + ab) / (t * t * (t + 1.0) * (t - 1.0));
    }
    sub(k - 1) = std::sqrt(beta);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub.head(std::max(n - 1, 0)), Eigen::ComputeEigenvectors);
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                              std::lgamma(ab + 2.0));
  QuadratureRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    r.x[i] = es.eigenvalues()(i);
    r.w[i] = mu0 * sqr(es.eigenvectors()(0, i));
  }
  return r;
}

}  // namespace detail

inline const QuadratureRule& gauss_legendre(int n) {
  static std::mutex m;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(m);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, detail::make_gauss_legendre(n)).first;
  return it->second;
}

inline const QuadratureRule& gauss_jacobi(int n, double a, double b) {
  if (a <= -1.0 || b <= -1.0) fail(ErrorKind::InvalidParameter, "Jacobi exponents must exceed -1");
  static std::mutex m;
  static std::map<std::tuple<int, double, double>, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(m);
  auto key = std::make_tuple(n, a, b);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, detail::make_gauss_jacobi(n, a, b)).first;
  return it->second;
}

// Gauss-Legendre rule mapped to [lo, hi].
inline QuadratureRule mapped_legendre(int n, double lo, double hi) {
  const auto& g = gauss_legendre(n);
  QuadratureRule r;
  r.x.resize(n);
  r.w.resize(n);
  const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
  for (int i = 0; i < n; ++i) {
    r.x[i] = c + h * g.x[i];
    r.w[i] = h * g.w[i];
  }
  return r;
}

// Nodes and weights for integral_{lo}^{hi} f(x) (hi - x)^q dx, with the weight folded in.
// Graded panels toward hi; the last panel uses Gauss-Jacobi.
inline QuadratureRule graded_endpoint_rule(double lo, double hi, double q, int levels, int order) {
  QuadratureRule r;
  const double L = hi - lo;
  std::vector<double> breaks{lo};
  for (int j = 1; j <= levels; ++j) breaks.push_back(hi - L * std::ldexp(1.0, -j));
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    auto m = mapped_legendre(order, breaks[p], breaks[p + 1]);
    for (int i = 0; i < order; ++i) {
      r.x.push_back(m.x[i]);
      r.w.push_back(m.w[i] * std::pow(hi - m.x[i], q));
    }
  }
  const double a = breaks.back();
  const double h = 0.5 * (hi - a);
  const auto& gj = gauss_jacobi(order, q, 0.0);
  for (int i = 0; i < order; ++i) {
    r.x.push_back(a + h * (gj.x[i] + 1.0));
    r.w.push_back(gj.w[i] * std::pow(h, q + 1.0));
  }
  return r;
}

}  // namespace plemelj
