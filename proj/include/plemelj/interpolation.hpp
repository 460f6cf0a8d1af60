#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "plemelj/core.hpp"

namespace plemelj {

// Periodic monotone cubic (Fritsch-Carlson) interpolant of y(x) where x is strictly
// increasing on one period [x0, x0 + period) and y(x + period) = y(x) + jump.
class PeriodicPchip {
 public:
  PeriodicPchip() = default;
  PeriodicPchip(std::vector<double> x, std::vector<double> y, double period, double jump = 0.0)
      : x_(std::move(x)), y_(std::move(y)), period_(period), jump_(jump) {
    const std::size_t n = x_.size();
    if (n < 3 || y_.size() != n) fail(ErrorKind::InvalidInput, "PeriodicPchip needs >= 3 matching samples");
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (!(x_[i + 1] > x_[i])) fail(ErrorKind::InvalidInput, "PeriodicPchip abscissae not increasing");
    if (!(x_[0] + period_ > x_[n - 1])) fail(ErrorKind::InvalidInput, "PeriodicPchip period too short");
    std::vector<double> h(n), delta(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double xn = (i + 1 < n) ? x_[i + 1] : x_[0] + period_;
      const double yn = (i + 1 < n) ? y_[i + 1] : y_[0] + jump_;
      h[i] = xn - x_[i];
      delta[i] = (yn - y_[i]) / h[i];
    }
    d_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t im = (i + n - 1) % n;
      const double a = delta[im], b = delta[i];
      if (a * b <= 0.0) {
        d_[i] = 0.0;
      } else {
        const double w1 = 2.0 * h[i] + h[im], w2 = h[i] + 2.0 * h[im];
        d_[i] = (w1 + w2) / (w1 / a + w2 / b);
      }
    }
  }

  double operator()(double x) const {
    const std::size_t n = x_.size();
    double shift = std::floor((x - x_[0]) / period_);
    double xr = x - shift * period_;
    double offset = shift * jump_;
    std::size_t i = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), xr) - x_.begin());
    i = (i == 0) ? 0 : i - 1;
    const double x0 = x_[i];
    const double x1 = (i + 1 < n) ? x_[i + 1] : x_[0] + period_;
    const double y0 = y_[i];
    const double y1 = (i + 1 < n) ? y_[i + 1] : y_[0] + jump_;
    const double d0 = d_[i], d1 = d_[(i + 1) % n];
    const double h = x1 - x0, t = (xr - x0) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t, h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return offset + h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
  }

 private:
  std::vector<double> x_, y_, d_;
  double period_ = two_pi, jump_ = 0.0;
};

// Complex-valued periodic data on a uniform grid, real and imaginary parts
// interpolated separately by monotone cubics.
class PeriodicPchipComplex {
 public:
  PeriodicPchipComplex() = default;
  PeriodicPchipComplex(const std::vector<double>& x, const std::vector<cplx>& y, double period) {
    std::vector<double> re(y.size()), im(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) re[i] = y[i].real(), im[i] = y[i].imag();
    re_ = PeriodicPchip(x, re, period);
    im_ = PeriodicPchip(x, im, period);
  }
  cplx operator()(double x) const { return {re_(x), im_(x)}; }

 private:
  PeriodicPchip re_, im_;
};

// Barycentric Lagrange interpolation on arbitrary distinct nodes.
inline std::vector<double> barycentric_weights(const std::vector<double>& x) {
  std::vector<double> w(x.size(), 1.0);
  for (std::size_t j = 0; j < x.size(); ++j)
    for (std::size_t k = 0; k < x.size(); ++k)
      if (k != j) w[j] /= (x[j] - x[k]);
  return w;
}

template <class T>
T barycentric_eval(const std::vector<double>& x, const std::vector<double>& w, const std::vector<T>& f, double t) {
  T num{};
  double den = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double d = t - x[j];
    if (d == 0.0) return f[j];
    const double c = w[j] / d;
    num += c * f[j];
    den += c;
  }
  return num / den;
}

}  // namespace plemelj
