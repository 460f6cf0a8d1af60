#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "plemelj/core.hpp"
#include "plemelj/fft.hpp"
#include "plemelj/quadrature.hpp"

namespace plemelj {

// Coefficients c(n) for n in [-N/2, N/2), stored in that order.
class FourierSeries {
 public:
  FourierSeries() = default;
  explicit FourierSeries(std::size_t N) : c_(N) {
    if (N % 2 != 0) fail(ErrorKind::InvalidInput, "Fourier series length must be even");
  }

  std::size_t size() const { return c_.size(); }
  int min_mode() const { return -static_cast<int>(c_.size() / 2); }
  int max_mode() const { return static_cast<int>(c_.size() / 2) - 1; }
  bool has(int n) const { return n >= min_mode() && n <= max_mode(); }
  cplx operator[](int n) const { return has(n) ? c_[static_cast<std::size_t>(n - min_mode())] : cplx{}; }
  cplx& at(int n) {
    if (!has(n)) fail(ErrorKind::InvalidInput, "mode out of range");
    return c_[static_cast<std::size_t>(n - min_mode())];
  }
  const std::vector<cplx>& data() const { return c_; }

  // Samples at t_k = 2 pi k / N.
  std::vector<cplx> synthesize() const {
    const std::size_t N = c_.size();
    std::vector<cplx> v(N);
    for (int n = min_mode(); n <= max_mode(); ++n) v[static_cast<std::size_t>((n + static_cast<int>(N)) % static_cast<int>(N))] = (*this)[n];
    fft(v, true);
    return v;
  }

  cplx eval(double theta) const {
    cplx acc{};
    for (int n = min_mode(); n <= max_mode(); ++n) acc += (*this)[n] * std::polar(1.0, n * theta);
    return acc;
  }

  double l2_norm2() const {
    double s = 0.0;
    for (auto c : c_) s += std::norm(c);
    return s;
  }

 private:
  std::vector<cplx> c_;
};

inline FourierSeries analyze(std::span<const cplx> samples) {
  const std::size_t N = samples.size();
  if (N < 4 || N % 2 != 0) fail(ErrorKind::InvalidInput, "sample count must be even and at least 4");
  std::vector<cplx> v(samples.begin(), samples.end());
  fft(v);
  FourierSeries s(N);
  const int h = static_cast<int>(N / 2);
  for (int k = 0; k < static_cast<int>(N); ++k) s.at(k < h ? k : k - static_cast<int>(N)) = v[k] / static_cast<double>(N);
  return s;
}

inline FourierSeries analyze(const std::vector<cplx>& samples) { return analyze(std::span<const cplx>(samples)); }

inline double hs_norm_fourier(const FourierSeries& f, double s) {
  if (!(s >= 0.0 && s <= 1.0)) fail(ErrorKind::InvalidParameter, "s must lie in [0, 1]");
  double acc = 0.0;
  for (int n = f.min_mode(); n <= f.max_mode(); ++n)
    if (n != 0) acc += std::pow(std::abs(n), 2.0 * s) * std::norm(f[n]);
  return acc;
}

inline FourierSeries hilbert_transform(const FourierSeries& f) {
  FourierSeries g(f.size());
  for (int n = f.min_mode(); n <= f.max_mode(); ++n)
    if (n != 0) g.at(n) = (n > 0 ? -I : I) * f[n];
  return g;
}

enum class Side { interior, exterior };

inline cplx poisson_eval(const FourierSeries& f, double r, double theta, Side side) {
  if (side == Side::interior && !(r >= 0.0 && r < 1.0)) fail(ErrorKind::InvalidParameter, "interior radius must lie in [0, 1)");
  if (side == Side::exterior && !(r > 1.0)) fail(ErrorKind::InvalidParameter, "exterior radius must exceed 1");
  const double q = side == Side::interior ? r : 1.0 / r;
  cplx acc{};
  for (int n = f.min_mode(); n <= f.max_mode(); ++n) acc += f[n] * std::pow(q, std::abs(n)) * std::polar(1.0, n * theta);
  return acc;
}

struct SpectralWeights {
  double s = 0.5;
  // Indexed by |n| = 0..n_max; empty when not requested.
  std::vector<double> douglas_W;
  std::vector<double> disk_interior_w;
  std::vector<double> disk_exterior_w;
  std::vector<bool> exterior_divergent;
  int n_max() const {
    return static_cast<int>(std::max({douglas_W.size(), disk_interior_w.size(), disk_exterior_w.size()})) - 1;
  }
};

// Interior: integral over the disk of |grad z^n|^2 (1-|z|^2)^{1-2s}.
// Exterior: the same over |z| > 1 for z^{-n} with (|z|^2-1)^{1-2s}.
inline SpectralWeights disk_energy_weights(int n_max, double s) {
  if (!(s >= 0.0 && s < 1.0)) fail(ErrorKind::InvalidParameter, "s must lie in [0, 1)");
  SpectralWeights w;
  w.s = s;
  w.disk_interior_w.assign(n_max + 1, 0.0);
  w.disk_exterior_w.assign(n_max + 1, 0.0);
  w.exterior_divergent.assign(n_max + 1, false);
  for (int n = 1; n <= n_max; ++n) {
    const double n2 = static_cast<double>(n) * n;
    w.disk_interior_w[n] = two_pi * n2 * beta_function(n, 2.0 - 2.0 * s);
    const double a = n + 2.0 * s - 1.0;
    if (a <= 0.0) {
      w.exterior_divergent[n] = true;
      w.disk_exterior_w[n] = std::numeric_limits<double>::infinity();
    } else {
      w.disk_exterior_w[n] = two_pi * n2 * beta_function(a, 2.0 - 2.0 * s);
    }
  }
  return w;
}

inline double interior_disk_energy(const FourierSeries& f, double s) {
  int nmax = std::max(-f.min_mode(), f.max_mode());
  auto w = disk_energy_weights(nmax, s);
  double acc = 0.0;
  for (int n = f.min_mode(); n <= f.max_mode(); ++n) acc += std::norm(f[n]) * w.disk_interior_w[std::abs(n)];
  return acc;
}

inline double exterior_disk_energy(const FourierSeries& f, double s) {
  int nmax = std::max(-f.min_mode(), f.max_mode());
  auto w = disk_energy_weights(nmax, s);
  double acc = 0.0;
  for (int n = f.min_mode(); n <= f.max_mode(); ++n) {
    if (n == 0 || f[n] == cplx{}) continue;
    if (w.exterior_divergent[std::abs(n)])
      fail(ErrorKind::DivergentWeight, "exterior energy diverges for mode " + std::to_string(n));
    acc += std::norm(f[n]) * w.disk_exterior_w[std::abs(n)];
  }
  return acc;
}

// W(n,s) = integral_0^{2pi} |e^{in t}-1|^2 / |e^{it}-1|^{1+2s} dt.
inline double douglas_weight(int n, double s, double tol = 1e-9) {
  if (!(s > 0.0 && s < 1.0)) fail(ErrorKind::InvalidParameter, "s must lie in (0, 1)");
  n = std::abs(n);
  if (n == 0) return 0.0;
  const double p = 2.0 - 2.0 * s;
  auto integrand = [&](double t) {
    return 4.0 * sqr(std::sin(0.5 * n * t)) / std::pow(2.0 * std::sin(0.5 * t), 1.0 + 2.0 * s);
  };
  // First piece: substitution u = t^p removes the t^{1-2s} endpoint behavior.
  auto g = [&](double u) {
    const double t = std::pow(u, 1.0 / p);
    auto sinc = [](double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; };
    return static_cast<double>(n) * n * sqr(sinc(0.5 * n * t)) / std::pow(sinc(0.5 * t), 1.0 + 2.0 * s) / p;
  };
  // The integrand is symmetric about pi; split [0, pi] so each piece holds a bounded
  // number of oscillations.
  const int pieces = std::max(1, n / 2);
  const double step = pi / pieces;
  double err = 0.0, total = 0.0, err_total = 0.0;
  boost::math::quadrature::tanh_sinh<double> ts;
  total += ts.integrate(g, 0.0, std::pow(step, p), 1e-14, &err);
  err_total += err * std::abs(total);  // tanh_sinh reports a relative estimate
  for (int k = 1; k < pieces; ++k) {
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, k * step, (k + 1) * step, 10, 1e-14, &err);
    err_total += err;
  }
  const double W = 2.0 * total;
  // Absolute target, relaxed to 1e-10 relative for large weights where double
  // precision cannot certify an absolute 1e-9.
  if (!(2.0 * err_total <= std::max(tol, 1e-10 * W))) fail(ErrorKind::QuadratureFailure, "Douglas weight quadrature did not converge", 2.0 * err_total);
  return W;
}

inline SpectralWeights douglas_weights_circle(int n_max, double s) {
  SpectralWeights w;
  w.s = s;
  w.douglas_W.assign(n_max + 1, 0.0);
  for (int n = 1; n <= n_max; ++n) w.douglas_W[n] = douglas_weight(n, s);
  return w;
}

// Both tables, for export.
inline SpectralWeights spectral_weights(int n_max, double s) {
  SpectralWeights w = disk_energy_weights(n_max, s);
  w.douglas_W = douglas_weights_circle(n_max, s).douglas_W;
  return w;
}

// Douglas norm of a function on the unit circle from its coefficients.
inline double circle_douglas_norm(const FourierSeries& f, double s) {
  double acc = 0.0;
  for (int n = f.min_mode(); n <= f.max_mode(); ++n)
    if (n != 0 && f[n] != cplx{}) acc += std::norm(f[n]) * douglas_weight(n, s);
  return two_pi * acc;
}

// (integral_0^1 (1-r) |f'(r e^{i theta})|^2 dr)^{1/2} for the analytic part of f.
inline double g_function(const FourierSeries& f, double theta, int nodes = 256) {
  const auto q = mapped_legendre(nodes, 0.0, 1.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double r = q.x[i];
    const cplx z = std::polar(r, theta);
    cplx d{}, zp = 1.0;
    for (int n = 1; n <= f.max_mode(); ++n) {
      d += static_cast<double>(n) * f[n] * zp;
      zp *= z;
    }
    acc += q.w[i] * (1.0 - r) * std::norm(d);
  }
  return std::sqrt(acc);
}

inline void write_weights_csv(const std::string& path, const SpectralWeights& w) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::InvalidInput, "cannot open " + path);
  out << "n,W,w_i,w_e\n";
  char buf[128];
  for (int n = 0; n <= w.n_max(); ++n) {
    auto get = [&](const std::vector<double>& v) { return n < static_cast<int>(v.size()) ? v[n] : std::nan(""); };
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", n, get(w.douglas_W), get(w.disk_interior_w), get(w.disk_exterior_w));
    out << buf;
  }
}

}  // namespace plemelj
