#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "plemelj/beurling.hpp"
#include "plemelj/cauchy.hpp"
#include "plemelj/conformal.hpp"
#include "plemelj/functions.hpp"
#include "plemelj/geometry.hpp"
#include "plemelj/io.hpp"
#include "plemelj/regularity.hpp"
#include "plemelj/sobolev.hpp"

namespace plemelj {

struct MuraiConfig {
  int k = 4;  // r = 1 + (M / k) cos(k theta), so max |r'| = M
  std::vector<double> M{0.2, 0.5, 1.0, 2.0};
};

struct ExperimentConfig {
  CurveSpec curve;
  nlohmann::json curve_json;
  std::vector<FunctionSpec> functions;
  std::vector<double> s_grid{0.25, 0.5, 0.75};
  std::vector<std::size_t> resolutions{256};
  std::uint64_t seed = 1;
  std::filesystem::path outputs = "out";
  int grid = 512;  // quadtree cap and Beurling grid size
  std::optional<MuraiConfig> murai;
};

inline void validate(const ExperimentConfig& c) {
  if (c.s_grid.empty()) fail(ErrorKind::InvalidInput, "s_grid is empty");
  if (c.resolutions.empty()) fail(ErrorKind::InvalidInput, "resolutions is empty");
  for (std::size_t i = 1; i < c.resolutions.size(); ++i)
    if (c.resolutions[i] <= c.resolutions[i - 1]) fail(ErrorKind::InvalidInput, "resolutions must be strictly ascending");
  for (auto N : c.resolutions)
    if (N < 16 || N % 4 != 0) fail(ErrorKind::InvalidInput, "resolutions must be multiples of 4, at least 16");
  if (c.grid < 16 || !is_power_of_two(c.grid)) fail(ErrorKind::InvalidInput, "grid must be a power of two, at least 16");
  if (c.murai) {
    if (c.murai->k < 1) fail(ErrorKind::InvalidInput, "murai.k must be positive");
    for (double M : c.murai->M)
      if (!(M > 0.0 && M < c.murai->k)) fail(ErrorKind::InvalidInput, "murai.M must lie in (0, k) to keep r > 0");
  }
}

// s_grid must sit inside (0, 1) wherever Douglas norms are taken.
inline void require_open_unit_s(const std::vector<double>& s) {
  for (double v : s)
    if (!(v > 0.0 && v < 1.0)) fail(ErrorKind::InvalidParameter, "s_grid must lie in (0, 1)");
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  try {
    c.curve_json = j.at("curve");
    c.curve = curve_from_json(c.curve_json);
    if (j.contains("functions"))
      for (const auto& f : j.at("functions")) c.functions.push_back(function_from_json(f));
    if (j.contains("s_grid")) c.s_grid = j.at("s_grid").get<std::vector<double>>();
    if (j.contains("resolutions")) c.resolutions = j.at("resolutions").get<std::vector<std::size_t>>();
    c.seed = j.value("seed", std::uint64_t{1});
    c.outputs = j.value("outputs", std::string("out"));
    c.grid = j.value("grid", 512);
    if (j.contains("murai")) {
      MuraiConfig m;
      m.k = j.at("murai").value("k", 4);
      if (j.at("murai").contains("M")) m.M = j.at("murai").at("M").get<std::vector<double>>();
      c.murai = m;
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidInput, std::string("config: ") + e.what());
  }
  validate(c);
  return c;
}

namespace detail {

inline std::string function_tag(const ExperimentConfig& cfg, std::size_t i) {
  return std::to_string(i) + "_" + cfg.functions[i].label();
}

// Values of f along phi(e^{it}), t = t0 + 2 pi j / M.
inline std::vector<cplx> trace_on_disk_grid(const RiemannMap& m, const SampledCurve& c, const FunctionSpec& f,
                                            std::size_t M, double t0) {
  if (f.kind != FunctionSpec::Kind::fourier) return boundary_samples(m, [&](cplx z) { return f.value(z); }, M, t0);
  std::vector<cplx> g(M);
  parallel_for(M, [&](std::size_t j) {
    g[j] = f.at_arclength(boundary_arclength(m, c, t0 + two_pi * static_cast<double>(j) / M), c.total_length);
  });
  return g;
}

// Harmonic extension of node values on a circle, rotated to the angle of node 0.
inline ComplexFn circle_extension_from_nodes(const SampledCurve& c, const std::vector<cplx>& v, Side side) {
  const auto& cs = std::get<CircleSpec>(c.spec->kind);
  const cplx rot = std::polar(1.0, -std::arg(c.nodes[0] - cs.center));
  auto u = circle_harmonic_extension(analyze(v), cs.radius, cs.center, side);
  return [u, rot, cs](cplx z) { return u(cs.center + (z - cs.center) * rot); };
}

}  // namespace detail

struct NormRow {
  double s = 0.5;
  std::size_t N = 0;
  double douglas = 0.0, pullback_i = 0.0, pullback_e = 0.0, direct = 0.0, band = 0.0;
};

// One EnergyReport row. pullback_i and pullback_e use |grad u|^2 with weight (1 - |z|)^{1-2s}
// on the disk; direct uses d(z, curve)^{1-2s} on the interior, or (1 - |z|^2)^{1-2s} on a
// circle. Columns without a method for this curve and function are NaN.
inline NormRow norm_row(const SampledCurve& c, const std::optional<RiemannMap>& map, const FunctionSpec& f, double s,
                        int grid) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  NormRow r;
  r.s = s;
  r.N = c.size();
  const auto v = f.on_curve(c);
  const auto d = douglas_norm(c, v, s);
  r.douglas = d.value;
  r.band = d.band;
  r.pullback_i = r.pullback_e = r.direct = nan;
  if (map) {
    const std::size_t M = 4 * c.size();
    const double t0 = pi / static_cast<double>(M);
    const auto g = detail::trace_on_disk_grid(*map, c, f, M, t0);
    r.pullback_i = pullback_energy_trace(*map, g, t0, s).value;
  }
  const bool circle = c.spec && c.spec->is_circle();
  if (circle) {
    const auto& cs = std::get<CircleSpec>(c.spec->kind);
    r.pullback_e = circle_exterior_energy(analyze(v), s, cs.radius);
    const auto u = detail::circle_extension_from_nodes(c, v, Side::interior);
    r.direct = direct_weighted_energy(c, u, s, grid, WeightKind::circle_defect).value;
  } else if (f.holomorphic_inside(c)) {
    r.direct = direct_weighted_energy(c, [&](cplx z) { return f.value(z); }, s, grid).value;
  }
  return r;
}

inline std::optional<RiemannMap> map_if_available(const CurveSpec& spec) {
  if (spec.is_koch()) return std::nullopt;
  return riemann_map_for(spec);
}

// ---------------------------------------------------------------------------
// Subcommands. Each writes into cfg.outputs and returns a JSON summary.

inline nlohmann::json run_norms(const ExperimentConfig& cfg) {
  require_open_unit_s(cfg.s_grid);
  if (cfg.functions.empty()) fail(ErrorKind::InvalidInput, "norms needs at least one function");
  std::filesystem::create_directories(cfg.outputs);
  const std::string id = curve_id(cfg.curve);
  const auto map = map_if_available(cfg.curve);
  nlohmann::json summary{{"curve_id", id}, {"files", nlohmann::json::array()}};
  std::vector<SampledCurve> curves;
  for (auto N : cfg.resolutions) curves.push_back(build_curve(cfg.curve, N));
  for (std::size_t i = 0; i < cfg.functions.size(); ++i) {
    const std::string name = "norms_" + detail::function_tag(cfg, i) + ".csv";
    CsvWriter out(cfg.outputs / name, {"curve_id", "s", "N", "douglas", "pullback_i", "pullback_e", "direct", "band_corr"});
    summary["files"].push_back(name);
    for (double s : cfg.s_grid)
      for (const auto& c : curves) {
        const auto r = norm_row(c, map, cfg.functions[i], s, cfg.grid);
        out.row({id, s, static_cast<long long>(r.N), r.douglas, r.pullback_i, r.pullback_e, r.direct, r.band});
      }
  }
  write_json(cfg.outputs / "norms.json", summary);
  return summary;
}

inline std::vector<SpaceSpec> spaces_for(const NystromOperator& op, const std::vector<double>& s_grid) {
  std::vector<SpaceSpec> sp{{NormSpace::L2, 0.0}};
  if (op.mode != Discretization::uniform) return sp;
  sp.push_back({NormSpace::H1, 1.0});
  for (double s : s_grid) sp.push_back({NormSpace::Hs, s});
  return sp;
}

inline nlohmann::json run_plemelj(const ExperimentConfig& cfg) {
  require_open_unit_s(cfg.s_grid);
  std::filesystem::create_directories(cfg.outputs);
  const std::string id = curve_id(cfg.curve);
  nlohmann::json summary{{"curve_id", id}};
  CsvWriter splits(cfg.outputs / "plemelj_splits.csv",
                   {"curve_id", "function", "N", "jump_residual", "jump_nodes", "fe_scaled_r10", "fe_scaled_r100"});
  CsvWriter norms(cfg.outputs / "operator_norms.csv",
                  {"curve_id", "N", "mode", "space", "s", "norm", "iterations", "converged"});
  PowerOptions po;
  po.seed = cfg.seed;
  po.max_iter = 10000;
  for (auto N : cfg.resolutions) {
    const auto c = build_curve(cfg.curve, N);
    const auto op = build_sio(c);
    const double diam = curve_diameter(c);
    for (std::size_t i = 0; i < cfg.functions.size(); ++i) {
      const auto f = op.sample(cfg.functions[i]);
      const auto sp = plemelj_split(op, f);
      // |Fe(z)| |z - anchor| at |z - anchor| = R diam along a fixed ray
      auto scaled = [&](double R) {
        const cplx z = c.anchor + std::polar(R * diam, 0.3);
        return std::abs(sp.Fe_eval(z)) * R * diam;
      };
      splits.row({id, detail::function_tag(cfg, i), static_cast<long long>(N), sp.jump_residual,
                  static_cast<long long>(sp.jump_nodes), scaled(10.0), scaled(100.0)});
      CsvWriter traces(cfg.outputs / ("plemelj_traces_" + detail::function_tag(cfg, i) + "_N" + std::to_string(N) + ".csv"),
                       {"s", "x", "y", "f_re", "f_im", "fi_re", "fi_im", "fe_re", "fe_im"});
      for (std::size_t k = 0; k < op.size(); ++k)
        traces.row({op.rule.s[k], op.rule.z[k].real(), op.rule.z[k].imag(), f[k].real(), f[k].imag(),
                    sp.Fi_trace[k].real(), sp.Fi_trace[k].imag(), sp.Fe_trace[k].real(), sp.Fe_trace[k].imag()});
    }
    for (const auto& space : spaces_for(op, cfg.s_grid)) {
      const auto r = operator_norm(op, space, po);
      norms.row({id, static_cast<long long>(N), std::string(to_string(op.mode)), space.label(), space.s, r.value,
                 static_cast<long long>(r.iterations), static_cast<long long>(r.converged)});
      if (!r.converged) fail(ErrorKind::QuadratureFailure, "power iteration did not converge for " + space.label());
    }
  }
  write_json(cfg.outputs / "plemelj.json", summary);
  return summary;
}

inline nlohmann::json run_regularity(const ExperimentConfig& cfg) {
  require_open_unit_s(cfg.s_grid);
  std::filesystem::create_directories(cfg.outputs);
  const std::string id = curve_id(cfg.curve);
  const auto c = build_curve(cfg.curve, cfg.resolutions.back());
  const auto rep = regularity_report(c, cfg.s_grid, cfg.seed);
  CsvWriter table(cfg.outputs / "regularity_delta.csv", {"curve_id", "delta", "sup_M", "regularity_constant"});
  for (const auto& row : rep.h_delta_table) table.row({id, row.delta, row.sup_M, row.regularity_constant});
  CsvWriter ap(cfg.outputs / "ap_constants.csv", {"curve_id", "key", "value"});
  for (const auto& [k, v] : rep.ap_constants) ap.row({id, "\"" + k + "\"", v});
  auto j = to_json(rep);
  j["curve_id"] = id;
  write_json(cfg.outputs / "regularity.json", j);
  return j;
}

// Douglas norm over the interior pullback energy for every function, per s and N.
inline nlohmann::json run_sweep(const ExperimentConfig& cfg) {
  require_open_unit_s(cfg.s_grid);
  if (cfg.functions.empty()) fail(ErrorKind::InvalidInput, "sweep-equivalence needs at least one function");
  const auto map = map_if_available(cfg.curve);
  if (!map) fail(ErrorKind::InvalidCurve, "sweep-equivalence needs a curve with a Riemann map");
  std::filesystem::create_directories(cfg.outputs);
  const std::string id = curve_id(cfg.curve);
  CsvWriter rows(cfg.outputs / "sweep_ratios.csv", {"curve_id", "s", "N", "function", "douglas", "pullback_i", "ratio"});
  CsvWriter table(cfg.outputs / "sweep_summary.csv", {"curve_id", "s", "N", "min_ratio", "max_ratio", "max_over_min"});
  nlohmann::json summary{{"curve_id", id}, {"rows", nlohmann::json::array()}};
  for (double s : cfg.s_grid)
    for (auto N : cfg.resolutions) {
      const auto c = build_curve(cfg.curve, N);
      double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
      for (std::size_t i = 0; i < cfg.functions.size(); ++i) {
        const auto r = norm_row(c, map, cfg.functions[i], s, cfg.grid);
        const double q = r.douglas / r.pullback_i;
        if (!std::isfinite(q) || q <= 0.0) fail(ErrorKind::QuadratureFailure, "non-finite norm ratio", q);
        lo = std::min(lo, q);
        hi = std::max(hi, q);
        rows.row({id, s, static_cast<long long>(N), detail::function_tag(cfg, i), r.douglas, r.pullback_i, q});
      }
      table.row({id, s, static_cast<long long>(N), lo, hi, hi / lo});
      summary["rows"].push_back({{"s", s}, {"N", N}, {"min", lo}, {"max", hi}, {"max_over_min", hi / lo}});
    }
  write_json(cfg.outputs / "sweep.json", summary);
  return summary;
}

inline CurveSpec murai_curve(int k, double M) {
  PolarLipschitzSpec p;
  p.coeffs = {{0, 1.0}, {k, M / k}};
  return CurveSpec{p};
}

// Least-squares slope of y on x.
inline double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i] / n, my += y[i] / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += sqr(x[i] - mx);
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

// Operator norm of the Cauchy operator in H^s against the Lipschitz constant M of a polar graph.
inline nlohmann::json run_murai(const ExperimentConfig& cfg) {
  require_open_unit_s(cfg.s_grid);
  const MuraiConfig mc = cfg.murai.value_or(MuraiConfig{});
  std::filesystem::create_directories(cfg.outputs);
  CsvWriter rows(cfg.outputs / "murai.csv", {"curve_id", "M", "N", "space", "s", "norm", "iterations", "converged"});
  CsvWriter fits(cfg.outputs / "murai_fit.csv", {"N", "s", "slope", "min_norm", "max_norm", "spread"});
  PowerOptions po;
  po.seed = cfg.seed;
  po.max_iter = 10000;
  nlohmann::json summary{{"k", mc.k}, {"M", mc.M}, {"fits", nlohmann::json::array()}};
  for (auto N : cfg.resolutions) {
    std::vector<std::vector<double>> norm(cfg.s_grid.size());
    std::vector<double> logm;
    for (double M : mc.M) {
      const auto spec = murai_curve(mc.k, M);
      const auto op = build_sio(build_curve(spec, N));
      logm.push_back(std::log1p(M));
      for (std::size_t i = 0; i < cfg.s_grid.size(); ++i) {
        const SpaceSpec sp{NormSpace::Hs, cfg.s_grid[i]};
        const auto r = operator_norm(op, sp, po);
        rows.row({curve_id(spec), M, static_cast<long long>(N), sp.label(), sp.s, r.value,
                  static_cast<long long>(r.iterations), static_cast<long long>(r.converged)});
        if (!r.converged) fail(ErrorKind::QuadratureFailure, "power iteration did not converge");
        norm[i].push_back(r.value);
      }
    }
    for (std::size_t i = 0; i < cfg.s_grid.size(); ++i) {
      std::vector<double> y;
      for (double v : norm[i]) y.push_back(std::log(v));
      const double slope = fitted_slope(logm, y);
      const double lo = *std::min_element(norm[i].begin(), norm[i].end());
      const double hi = *std::max_element(norm[i].begin(), norm[i].end());
      fits.row({static_cast<long long>(N), cfg.s_grid[i], slope, lo, hi, (hi - lo) / lo});
      summary["fits"].push_back({{"N", N}, {"s", cfg.s_grid[i]}, {"slope", slope}, {"spread", (hi - lo) / lo}});
    }
  }
  write_json(cfg.outputs / "murai.json", summary);
  return summary;
}

}  // namespace plemelj
