// Acceptance run: one PASS/FAIL line per criterion with its measurements and wall time.
//
// Exit status is 0 when every FAIL is listed in kKnownFail, 1 otherwise.

#include <sys/wait.h>

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "plemelj/plemelj.hpp"

using namespace plemelj;
namespace fs = std::filesystem;

namespace {

// Criterion 4: the s = 1/2 norms move by about 21% over M in (0.2, 2); see README.
const std::set<int> kKnownFail{4};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;
  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    notes.push_back(what + (ok ? "" : " [x]"));
  }
};

std::vector<cplx> at_nodes(const NystromOperator& op, const std::function<cplx(cplx)>& f) {
  std::vector<cplx> v(op.size());
  for (std::size_t k = 0; k < op.size(); ++k) v[k] = f(op.rule.z[k]);
  return v;
}

CurveSpec circle() { return CurveSpec{CircleSpec{}}; }

// [DERIVED] 2 pi W(n, s) by mpmath quadrature (tools/oracle_values.py), rows n = 1, 2, 3, 5.
const std::map<std::pair<int, double>, double> kDouglas{
    {{1, 0.25}, 42.58557445142258},  {{2, 0.25}, 68.136919122276128}, {{3, 0.25}, 88.010187199606666},
    {{5, 0.25}, 119.66353725942725}, {{1, 0.5}, 39.478417604357434},  {{2, 0.5}, 78.956835208714869},
    {{3, 0.5}, 118.4352528130723},   {{5, 0.5}, 197.39208802178717},  {{1, 0.75}, 46.597979083334852},
    {{2, 0.75}, 124.26127755555961}, {{3, 0.75}, 224.11408987699143}, {{5, 0.75}, 475.8642106389044}};

Outcome circle_norms() {
  Outcome o;
  const auto c = build_curve(circle(), 512);
  double worst_d = 0.0, worst_f = 0.0, worst_e = 0.0;
  for (int n : {1, 2, 3, 5})
    for (double s : {0.25, 0.5, 0.75}) {
      std::vector<cplx> v(c.size());
      for (std::size_t k = 0; k < c.size(); ++k) v[k] = std::pow(c.nodes[k], n);
      const double d = douglas_norm(c, v, s).value;
      worst_d = std::max(worst_d, std::abs(d / kDouglas.at({n, s}) - 1.0));
      if (s == 0.5) worst_f = std::max(worst_f, std::abs(d / (4.0 * pi * pi * n) - 1.0));
      const double e = direct_weighted_energy(c, [n](cplx z) { return std::pow(z, n); }, s, 512, WeightKind::circle_defect).value;
      worst_e = std::max(worst_e, std::abs(e / (two_pi * n * n * std::beta(double(n), 2.0 - 2.0 * s)) - 1.0));
    }
  o.check(worst_d <= 0.01, fmt("douglas vs 2piW max rel %.2e", worst_d));
  o.check(worst_f <= 0.01, fmt("s=1/2 vs 4pi^2 n %.2e", worst_f));
  o.check(worst_e <= 0.01, fmt("direct vs 2pi n^2 B %.2e", worst_e));
  return o;
}

Outcome circle_plemelj() {
  Outcome o;
  const auto op = build_sio(build_curve(circle(), 256));
  const auto sp = plemelj_split(op, at_nodes(op, [](cplx z) { return z + 1.0 / z; }));
  double e = 0.0;
  for (std::size_t k = 0; k < op.size(); ++k) {
    const cplx z = op.rule.z[k];
    e = std::max({e, std::abs(sp.Fi_trace[k] - z), std::abs(sp.Fe_trace[k] + 1.0 / z)});
  }
  const cplx dir = std::polar(1.0, 0.3);
  const double a = std::abs(sp.Fe_eval(10.0 * dir)) * 10.0, b = std::abs(sp.Fe_eval(100.0 * dir)) * 100.0;
  o.check(e < 1e-6, fmt("node error %.2e", e));
  o.check(sp.jump_residual < 1e-6, fmt("jump residual %.2e", sp.jump_residual));
  o.check(std::abs(b / a - 1.0) <= 0.05, fmt("|Fe(R)|R %.6f, %.6f", a, b));
  return o;
}

Outcome operator_norms() {
  Outcome o;
  const auto op = build_sio(build_curve(circle(), 256));
  for (const SpaceSpec& sp : {SpaceSpec{NormSpace::L2, 0.0}, SpaceSpec{NormSpace::H1, 1.0}, SpaceSpec{NormSpace::Hs, 0.5}}) {
    const auto r = operator_norm(op, sp);
    o.check(r.converged && std::abs(r.value - 0.5) <= 1e-4, fmt("circle %s %.8f", sp.label().c_str(), r.value));
  }
  const CurveSpec ellipse{EllipseSpec{2.0, 1.0}};
  const CurveSpec polar{PolarLipschitzSpec{{{0, 1.0}, {4, 0.125}}}};
  for (const auto& [name, spec] : {std::pair{"ellipse", ellipse}, std::pair{"polar M=0.5", polar}}) {
    const auto p = build_sio(build_curve(spec, 1024));
    const auto l2 = operator_norm(p, {NormSpace::L2, 0.0});
    const auto h1 = operator_norm(p, {NormSpace::H1, 1.0});
    const double gap = std::abs(h1.value - l2.value) / l2.value;
    o.check(l2.converged && h1.converged && gap <= 0.1, fmt("%s L2 %.6f H1 %.6f gap %.2e", name, l2.value, h1.value, gap));
  }
  return o;
}

Outcome murai() {
  Outcome o;
  const std::vector<double> Ms{0.2, 0.5, 1.0, 2.0}, ss{0.1, 0.5, 0.9};
  std::vector<std::vector<double>> norms(ss.size());
  std::vector<double> x;
  PowerOptions po;
  po.max_iter = 10000;
  bool converged = true;
  for (double M : Ms) {
    const auto op = build_sio(build_curve(murai_curve(4, M), 512));
    x.push_back(std::log1p(M));
    for (std::size_t i = 0; i < ss.size(); ++i) {
      const auto r = operator_norm(op, {NormSpace::Hs, ss[i]}, po);
      converged = converged && r.converged;
      norms[i].push_back(r.value);
    }
  }
  o.check(converged, "power iteration converged");
  for (std::size_t i = 0; i < ss.size(); ++i) {
    std::vector<double> y;
    for (double v : norms[i]) y.push_back(std::log(v));
    const double lo = *std::min_element(norms[i].begin(), norms[i].end());
    const double hi = *std::max_element(norms[i].begin(), norms[i].end());
    if (ss[i] == 0.5) {
      o.check((hi - lo) / lo <= 0.15, fmt("s=0.5 spread %.3f (%.4f..%.4f)", (hi - lo) / lo, lo, hi));
    } else {
      const double slope = fitted_slope(x, y), cap = 1.5 * std::abs(1.0 - 2.0 * ss[i]) + 0.3;
      o.check(slope <= cap, fmt("s=%.1f slope %.3f <= %.2f", ss[i], slope, cap));
    }
  }
  return o;
}

Outcome beurling() {
  Outcome o;
  const auto cal = calibrate_beurling(1024);
  o.check(cal.relative_error < 1e-4, fmt("calibration %.2e", cal.relative_error));
  o.check(cal.isometry_error < 1e-6, fmt("isometry %.2e", cal.isometry_error));
  const auto c = build_curve(circle(), 512);
  FourierSeries conj_z(16);
  conj_z.at(-1) = 1.0;
  const auto b = make_grid_box(c, 1024);
  auto Fe = beurling_transform(dbar_field(c, circle_harmonic_extension(conj_z, 1.0, 0.0, Side::interior), Side::interior, b));
  double worst = 0.0;
  // Annulus inside one diameter of the curve; farther out the periodic images of the box dominate.
  for (int iy = 0; iy < b.n; iy += 4)
    for (int ix = 0; ix < b.n; ix += 4) {
      const cplx z = b.cell(ix, iy);
      if (std::abs(z) > 1.2 && std::abs(z) < 2.0) worst = std::max(worst, std::abs(-Fe.at(ix, iy) * z * z - 1.0));
    }
  o.check(worst <= 0.02, fmt("Fe' z^2 - 1 max %.2e on 1.2<|z|<2", worst));
  FourierSeries f(16);
  f.at(1) = 0.5, f.at(-1) = 0.5, f.at(2) = 0.3;
  const auto ui = circle_harmonic_extension(f, 1.0, 0.0, Side::interior);
  const auto ue = circle_harmonic_extension(f, 1.0, 0.0, Side::exterior);
  constexpr double C = 2.0;
  double top = 0.0;
  for (int n : {512, 1024})
    for (double s : {0.25, 0.5, 0.75}) {
      const auto r = dirichlet_split_grid(c, ui, ue, s, n);
      top = std::max({top, r.ratio_interior, r.ratio_exterior});
    }
  o.check(top <= C, fmt("split ratios max %.3f <= %.1f", top, C));
  return o;
}

Outcome regularity() {
  Outcome o;
  const auto hc = estimate_h(build_curve(circle(), 4096)).h;
  const auto hs = estimate_h(build_curve(CurveSpec{PolygonSpec{{{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}}}, 256)).h;
  const auto hk = estimate_h(build_curve(CurveSpec{KochSpec{5, 1.0}}, 1024)).h;
  o.check(hc >= 0.95 && hc <= 1.05, fmt("circle h %.4f", hc));
  o.check(hs >= 0.95 && hs <= 1.05, fmt("square h %.4f", hs));
  o.check(hk >= 1.16 && hk <= 1.36, fmt("koch5 h %.4f", hk));
  const auto iv = solvable_interval(1.0);
  o.check(iv.first == 0.0 && iv.second == 1.0, fmt("interval(1) = (%g, %g)", iv.first, iv.second));
  const auto c = build_curve(circle(), 1024);
  double worst = 0.0;
  for (double s : {0.25, 0.5, 0.75}) {
    const auto r = ap_constant_plane(c, 2.0 - 2.0 * s, 2);
    const double lo = *std::min_element(r.per_radius.begin(), r.per_radius.end());
    const double hi = *std::max_element(r.per_radius.begin(), r.per_radius.end());
    worst = std::max(worst, hi / lo);
    o.check(!r.divergent && std::isfinite(r.value), fmt("A2 s=%.2f %.4f", s, r.value));
  }
  o.check(worst <= 1.5, fmt("A2 across radii max/min %.3f", worst));
  const auto div = ap_constant_plane(c, -0.2, 2);
  ApOptions ao;
  std::vector<double> cut;
  for (double eps : {1e-3, 1e-4, 1e-5, 1e-6}) {
    ao.cutoff = eps;
    cut.push_back(ap_constant_plane(c, -0.2, 2, ao).value);
  }
  const bool grows = std::is_sorted(cut.begin(), cut.end()) && cut.back() > 2.0 * cut.front();
  o.check(div.divergent && grows, fmt("alpha=-0.2 %s, cutoffs %.1f..%.1f", div.divergent ? "divergent" : "finite", cut.front(), cut.back()));
  return o;
}

Outcome sweep(const fs::path& configs) {
  Outcome o;
  ExperimentConfig cfg = config_from_json(read_json(configs / "square.json"));
  const auto map = map_if_available(cfg.curve);
  for (double s : {0.25, 0.5, 0.75}) {
    std::vector<std::pair<double, double>> bracket;
    for (std::size_t N : {256u, 512u}) {
      const auto c = build_curve(cfg.curve, N);
      double lo = 1e300, hi = 0.0;
      for (const auto& f : cfg.functions) {
        const auto r = norm_row(c, map, f, s, cfg.grid);
        lo = std::min(lo, r.douglas / r.pullback_i), hi = std::max(hi, r.douglas / r.pullback_i);
      }
      bracket.push_back({lo, hi});
      o.check(hi / lo <= 10.0, fmt("s=%.2f N=%zu max/min %.3f", s, N, hi / lo));
    }
    const double dl = std::abs(bracket[1].first / bracket[0].first - 1.0);
    const double dh = std::abs(bracket[1].second / bracket[0].second - 1.0);
    o.check(dl <= 0.2 && dh <= 0.2, fmt("s=%.2f bracket drift %.3f, %.3f", s, dl, dh));
  }
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism(const std::string& lab, const fs::path& configs, const fs::path& work) {
  Outcome o;
  struct Run {
    std::string cmd, config, extra;
  };
  const std::vector<Run> runs{{"norms", "circle.json", "--N 128"},
                              {"plemelj", "circle_split.json", "--N 128"},
                              {"sweep-equivalence", "square.json", "--N 128"},
                              {"regularity", "regularity_square.json", ""},
                              {"murai", "murai.json", "--N 64"}};
  std::size_t files = 0, same = 0;
  bool ran = true;
  for (const auto& [cmd, config, extra] : runs) {
    fs::path dirs[2];
    for (int k = 0; k < 2; ++k) {
      dirs[k] = work / (cmd + "_" + std::to_string(k));
      fs::remove_all(dirs[k]);
      const std::string line = "PLEMELJ_THREADS=1 '" + lab + "' " + cmd + " --config '" + (configs / config).string() + "' " +
                               extra + " --seed 11 --out '" + dirs[k].string() + "' > /dev/null 2>&1";
      const int st = std::system(line.c_str());
      ran = ran && WIFEXITED(st) && WEXITSTATUS(st) == 0;
    }
    for (const auto& e : fs::directory_iterator(dirs[0])) {
      if (e.path().extension() != ".csv") continue;
      ++files;
      same += slurp(e.path()) == slurp(dirs[1] / e.path().filename());
    }
  }
  o.check(ran, "all runs exit 0");
  o.check(files > 0 && same == files, fmt("%zu of %zu CSV files identical", same, files));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string lab, configs = "configs", report = "acceptance_report.txt", work = (fs::temp_directory_path() / "plemelj_acceptance").string();
  std::vector<int> only;
  app.add_option("--lab", lab, "plemelj-lab binary")->required();
  app.add_option("--configs", configs, "config directory");
  app.add_option("--report", report, "report file");
  app.add_option("--work", work, "scratch directory for the determinism runs");
  app.add_option("--only", only, "run only these criteria");
  CLI11_PARSE(app, argc, argv);

  struct Criterion {
    int id;
    const char* name;
    double limit;  // seconds
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all{
      {1, "circle norms", 60.0, circle_norms},
      {2, "circle Plemelj split", 5.0, circle_plemelj},
      {3, "operator norms", 180.0, operator_norms},
      {4, "Lipschitz trend", 600.0, murai},
      {5, "Beurling pipeline", 300.0, beurling},
      {6, "regularity", 600.0, regularity},
      {7, "square norm equivalence", 600.0, [&] { return sweep(configs); }},
      {8, "determinism", 600.0, [&] { return determinism(lab, configs, work); }},
  };
  fs::create_directories(work);
  std::ofstream out(report);
  bool unexpected = false;
  for (const auto& c : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.check(false, std::string("error: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.check(secs < c.limit, fmt("%.1f s < %.0f s", secs, c.limit));
    std::string line = fmt("%s %d %s:", o.pass ? "PASS" : "FAIL", c.id, c.name);
    for (std::size_t i = 0; i < o.notes.size(); ++i) line += (i ? "; " : " ") + o.notes[i];
    if (!o.pass && kKnownFail.count(c.id)) line += " (known)";
    std::cout << line << std::endl;
    out << line << "\n";
    unexpected = unexpected || (!o.pass && !kKnownFail.count(c.id));
  }
  fs::remove_all(work);
  return unexpected ? 1 : 0;
}
