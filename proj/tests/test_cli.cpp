#include <sys/wait.h>

#include <cstdlib>
#include <sstream>

#include "common.hpp"

namespace fs = std::filesystem;

namespace {
const std::string kBin = PLEMELJ_LAB_BIN;
const std::string kConfigs = PLEMELJ_CONFIG_DIR;

int run(const std::string& args) {
  const std::string cmd = "PLEMELJ_THREADS=1 '" + kBin + "' " + args + " > /dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

fs::path scratch(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("plemelj_cli_" + name);
  fs::remove_all(d);
  return d;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}
}  // namespace

TEST(Cli, NormsWritesOneCsvPerFunction) {
  const auto out = scratch("norms");
  ASSERT_EQ(run("norms --config " + kConfigs + "/circle.json --N 64 --s 0.5 --out " + out.string()), 0);
  const auto rows = lines(out / "norms_0_fourier.csv");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], "curve_id,s,N,douglas,pullback_i,pullback_e,direct,band_corr");
  EXPECT_EQ(rows[1].substr(0, 17), "c784aff0220dfa4a,");
  EXPECT_TRUE(fs::exists(out / "norms_4_poly.csv"));
  EXPECT_TRUE(fs::exists(out / "norms.json"));
  fs::remove_all(out);
}

TEST(Cli, RowsCarryCurveId) {
  const auto out = scratch("split");
  ASSERT_EQ(run("plemelj --config " + kConfigs + "/circle_split.json --N 64 --out " + out.string()), 0);
  for (const char* f : {"plemelj_splits.csv", "operator_norms.csv"}) {
    const auto rows = lines(out / f);
    ASSERT_GE(rows.size(), 2u) << f;
    EXPECT_EQ(rows[0].substr(0, 9), "curve_id,");
    const std::string id = rows[1].substr(0, rows[1].find(','));
    EXPECT_EQ(id.size(), 16u);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i].substr(0, 17), id + ",");
  }
  fs::remove_all(out);
}

TEST(Cli, ValidationErrorsExitTwo) {
  const auto dir = scratch("bad");
  fs::create_directories(dir);
  write_text(dir / "broken.json", "{ not json");
  write_text(dir / "unsorted.json",
             R"({"curve": {"kind": "circle"}, "functions": [{"fourier": {"1": 1.0}}], "s_grid": [0.5],)"
             R"( "resolutions": [128, 64], "outputs": "x"})");
  EXPECT_EQ(run("norms --config " + (dir / "broken.json").string() + " --out " + (dir / "o").string()), 2);
  EXPECT_EQ(run("norms --config " + (dir / "unsorted.json").string() + " --out " + (dir / "o").string()), 2);
  EXPECT_EQ(run("norms --config " + kConfigs + "/circle.json --s 1.5 --out " + (dir / "o").string()), 2);
  EXPECT_EQ(run("norms --config " + (dir / "missing.json").string()), 2);
  EXPECT_EQ(run("bogus --config " + kConfigs + "/circle.json"), 2);
  EXPECT_EQ(run("norms"), 2);
  fs::remove_all(dir);
}

TEST(Cli, RerunIsByteIdentical) {
  const auto a = scratch("rerun_a"), b = scratch("rerun_b");
  const std::string base = "sweep-equivalence --config " + kConfigs + "/square.json --N 64 --s 0.5 --seed 9 --out ";
  ASSERT_EQ(run(base + a.string()), 0);
  ASSERT_EQ(run(base + b.string()), 0);
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    if (e.path().extension() != ".csv") continue;
    EXPECT_EQ(slurp(e.path()), slurp(b / e.path().filename())) << e.path().filename();
    ++n;
  }
  EXPECT_GE(n, 2u);
  fs::remove_all(a);
  fs::remove_all(b);
}
