// Batch driver: plemelj-lab <subcommand> --config FILE [--s LIST] [--N LIST] [--out DIR] [--seed U64]
//
// Exit codes: 0 success, 2 validation error, 3 numerical failure (files already written are kept).

#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "plemelj/plemelj.hpp"

namespace {

struct Overrides {
  std::string config, s_list, n_list, out;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

plemelj::ExperimentConfig load(const Overrides& o) {
  using namespace plemelj;
  ExperimentConfig cfg = config_from_json(read_json(o.config));
  if (!o.s_list.empty()) cfg.s_grid = parse_real_list(o.s_list);
  if (!o.n_list.empty()) cfg.resolutions = parse_size_list(o.n_list);
  if (!o.out.empty()) cfg.outputs = o.out;
  if (o.seed_set) cfg.seed = o.seed;
  validate(cfg);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  using Runner = std::function<nlohmann::json(const plemelj::ExperimentConfig&)>;
  const std::map<std::string, std::pair<Runner, std::string>> commands{
      {"norms", {plemelj::run_norms, "Douglas, pullback and direct energies per function, s and N"}},
      {"plemelj", {plemelj::run_plemelj, "Plemelj splits, jump residuals and operator norms"}},
      {"regularity", {plemelj::run_regularity, "h estimate, porosity, Ap constants and solvable interval"}},
      {"sweep-equivalence", {plemelj::run_sweep, "Douglas over pullback ratio table per s"}},
      {"murai", {plemelj::run_murai, "H^s operator norm against the Lipschitz constant"}},
  };

  CLI::App app{"Fractional Sobolev norms and the Plemelj decomposition on Jordan curves"};
  app.require_subcommand(1);
  Overrides o;
  std::string chosen;
  for (const auto& [name, entry] : commands) {
    auto* sub = app.add_subcommand(name, entry.second);
    sub->add_option("--config", o.config, "experiment config (JSON)")->required();
    sub->add_option("--s", o.s_list, "comma-separated s values, replaces s_grid");
    sub->add_option("--N", o.n_list, "comma-separated resolutions, replaces resolutions");
    sub->add_option("--out", o.out, "output directory, replaces outputs");
    sub->add_option("--seed", o.seed, "random seed")->each([&o](const std::string&) { o.seed_set = true; });
    sub->callback([&chosen, name = name] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const auto cfg = load(o);
    const auto summary = commands.at(chosen).first(cfg);
    std::cout << summary.dump(2) << '\n';
    return 0;
  } catch (const plemelj::Error& e) {
    std::cerr << "plemelj-lab " << chosen << ": " << e.what() << '\n';
    return plemelj::is_validation_error(e.kind()) ? 2 : 3;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "plemelj-lab " << chosen << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "plemelj-lab " << chosen << ": " << e.what() << '\n';
    return 3;
  }
}
