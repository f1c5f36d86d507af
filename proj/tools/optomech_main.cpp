#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "optomech/app/app.hpp"

using namespace optomech;
using namespace optomech::app;

namespace {

struct Globals {
  std::string config;
  std::string out;
  unsigned workers = default_workers();
  std::string profile = "default";
};

void emit(const Dataset& ds, const std::string& out) {
  if (out.empty()) {
    std::cout << to_csv(ds);
  } else {
    write_dataset(ds, out);
  }
}

// A target subcommand is a scan when the config names scan.parameter,
// otherwise a single evaluation.
int run_target(Target target, const Globals& g) {
  const auto cfg = Config::load(g.config);
  const auto tol = ToleranceSet::from(cfg, parse_profile(g.profile));
  if (cfg.has("scan.parameter") || cfg.has("scan.points")) {
    auto spec = scan_spec_from(target, cfg);
    const auto ds = run_scan(spec, g.workers, tol);
    emit(ds, g.out);
    return 0;
  }
  ParamReader p(cfg);
  Dataset ds;
  ds.columns = output_columns(target);
  ds.rows.push_back(evaluate(target, p));
  ds.meta["kind"] = "point";
  ds.meta["target"] = to_string(target);
  ds.meta["parameters"] = parameters_json(p);
  ds.meta["normalizers"] = normalizers_json(cfg);
  ds.meta["tolerances"] = tol.to_json();
  ds.meta["version"] = kVersion;
  emit(ds, g.out);
  return 0;
}

int run_figure(const std::string& id, const Globals& g) {
  const auto cfg = Config::load(g.config);
  const auto tol = ToleranceSet::from(cfg, parse_profile(g.profile));
  emit(reproduce_figure(parse_figure(id), cfg, g.workers, tol), g.out);
  return 0;
}

int run_compare(const Globals& g) {
  const auto cfg = Config::load(g.config);
  const auto tol = ToleranceSet::from(cfg, parse_profile(g.profile));
  const auto table = compare_systems(cfg);
  std::printf("%-6s %-24s %-24s %-24s %-24s %-24s\n", "system", "|g_gamma0| (rad/s/m)", "gamma (rad/s)",
              "C", "|g_gamma0| MOS/row", "C MOS/row");
  for (const auto& r : table.rows) {
    if (!r.ok) {
      std::printf("%-6s %s\n", to_string(r.system).c_str(), r.error.c_str());
      continue;
    }
    std::printf("%-6s %-24.17g %-24.17g %-24.17g %-24.17g %-24.17g\n", to_string(r.system).c_str(), r.g_gamma0,
                r.gamma, r.cooperativity, r.g_ratio_mos, r.c_ratio_mos);
  }
  if (!g.out.empty()) write_dataset(comparison_dataset(table, tol), g.out);
  return 0;
}

int run_validate(const std::string& suite, const Globals& g) {
  const auto cfg = Config::load(g.config);
  const auto tol = ToleranceSet::from(cfg, parse_profile(g.profile));
  const auto rep = run_validation(parse_suite(suite), tol);
  for (const auto& c : rep.checks) {
    std::printf("%-22s %s  measured %.3e  tolerance %.3e  samples %zu\n", c.name.c_str(),
                c.passed ? "PASS" : "FAIL", c.measured, c.tolerance, c.samples);
  }
  std::printf("overall %s\n", rep.passed() ? "PASS" : "FAIL");
  return rep.passed() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optomechanics with a synthetic mirror: models, scans, figure datasets and oracle checks"};
  Globals g;
  app.add_option("--config", g.config, "configuration file (default: $OPTOMECH_CONFIG)");
  app.add_option("--out", g.out, "output CSV path; a .meta.json sidecar is written next to it");
  app.add_option("--workers", g.workers, "worker threads for scans")->check(CLI::PositiveNumber);
  app.add_option("--tolerance-profile", g.profile, "validation tolerances")
      ->check(CLI::IsMember({"default", "strict"}));
  app.require_subcommand(1);

  std::string figure_id, suite = "fast";
  std::vector<std::pair<CLI::App*, Target>> targets;
  for (Target t : {Target::synthetic, Target::mos, Target::msi, Target::mate, Target::noise}) {
    targets.emplace_back(app.add_subcommand(to_string(t), "evaluate or scan the " + to_string(t) + " model"), t);
  }
  auto* figure = app.add_subcommand("figure", "reproduce a figure dataset");
  figure->add_option("--id", figure_id, "fig2, fig3 or fig4")->required()->check(CLI::IsMember({"fig2", "fig3", "fig4"}));
  auto* compare = app.add_subcommand("compare", "MOS / MSI / MATE comparison table");
  auto* validate = app.add_subcommand("validate", "run the oracle checks");
  validate->add_option("--suite", suite, "fast or full")->check(CLI::IsMember({"fast", "full"}));
  app.fallthrough();
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    for (const auto& [sub, t] : targets) {
      if (sub->parsed()) return run_target(t, g);
    }
    if (figure->parsed()) return run_figure(figure_id, g);
    if (compare->parsed()) return run_compare(g);
    if (validate->parsed()) return run_validate(suite, g);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
