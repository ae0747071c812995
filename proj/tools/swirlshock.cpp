// swirlshock: background, supersonic, locate, solve.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "swirl/config.hpp"
#include "swirl/output.hpp"
#include "swirl/pipeline.hpp"

namespace {

struct Options {
  std::string config;
  std::string out_dir = "out";
  std::size_t nr = 0, nz = 0;
  std::string report = "json";
};

void print_summary(const swirl::RunResult& res) {
  using swirl::format_double;
  if (res.background) {
    const auto& d = res.background->diag;
    std::printf("background: upstream momentum residual %s, mach ode residual %s\n",
                format_double(d.upstream_momentum_residual).c_str(),
                format_double(d.mach_ode_residual).c_str());
  }
  if (res.supersonic) {
    const auto& r = *res.supersonic_residuals;
    std::printf("supersonic: nz %zu (refine %d), max CDE residual %s\n", res.supersonic->psi.nz(),
                res.supersonic->refine_factor,
                format_double(std::max({r.cde1, r.cde2, r.cde3, r.cde4, r.cde5})).c_str());
  }
  if (res.I3) std::printf("I2 %s  I3 %s\n", format_double(*res.I2).c_str(),
                          format_double(*res.I3).c_str());
  if (res.location) {
    const auto& l = *res.location;
    std::printf("shock: z* %s  L* %s  window_ok %d  monotone_ok %d  residual %s\n",
                format_double(l.z_star).c_str(), format_double(l.L_star).c_str(), l.window_ok,
                l.monotone_ok, format_double(l.root_residual).c_str());
  }
  if (res.subsonic) {
    const auto& r = *res.subsonic_residuals;
    std::printf("subsonic: coercivity margin %s, max residual %s, solvability %s\n",
                format_double(res.subsonic->coercivity_margin).c_str(),
                format_double(std::max({r.eq1, r.eq2, r.eq3, r.eq4, r.eq5})).c_str(),
                format_double(res.subsonic->solvability_residual).c_str());
  }
}

int run(swirl::Stage stage, const Options& o) {
  using namespace swirl;
  RunConfig cfg;
  try {
    cfg = parse_config(o.config);
    if (o.nr) cfg.nr = o.nr;
    if (o.nz) cfg.nz = o.nz;
    if (cfg.nr < 9 || cfg.nz < 9)
      throw SolverError(ErrorKind::config, "--nr and --nz must be at least 9");
    if (o.nr || o.nz) validate_config(cfg);
  } catch (const SolverError& e) {
    std::cerr << "error [" << to_string(e.kind()) << "]: " << e.what() << "\n";
    return exit_code_for(e.kind());
  }

  const auto res = run_pipeline(cfg, stage);
  print_summary(res);
  if (res.error_kind)
    std::cerr << "error [" << to_string(*res.error_kind) << "] in " << res.error_stage << ": "
              << res.message << "\n";
  try {
    write_outputs(res, o.out_dir, o.report == "csv" ? ReportFormat::csv : ReportFormat::json);
  } catch (const SolverError& e) {
    std::cerr << "error [" << to_string(e.kind()) << "]: " << e.what() << "\n";
    return exit_code_for(e.kind());
  }
  return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Swirling transonic shock solver"};
  app.require_subcommand(1);
  Options o;
  swirl::Stage chosen = swirl::Stage::solve;

  const std::pair<const char*, const char*> subs[] = {
      {"background", "special shock solution only"},
      {"supersonic", "background plus the linearized supersonic march"},
      {"locate", "up to the shock position"},
      {"solve", "full pipeline including the subsonic problem"}};
  for (const auto& [name, help] : subs) {
    auto* sc = app.add_subcommand(name, help);
    sc->add_option("--config", o.config, "INI config file")->required()->check(CLI::ExistingFile);
    sc->add_option("--out-dir", o.out_dir, "output directory");
    sc->add_option("--nr", o.nr, "radial grid size override")->check(CLI::Range(9, 1 << 20));
    sc->add_option("--nz", o.nz, "axial grid size override")->check(CLI::Range(9, 1 << 20));
    sc->add_option("--report", o.report, "report format")
        ->check(CLI::IsMember({"json", "csv"}));
    const std::string n = name;
    sc->callback([&chosen, n] { chosen = swirl::stage_from_string(n); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  return run(chosen, o);
}
