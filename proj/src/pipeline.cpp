#include "swirl/pipeline.hpp"

namespace swirl {

Stage stage_from_string(const std::string& s) {
  if (s == "background") return Stage::background;
  if (s == "supersonic") return Stage::supersonic;
  if (s == "locate") return Stage::locate;
  if (s == "solve") return Stage::solve;
  throw SolverError(ErrorKind::config, "unknown stage '" + s + "'");
}

const char* to_string(Stage s) {
  switch (s) {
    case Stage::background: return "background";
    case Stage::supersonic: return "supersonic";
    case Stage::locate: return "locate";
    case Stage::solve: return "solve";
  }
  return "?";
}

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::config:
    case ErrorKind::io:
      return 2;
    case ErrorKind::domain:
    case ErrorKind::axis:
    case ErrorKind::admissibility:
    case ErrorKind::singular:
      return 3;
    case ErrorKind::no_root:
    case ErrorKind::ambiguous_root:
    case ErrorKind::solvability:
      return 4;
    case ErrorKind::coercivity:
      return 5;
    case ErrorKind::step_size:
    case ErrorKind::numerical:
    case ErrorKind::trace:
      return 6;
  }
  return 6;
}

RunResult run_pipeline(const RunConfig& cfg, Stage stage) {
  RunResult res;
  res.requested = stage;
  res.nz = cfg.nz;
  res.nr = cfg.nr;
  res.L = cfg.L;
  res.r0 = cfg.r0;
  std::string current = "config";
  try {
    current = "background";
    res.background = cfg.mode == UpstreamMode::wq
                         ? construct_upstream_from_wq(cfg.upstream_wq(), cfg.gas)
                         : construct_upstream_from_ps(cfg.upstream_ps(), cfg.gas);
    const auto& bg = *res.background;
    res.assumptions = check_background_assumptions(bg);
    if (stage == Stage::background) return res;

    current = "config";
    if (!cfg.has_perturbation)
      throw SolverError(ErrorKind::config,
                        "stage '" + std::string(to_string(stage)) + "' needs a [perturbation] section");
    const auto pert = cfg.perturbation();

    current = "supersonic";
    res.supersonic = solve_supersonic(bg, pert, cfg.L, cfg.nz, cfg.march_options());
    res.supersonic_residuals = residual_linearized_supersonic(*res.supersonic, bg);
    if (stage == Stage::supersonic) return res;

    current = "locate";
    const auto kap = kappa_profiles(bg);
    ShockLocator loc(*res.supersonic, bg, kap, pert);
    res.I2 = loc.I2();
    res.I3 = loc.I3();
    const bool trivial = pert.sigma == 0.0 || (pert.w_en.max_abs() == 0.0 &&
                                                pert.q_en.max_abs() == 0.0 &&
                                                pert.p_ex.max_abs() == 0.0);
    if (trivial) {
      // 0 = 0: every position solves the root equation and every downstream field vanishes
      res.zero_perturbation = true;
    } else {
      try {
        res.location = locate_shock(loc, cfg.L, cfg.locator_samples);
      } catch (const SolverError& e) {
        if (e.kind() == ErrorKind::admissibility && bg.upstream.w.max_abs() == 0.0)
          throw SolverError(e.kind(), std::string(e.what()) +
                                          "; the upstream swirl wbar vanishes identically, "
                                          "so the location condition cannot hold");
        throw;
      }
    }
    if (stage == Stage::locate) return res;

    current = "traces";
    const double zs = trivial ? 0.5 * cfg.L : res.location->z_star;
    res.traces = linearized_jump_traces(*res.supersonic, bg, pert, zs);

    current = "subsonic";
    const auto cr = coercivity_radius_check(bg);
    res.coercivity = CoercivitySummary{cr.margin, cr.r_star};
    res.subsonic = approximate_subsonic_solution(bg, *res.supersonic, *res.traces, pert, zs,
                                                 cfg.L, cfg.nz, cfg.solvability_tol);
    const auto data = approximate_problem_data(bg, *res.traces, pert, zs, cfg.L, cfg.nz);
    res.subsonic_residuals = residual_linearized_subsonic(*res.subsonic, data, bg);
  } catch (const SolverError& e) {
    res.error_kind = e.kind();
    res.error_stage = current;
    res.message = e.what();
    res.exit_code = exit_code_for(e.kind());
  }
  return res;
}

}  // namespace swirl
