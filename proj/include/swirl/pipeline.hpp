#pragma once

#include <optional>
#include <string>

#include "swirl/background.hpp"
#include "swirl/config.hpp"
#include "swirl/rh_linear.hpp"
#include "swirl/shock_locator.hpp"
#include "swirl/subsonic.hpp"
#include "swirl/supersonic.hpp"

namespace swirl {

enum class Stage { background, supersonic, locate, solve };

Stage stage_from_string(const std::string& s);
const char* to_string(Stage s);

/// Process exit status for each error class.
int exit_code_for(ErrorKind k);

struct CoercivitySummary {
  double margin = 0.0;
  double r_star = 0.0;
};

struct RunResult {
  Stage requested = Stage::solve;
  int exit_code = 0;
  std::optional<ErrorKind> error_kind;
  std::string error_stage;
  std::string message;

  std::optional<BackgroundShockSolution> background;
  std::optional<AssumptionReport> assumptions;
  std::optional<SupersonicLinearSolution> supersonic;
  std::optional<SupersonicResiduals> supersonic_residuals;
  std::optional<double> I2, I3;  // set once computed, even if location fails
  std::optional<ShockLocationReport> location;
  std::optional<JumpTraces> traces;
  std::optional<SubsonicLinearSolution> subsonic;
  std::optional<SubsonicResiduals> subsonic_residuals;
  std::optional<CoercivitySummary> coercivity;
  bool zero_perturbation = false;  // no location; downstream solved at L/2

  std::size_t nz = 0, nr = 0;
  double L = 0.0, r0 = 0.0;
};

/// Runs the stages up to `stage`. Solver errors are caught and mapped to an exit code;
/// everything computed before the failure is kept.
RunResult run_pipeline(const RunConfig& cfg, Stage stage = Stage::solve);

}  // namespace swirl
