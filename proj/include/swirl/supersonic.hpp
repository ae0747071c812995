#pragma once

#include <functional>
#include <optional>

#include "swirl/background.hpp"
#include "swirl/core.hpp"

namespace swirl {

struct PerturbationInput {
  double sigma = 0.0;
  RadialProfile w_en;
  RadialProfile q_en;
  RadialProfile p_ex;
};

/// Endpoint/parity conditions on the entrance and exit data. Throws config errors.
void validate_perturbation(const PerturbationInput& pert, bool require_swirl, double tol = 1e-6);

/// Coefficients of the stream-function operator
///   d_z(K1 d_z Psi) + r^-3 d_r(r^3 K2 d_r Psi) + F0 Psi
/// shared by the supersonic march and the subsonic Problem II.
struct StreamCoefficients {
  RadialProfile K1;      // rho q^2 p^{-2/g}
  RadialProfile K2;      // K1/(1-M^2)
  RadialProfile F0;      // (2/r) K2' - swirl * p^{-2/g}
  RadialProfile swirl;   // (rho w/r)(s' w/(g c_v) - 2(w' + w/r))
  RadialProfile P;       // p^{1/g}
};
StreamCoefficients stream_coefficients(const RadialState& st, const GasModel& gas);

struct WaveProblem {
  StreamCoefficients coef;
  RadialProfile S;  // z-independent source
  double L = 1.0;
  /// Optional z-dependent source override (manufactured solutions).
  std::function<double(double, double)> source_zr;
};

WaveProblem assemble_wave_problem(const BackgroundShockSolution& bg,
                                  const PerturbationInput& pert, double L);

struct MarchOptions {
  double cfl = 0.8;
  int max_refine = 16;
  bool parallel = true;
};

struct MarchResult {
  LinearField2D psi;  // on the (possibly refined) march grid
  std::vector<double> ghost;  // one extra leapfrog step past L
  int refine_factor = 1;
};

/// Leapfrog march of the stream-function wave equation on (0,L)x(0,r0).
MarchResult march_stream_function(const WaveProblem& prob, std::size_t nz, std::size_t nr,
                                  const MarchOptions& opt = {});
/// Plain serial reference of the same scheme, kept for cross-checking.
LinearField2D march_stream_function_reference(const WaveProblem& prob, std::size_t nz,
                                              std::size_t nr);
/// Largest z-step the march accepts on a given radial grid.
double max_stable_dz(const StreamCoefficients& coef, double dr, double cfl);

struct SupersonicLinearSolution {
  LinearField2D psi;
  LinearField2D p_dot, theta_dot, w_dot, q_dot, s_dot;
  LinearField2D theta_time_integral;
  int refine_factor = 1;
};

/// `ghost` is the row one step past the end; without it the end z-derivative is one-sided.
SupersonicLinearSolution recover_fields(const LinearField2D& psi,
                                        const BackgroundShockSolution& bg,
                                        const PerturbationInput& pert,
                                        const std::vector<double>& ghost = {});

SupersonicLinearSolution solve_supersonic(const BackgroundShockSolution& bg,
                                          const PerturbationInput& pert, double L,
                                          std::size_t nz, const MarchOptions& opt = {});

struct SupersonicResiduals {
  double cde1 = 0, cde2 = 0, cde3 = 0, cde4 = 0, cde5 = 0;
  double recovery = 0;  // mismatch of p_dot against the stream function
};
SupersonicResiduals residual_linearized_supersonic(const SupersonicLinearSolution& sol,
                                                   const BackgroundShockSolution& bg);

}  // namespace swirl
