#pragma once

#include <array>

#include <Eigen/Dense>

#include "swirl/background.hpp"
#include "swirl/core.hpp"
#include "swirl/supersonic.hpp"

namespace swirl {

/// Linearized jump matrix acting on (dp, dw, dq, ds) of the downstream state.
struct ShockMatrix {
  Eigen::Matrix4d entries;
  Eigen::Matrix4d inverse;
  double det = 0.0;         // numerical
  double det_closed = 0.0;  // p(1-M^2)/((g-1)c_v)
};

/// Rows of the jump conditions; `plus` is the downstream point state.
ShockMatrix assemble_shock_matrix(const FlowState& plus, const GasModel& gas);

/// Coefficient vectors of the four algebraic jump conditions, U order (p, theta, w, q, s).
using JumpRow = Eigen::Matrix<double, 5, 1>;
std::array<JumpRow, 5> jump_rows(const FlowState& state, const GasModel& gas);

struct KappaProfiles {
  RadialProfile kappa1, kappa2, kappa3;
  RadialProfile i1;
};
KappaProfiles kappa_profiles(const BackgroundShockSolution& bg);

/// Upstream perturbation restricted to the shock position.
struct UpstreamTrace {
  RadialProfile p, theta, w, q, s;
  RadialProfile theta_integral;  // int_0^z theta_dot
};
UpstreamTrace upstream_trace(const SupersonicLinearSolution& sup, double z);

struct JumpTraces {
  RadialProfile g1, g2, g3, g4;                   // A_s^{-1} G, the reference values
  RadialProfile g1_closed, g2_closed, g3_closed, g4_closed;
  double consistency = 0.0;   // max |A_s g - G|
  double path_mismatch = 0.0; // max relative gap between the two evaluations
};

JumpTraces linearized_jump_traces(const UpstreamTrace& up, const BackgroundShockSolution& bg,
                                  const PerturbationInput& pert, const KappaProfiles& kap);
JumpTraces linearized_jump_traces(const SupersonicLinearSolution& sup,
                                  const BackgroundShockSolution& bg,
                                  const PerturbationInput& pert, double z_shock);

/// Shock slope perturbation from the two flow-angle traces.
RadialProfile linearized_shock_slope(const RadialProfile& theta_plus,
                                     const RadialProfile& theta_minus,
                                     const BackgroundShockSolution& bg);

}  // namespace swirl
