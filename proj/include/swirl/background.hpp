#pragma once

#include <optional>
#include <string>
#include <vector>

#include "swirl/core.hpp"

namespace swirl {

/// z-independent state with zero flow angle.
struct RadialState {
  RadialProfile p, w, q, s, rho;

  RadialProfile c2(const GasModel& gas) const;
  RadialProfile M2(const GasModel& gas) const;
  RadialProfile bernoulli(const GasModel& gas) const;
};

struct UpstreamSpecWQ {
  RadialProfile wbar;
  RadialProfile qbar;
  double M0sq = 4.0;
  double p0 = 1.0;
};

struct UpstreamSpecPS {
  RadialProfile pbar;
  RadialProfile sbar;
  double q0 = 2.0;
};

struct BackgroundDiagnostics {
  double upstream_momentum_residual = 0.0;
  double downstream_momentum_residual = 0.0;
  double mach_ode_residual = 0.0;
  double q_ode_residual = 0.0;
  bool t_monotone = true;
  bool upstream_supersonic = true;
  bool downstream_subsonic = true;
  bool entropy_increases = true;
};

struct BackgroundShockSolution {
  GasModel gas;
  RadialState upstream;
  RadialState downstream;
  RadialProfile t;                // 1/M^2 upstream
  std::optional<RadialProfile> Y;  // inverse path only
  BackgroundDiagnostics diag;

  double r0() const { return t.r0(); }
  std::size_t size() const { return t.size(); }
};

RadialProfile solve_t_profile(const RadialProfile& wbar, const RadialProfile& qbar, double t0,
                              const GasModel& gas);

BackgroundShockSolution construct_upstream_from_wq(const UpstreamSpecWQ& spec,
                                                   const GasModel& gas);
BackgroundShockSolution construct_upstream_from_ps(const UpstreamSpecPS& spec,
                                                   const GasModel& gas);

RadialState rh_jump(const RadialState& upstream, const GasModel& gas);

RadialProfile radial_momentum_residual(const RadialState& state);

struct MachOdeCheck {
  RadialProfile mach;                 // upstream Mach ODE residual
  RadialProfile downstream_momentum;  // downstream radial balance
};
MachOdeCheck mach_ode_residual(const BackgroundShockSolution& sol);

RadialProfile q_ode_residual(const BackgroundShockSolution& sol);

struct AssumptionEntry {
  std::string name;
  double magnitude;
  double tolerance;
  bool pass;
};
struct AssumptionReport {
  std::vector<AssumptionEntry> entries;
  bool all_first_order_pass() const;
  const AssumptionEntry& find(const std::string& name) const;
};
AssumptionReport check_background_assumptions(const BackgroundShockSolution& sol,
                                              double first_tol = 1e-5,
                                              double third_tol = 1e-2);

// Y-variable helpers of the inverse path, exposed for testing.
double y_potential(double Y, const GasModel& gas);
double y_potential_inverse(double target, const GasModel& gas);

}  // namespace swirl
