#pragma once

#include <functional>

#include "swirl/background.hpp"
#include "swirl/rh_linear.hpp"
#include "swirl/supersonic.hpp"

namespace swirl {

/// Data of the downstream linear problem on (z_shock, L) x (0, r0).
/// Empty fields mean zero.
struct SubsonicProblemData {
  double z_shock = 0.0;
  double L = 1.0;
  std::size_t nz = 65;
  LinearField2D f1, f2, f3, f4, f5;
  RadialProfile g1, g2, g3, g4;
  RadialProfile p_ex_scaled;  // sigma * p_ex
  LinearField2D H;
};

struct ProblemIResult {
  LinearField2D phi, dp1, dtheta1;
  double solvability_residual = 0.0;  // relative, Simpson quadrature
};

struct ProblemIIResult {
  LinearField2D psi, dp2, dtheta2;
  double coercivity_margin = 0.0;
};

struct SubsonicLinearSolution {
  LinearField2D dp, dtheta, dw, dq, ds, dB;
  LinearField2D dp1, dtheta1, dp2, dtheta2, phi, psi;
  RadialProfile dphi_prime;
  double solvability_residual = 0.0;
  double coercivity_margin = 0.0;
};

/// Low-level Neumann solve of d_z(a Phi_z) + (1/r) d_r(r b Phi_r) = rhs on (zlo, zhi) x (0, r0)
/// with Phi_z = flux_lo at zlo, Phi_z = flux_hi at zhi, Phi_r = 0 at r = 0, r0.
/// The solution has zero mean. `rhs_integral_tol` is the relative compatibility tolerance.
LinearField2D solve_neumann_potential(const RadialProfile& a, const RadialProfile& b, double zlo,
                                      double zhi, std::size_t nz, const LinearField2D& rhs,
                                      const RadialProfile& flux_lo, const RadialProfile& flux_hi,
                                      double rhs_integral_tol = 1e-9,
                                      double* compat_residual = nullptr);

/// Low-level Dirichlet solve of d_z(K1 Psi_z) + r^-3 d_r(r^3 K2 Psi_r) + F0 Psi = rhs,
/// Psi = 0 on z = zlo, zhi and r = r0.
LinearField2D solve_stream_elliptic(const RadialProfile& K1, const RadialProfile& K2,
                                    const RadialProfile& F0, double zlo, double zhi,
                                    std::size_t nz, const LinearField2D& rhs);

ProblemIResult solve_problem_I(const SubsonicProblemData& data, const BackgroundShockSolution& bg,
                               double solvability_tol = 1e-9);
ProblemIIResult solve_problem_II(const SubsonicProblemData& data,
                                 const BackgroundShockSolution& bg,
                                 const LinearField2D& dtheta1);

struct CoercivityReport {
  double margin = 0.0;
  double r_star = 0.0;
};
CoercivityReport coercivity_radius_check(const BackgroundShockSolution& bg);

/// Foot of the characteristic dR/dtau = H(tau, R) through (z, r), traced to z_from by RK4.
double characteristic_trace(const std::function<double(double, double)>& H, double z, double r,
                            double z_from, double step, double r0);
double characteristic_trace(const LinearField2D& H, double z, double r, double z_from);

struct TransportResult {
  LinearField2D dw, ds, dB, dq;
};
TransportResult transport_downstream(const SubsonicProblemData& data,
                                     const BackgroundShockSolution& bg,
                                     const LinearField2D& dtheta, const LinearField2D& dp);

/// f2 of the approximate problem from the shock traces.
LinearField2D approximate_f2(const JumpTraces& traces, const BackgroundShockSolution& bg,
                             double z_shock, double L, std::size_t nz);

SubsonicLinearSolution solve_subsonic(const SubsonicProblemData& data,
                                      const BackgroundShockSolution& bg,
                                      double solvability_tol = 1e-9);

/// Data of the approximate problem: traces at z_star, f2 from them, scaled exit pressure.
SubsonicProblemData approximate_problem_data(const BackgroundShockSolution& bg,
                                             const JumpTraces& traces,
                                             const PerturbationInput& pert, double z_star,
                                             double L, std::size_t nz);

SubsonicLinearSolution approximate_subsonic_solution(const BackgroundShockSolution& bg,
                                                     const SupersonicLinearSolution& sup,
                                                     const JumpTraces& traces,
                                                     const PerturbationInput& pert, double z_star,
                                                     double L, std::size_t nz,
                                                     double solvability_tol = 1e-9);

struct SubsonicResiduals {
  double eq1 = 0, eq2 = 0, eq3 = 0, eq4 = 0, eq5 = 0;
};
SubsonicResiduals residual_linearized_subsonic(const SubsonicLinearSolution& sol,
                                               const SubsonicProblemData& data,
                                               const BackgroundShockSolution& bg);

}  // namespace swirl
