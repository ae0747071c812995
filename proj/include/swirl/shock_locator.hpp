#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "swirl/background.hpp"
#include "swirl/rh_linear.hpp"
#include "swirl/supersonic.hpp"

namespace swirl {

/// Radial weights of the solvability integrals, built once per background.
class ShockLocator {
 public:
  ShockLocator(const SupersonicLinearSolution& sup, const BackgroundShockSolution& bg,
               const KappaProfiles& kap, const PerturbationInput& pert);

  double I1(double z) const;
  double dI1(double z) const;
  double I2() const { return I2_; }
  double I3() const { return I3_; }
  double sigma() const { return sigma_; }
  double zmax() const { return sup_.psi.zhi(); }
  /// max |d^2 theta_dot / dz^2| over the grid.
  double theta_curvature_bound() const;
  double abs_i1_integral() const { return abs_i1_; }

  /// I1 on a list of z values; OpenMP over the list when parallel.
  std::vector<double> sample(const std::vector<double>& zs, bool parallel = true) const;

 private:
  const SupersonicLinearSolution& sup_;
  RadialProfile wp_;  // weight of p_dot
  RadialProfile wt_;  // weight of int theta_dot
  RadialProfile i1_;
  double I2_ = 0.0, I3_ = 0.0, sigma_ = 0.0, abs_i1_ = 0.0;
};

double integral_I1(double z, const SupersonicLinearSolution& sup, const KappaProfiles& kap,
                   const BackgroundShockSolution& bg);
double integral_I2(const PerturbationInput& pert, const KappaProfiles& kap,
                   const BackgroundShockSolution& bg);
double integral_I3(const PerturbationInput& pert, const KappaProfiles& kap,
                   const BackgroundShockSolution& bg);

struct AdmissibleWindow {
  double L_star = 0.0;
  bool ok = false;
  double curvature_bound = 0.0;
};
/// Throws an admissibility error when I3 <= 0.
AdmissibleWindow admissible_window(double I3, double I2, double sigma, double curvature_bound,
                                   double abs_i1, double L);

struct ShockLocationReport {
  double z_star = 0.0;
  std::vector<std::pair<double, double>> I1_samples;
  double I2 = 0.0, I3 = 0.0;
  double L_star = 0.0;
  bool window_ok = false;
  bool monotone_ok = false;
  double root_residual = 0.0;
  double I1_at_root = 0.0;
};

/// Root of I1(z) = target on (eps*zhi, zhi). Bisection then secant/Newton polish.
struct RootResult {
  double z = 0.0;
  double residual = 0.0;
  bool monotone = false;
  std::vector<std::pair<double, double>> samples;
};
RootResult locate_root(const std::function<double(double)>& I1,
                       const std::function<double(double)>& dI1, double target, double zhi,
                       std::size_t nsamples = 257,
                       const std::function<std::vector<double>(const std::vector<double>&)>&
                           sampler = {});

ShockLocationReport locate_shock(const ShockLocator& loc, double L, std::size_t nsamples = 257);

}  // namespace swirl
