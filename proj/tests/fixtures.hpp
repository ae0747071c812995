#pragma once

#include <cmath>
#include <numbers>

#include "swirl/background.hpp"
#include "swirl/supersonic.hpp"

namespace fixtures {

using namespace swirl;

inline RadialProfile sin_bump(std::size_t n, double a) {
  return RadialProfile::from_function(
      1.0, n, [a](double r) { return a * std::sin(std::numbers::pi * r); }, Parity::odd);
}

inline RadialProfile constant(std::size_t n, double c) {
  return RadialProfile::constant(1.0, n, c).with_parity(Parity::even);
}

// Same background and data as configs/reference_swirl.ini.
inline BackgroundShockSolution reference_background(std::size_t n, double swirl = 0.05) {
  GasModel gas(1.4, 1.0, 1.0);
  return construct_upstream_from_wq({sin_bump(n, swirl), constant(n, 2.0), 4.0, 1.0}, gas);
}

inline PerturbationInput reference_perturbation(std::size_t n, double sigma = 0.01) {
  PerturbationInput p;
  p.sigma = sigma;
  p.w_en = sin_bump(n, 1.0);
  p.q_en = constant(n, 0.0);
  p.p_ex = constant(n, -1e-5);
  return p;
}

inline double max_diff(const LinearField2D& a, const LinearField2D& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.values().size(); ++k)
    m = std::max(m, std::abs(a.values()[k] - b.values()[k]));
  return m;
}

inline double max_diff(const RadialProfile& a, const RadialProfile& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace fixtures
