#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "swirl/rh_linear.hpp"
#include "swirl/shock_locator.hpp"

using namespace swirl;
using namespace fixtures;

TEST_CASE("jump rows are gradients of the conserved fluxes") {
  GasModel gas(1.4, 1.0, 1.0);
  const FlowState st{1.3, 0.0, 0.2, 0.9, 0.05};
  const auto rows = jump_rows(st, gas);
  auto mass = [&](const FlowState& s) {
    return derived_quantities(s, gas).rho * s.q;
  };
  auto momentum = [&](const FlowState& s) {
    return s.p + derived_quantities(s, gas).rho * s.q * s.q;
  };
  auto energy = [&](const FlowState& s) {
    return derived_quantities(s, gas).B - 0.5 * s.w * s.w;
  };
  const double h = 1e-6;
  auto grad = [&](auto fn, int comp) {
    FlowState a = st, b = st;
    double* pa[] = {&a.p, &a.theta, &a.w, &a.q, &a.s};
    double* pb[] = {&b.p, &b.theta, &b.w, &b.q, &b.s};
    *pa[comp] += h;
    *pb[comp] -= h;
    return (fn(a) - fn(b)) / (2 * h);
  };
  for (int c : {0, 3, 4}) {
    CHECK(rows[0](c) == doctest::Approx(grad(mass, c)).epsilon(1e-8));
    CHECK(rows[1](c) == doctest::Approx(grad(momentum, c)).epsilon(1e-8));
    CHECK(rows[3](c) == doctest::Approx(grad(energy, c)).epsilon(1e-8));
  }
}

TEST_CASE("shock matrix determinant matches the closed form") {
  GasModel gas(1.4, 1.0, 1.0);
  for (double q : {0.3, 0.6, 0.8, 1.5}) {
    const FlowState st{1.7, 0.0, 0.1, q, 0.2};
    const auto A = assemble_shock_matrix(st, gas);
    CHECK(A.det == doctest::Approx(A.det_closed).epsilon(1e-12));
    CHECK((A.entries * A.inverse - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  }
  const double rho = derived_quantities({1.0, 0, 0, 1.0, 0.0}, gas).rho;
  const FlowState sonic{1.0, 0.0, 0.0, std::sqrt(1.4 / rho), 0.0};
  try {
    assemble_shock_matrix(sonic, gas);
    FAIL("expected singular");
  } catch (const SolverError& e) {
    CHECK(e.kind() == ErrorKind::singular);
  }
}

TEST_CASE("jump traces: matrix and closed-form paths agree") {
  const std::size_t n = 65;
  const auto bg = reference_background(n);
  const auto pert = reference_perturbation(n);
  const auto sup = solve_supersonic(bg, pert, 1.0, n);
  const auto tr = linearized_jump_traces(sup, bg, pert, 0.3);
  CHECK(tr.consistency < 1e-14);
  CHECK(tr.path_mismatch < 1e-10);
  CHECK(max_diff(tr.g2, tr.g2_closed) < 1e-12);
  CHECK(tr.g2.front() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK_THROWS_AS(linearized_jump_traces(sup, bg, pert, 1.5), SolverError);
}

TEST_CASE("kappa profiles: i1 vanishes without swirl") {
  const auto bg = reference_background(33, 0.0);
  const auto k = kappa_profiles(bg);
  CHECK(k.i1.max_abs() < 1e-12);
  CHECK(k.kappa3.max_abs() < 1e-12);
}

TEST_CASE("root finder on synthetic data") {
  auto f = [](double z) { return z * z; };
  auto df = [](double z) { return 2 * z; };
  const auto r = locate_root(f, df, 0.25, 1.0, 101);
  CHECK(r.z == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r.monotone);
  CHECK(r.residual < 1e-15);
  try {
    locate_root(f, df, 2.0, 1.0, 101);
    FAIL("expected no_root");
  } catch (const SolverError& e) {
    CHECK(e.kind() == ErrorKind::no_root);
  }
  auto wave = [](double z) { return std::sin(10 * z); };
  try {
    locate_root(wave, {}, 0.5, 1.0, 101);
    FAIL("expected ambiguous_root");
  } catch (const SolverError& e) {
    CHECK(e.kind() == ErrorKind::ambiguous_root);
  }
}

TEST_CASE("admissible window") {
  try {
    admissible_window(0.0, 1.0, 0.1, 1.0, 1.0, 1.0);
    FAIL("expected admissibility error");
  } catch (const SolverError& e) {
    CHECK(e.kind() == ErrorKind::admissibility);
  }
  const auto w = admissible_window(1.0, 0.1, 1.0, 0.0, 1.0, 1.0);
  CHECK(w.L_star == 1.0);
  CHECK(w.ok);
  const auto w2 = admissible_window(1.0, 0.1, 1.0, 12.0, 1.0, 1.0);
  CHECK(w2.L_star < 1.0);
  CHECK(w2.L_star * w2.L_star * (1.0 - 2.0 * w2.L_star) > 0.0);
}

TEST_CASE("reference locator: window, monotonicity, residual") {
  const std::size_t n = 65;
  const auto bg = reference_background(n);
  const auto pert = reference_perturbation(n);
  const auto sup = solve_supersonic(bg, pert, 1.0, n);
  const auto kap = kappa_profiles(bg);
  ShockLocator loc(sup, bg, kap, pert);
  CHECK(loc.I3() > 0.0);
  CHECK(loc.I1(0.4) == doctest::Approx(integral_I1(0.4, sup, kap, bg)).epsilon(1e-12));
  CHECK(loc.I2() == doctest::Approx(integral_I2(pert, kap, bg)));
  const auto serial = loc.sample({0.1, 0.2, 0.3}, false);
  const auto par = loc.sample({0.1, 0.2, 0.3}, true);
  CHECK(serial == par);
  const auto rep = locate_shock(loc, 1.0);
  CHECK(rep.window_ok);
  CHECK(rep.monotone_ok);
  CHECK(rep.z_star > 0.0);
  CHECK(rep.z_star < rep.L_star);
  CHECK(std::abs(rep.I1_at_root - pert.sigma * rep.I2) < 1e-10 * pert.sigma * rep.I2);
}
